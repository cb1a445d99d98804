use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown graph spec `{0}`")]
    UnknownGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid edge ({0}, {1}): {2}")]
    InvalidEdge(usize, usize, &'static str),

    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),

    #[error("edge vector length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("{what} budget exceeded (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: usize },

    #[error("edge set is not a spanning forest: {0}")]
    InvalidForest(&'static str),

    #[error("invalid cycle: {0}")]
    InvalidCycle(&'static str),

    #[error("vertex pair ({0}, {1}) is disconnected in the distance oracle")]
    Disconnected(usize, usize),

    #[error("structural violation: {0}")]
    StructuralViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
