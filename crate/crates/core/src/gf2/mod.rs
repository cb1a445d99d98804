//! GF(2) linear algebra over edge-indexed vectors: cycle-space bases, span
//! queries, cycle enumeration and even-subgraph predicates.

mod basis;
mod cycles;
mod edge_vector;

pub use basis::Gf2Basis;
pub use cycles::{
    cycle_space_dim, enumerate_cycles, enumerate_cycles_through, fundamental_cycles, is_even, Cycle,
    DEFAULT_CYCLE_BUDGET,
};
pub use edge_vector::{xor_sum, EdgeVector};
