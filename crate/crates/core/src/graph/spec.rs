use std::fmt;
use std::str::FromStr;

use super::{build_named, DLBox, Graph};
use crate::error::{Error, Result};

/// Textual graph description, e.g. `grid:4x4`, `torus:6x6`, `dl:n=3,margin=1`,
/// `k4`, `path:3` or `path(3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Named { name: String, params: Vec<usize> },
    Dl { n: usize, margin: usize },
}

/// A built graph; DL boxes keep their coordinates.
#[derive(Clone, Debug)]
pub enum SpecTarget {
    Plain(Graph),
    Dl(Box<DLBox>),
}

impl SpecTarget {
    pub fn graph(&self) -> &Graph {
        match self {
            SpecTarget::Plain(g) => g,
            SpecTarget::Dl(b) => b.graph(),
        }
    }

    pub fn dl_box(&self) -> Option<&DLBox> {
        match self {
            SpecTarget::Dl(b) => Some(b),
            SpecTarget::Plain(_) => None,
        }
    }
}

fn parse_usize(s: &str, spec: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::UnknownGraph(spec.to_string()))
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let s = spec.trim();
        let (name, args) = if let Some((name, rest)) = s.split_once(':') {
            (name, Some(rest))
        } else if let Some((name, rest)) = s.split_once('(') {
            let rest = rest.strip_suffix(')').ok_or_else(|| Error::UnknownGraph(spec.to_string()))?;
            (name, Some(rest))
        } else {
            (s, None)
        };
        let name = name.trim().to_ascii_lowercase();

        if name == "dl" {
            let mut n = None;
            let mut margin = 0;
            for part in args.unwrap_or("").split(',').filter(|p| !p.trim().is_empty()) {
                let (k, v) = part.split_once('=').ok_or_else(|| Error::UnknownGraph(spec.to_string()))?;
                match k.trim() {
                    "n" => n = Some(parse_usize(v, spec)?),
                    "margin" | "m" => margin = parse_usize(v, spec)?,
                    _ => return Err(Error::UnknownGraph(spec.to_string())),
                }
            }
            let n = n.ok_or_else(|| Error::UnknownGraph(spec.to_string()))?;
            return Ok(GraphSpec::Dl { n, margin });
        }

        let params = match args {
            None => Vec::new(),
            Some(a) => a
                .split(['x', ',', 'X'])
                .map(|p| parse_usize(p, spec))
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(GraphSpec::Named { name, params })
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Dl { n, margin } => write!(f, "dl:n={n},margin={margin}"),
            GraphSpec::Named { name, params } if params.is_empty() => write!(f, "{name}"),
            GraphSpec::Named { name, params } => {
                let sep = if matches!(name.as_str(), "grid" | "torus") { "x" } else { "," };
                let joined: Vec<String> = params.iter().map(ToString::to_string).collect();
                write!(f, "{name}:{}", joined.join(sep))
            }
        }
    }
}

impl GraphSpec {
    pub fn build(&self) -> Result<SpecTarget> {
        match self {
            GraphSpec::Dl { n, margin } => DLBox::build(*n, *margin).map(|b| SpecTarget::Dl(Box::new(b))),
            GraphSpec::Named { name, params } => build_named(name, params).map(SpecTarget::Plain),
        }
    }

    /// Vertex keyword resolution: a plain id, `o` for DL boxes, or `center`
    /// for grids and tori.
    pub fn resolve_vertex(&self, target: &SpecTarget, key: &str) -> Result<usize> {
        let v = match (key.trim(), self) {
            ("o", GraphSpec::Dl { .. }) => target.dl_box().map(DLBox::o).unwrap_or(0),
            ("center", GraphSpec::Named { name, params }) if matches!(name.as_str(), "grid" | "torus") => {
                super::grid_vertex(params[1], params[0] / 2, params[1] / 2)
            }
            (k, _) => k.parse().map_err(|_| Error::InvalidParameter(format!("unknown vertex `{k}`")))?,
        };
        target.graph().check_vertex(v)?;
        Ok(v)
    }
}
