//! Geodesic-cycle predicates and the distance oracles they query.
//!
//! A cycle is geodesic when, for every pair of its vertices, the shorter of
//! the two arcs between them is a shortest path of the reference graph.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{enumerate_cycles_through, Cycle};
use crate::graph::{DLBox, Distances, Graph, GraphView};

/// Answer of a distance query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    Exact(u32),
    Unreachable,
    /// The value changed between enlargements of a truncated graph.
    Unstable,
}

/// Shortest-path distances between vertices of a fixed domain.
///
/// Implementations must be safe to query from several threads at once.
pub trait DistanceOracle: Sync {
    fn domain_size(&self) -> usize;

    fn distance(&self, u: usize, v: usize) -> Distance;
}

/// Lazily filled per-source BFS tables. Concurrent fills of one source
/// compute the same table, so whichever lands first is kept.
#[derive(Debug, Default)]
struct BfsCache {
    tables: Vec<OnceLock<Distances>>,
}

impl BfsCache {
    fn new(n: usize) -> Self {
        BfsCache { tables: (0..n).map(|_| OnceLock::new()).collect() }
    }

    fn get(&self, view: &GraphView<'_>, u: usize, v: usize) -> Option<u32> {
        self.tables[u].get_or_init(|| view.bfs_distances(u)).get(v)
    }
}

/// Exact BFS distances in a graph or in a spanning subgraph of it.
#[derive(Debug)]
pub struct BfsOracle<'g> {
    view: GraphView<'g>,
    cache: BfsCache,
}

impl<'g> BfsOracle<'g> {
    pub fn new(g: &'g Graph) -> Self {
        Self::on_view(g.view())
    }

    pub fn on_view(view: GraphView<'g>) -> Self {
        let cache = BfsCache::new(view.vertex_count());
        BfsOracle { view, cache }
    }

    pub fn view(&self) -> &GraphView<'g> {
        &self.view
    }
}

impl DistanceOracle for BfsOracle<'_> {
    fn domain_size(&self) -> usize {
        self.view.vertex_count()
    }

    fn distance(&self, u: usize, v: usize) -> Distance {
        match self.cache.get(&self.view, u, v) {
            Some(d) => Distance::Exact(d),
            None => Distance::Unreachable,
        }
    }
}

struct Enlargement {
    dl: DLBox,
    cache: BfsCache,
    /// Core vertex id → id in this box.
    embed: Vec<usize>,
}

impl Enlargement {
    fn new(core: &DLBox, margin: usize) -> Result<Self> {
        let dl = DLBox::build(core.n(), margin)?;
        let embed = (0..core.graph().vertex_count())
            .map(|v| {
                core.embed(v, &dl)
                    .ok_or_else(|| Error::StructuralViolation(format!("core vertex {v} missing from margin {margin}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let cache = BfsCache::new(dl.graph().vertex_count());
        Ok(Enlargement { dl, cache, embed })
    }

    fn distance(&self, u: usize, v: usize) -> Option<u32> {
        self.cache.get(&self.dl.graph().view(), self.embed[u], self.embed[v])
    }
}

/// Distances between vertices of a DL(2,2) box measured in two enlarged
/// boxes with margins `m` and `m + 1` (relative to the core). A value is
/// accepted when both agree; otherwise the pair `m + 1`, `m + 2` is tried
/// and disagreement there reports [`Distance::Unstable`].
pub struct MarginOracle {
    core_vertices: usize,
    margin: usize,
    boxes: [Enlargement; 3],
}

impl MarginOracle {
    pub fn new(core: &DLBox, margin: usize) -> Result<Self> {
        if margin == 0 {
            return Err(Error::InvalidParameter("margin-stabilized oracle needs margin >= 1".into()));
        }
        let base = core.margin() + margin;
        Ok(MarginOracle {
            core_vertices: core.graph().vertex_count(),
            margin,
            boxes: [
                Enlargement::new(core, base)?,
                Enlargement::new(core, base + 1)?,
                Enlargement::new(core, base + 2)?,
            ],
        })
    }

    pub fn margin(&self) -> usize {
        self.margin
    }
}

impl DistanceOracle for MarginOracle {
    fn domain_size(&self) -> usize {
        self.core_vertices
    }

    fn distance(&self, u: usize, v: usize) -> Distance {
        let [a, b, c] = &self.boxes;
        let db = b.distance(u, v);
        let stable = if a.distance(u, v) == db || c.distance(u, v) == db { db } else { return Distance::Unstable };
        match stable {
            Some(d) => Distance::Exact(d),
            None => Distance::Unreachable,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Geodesic,
    NotGeodesic,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Geodesic => "true",
            Verdict::NotGeodesic => "false",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

fn check_domain<O: DistanceOracle + ?Sized>(c: &Cycle, oracle: &O) -> Result<()> {
    match c.vertices().iter().find(|&&v| v >= oracle.domain_size()) {
        Some(&v) => Err(Error::VertexOutOfRange(v)),
        None => Ok(()),
    }
}

/// Checks `dist(u, v) == target` over the given vertex pairs. A stable
/// mismatch decides `NotGeodesic` even if other pairs were unstable.
fn judge<O, I>(oracle: &O, pairs: I) -> Result<Verdict>
where
    O: DistanceOracle + ?Sized,
    I: IntoIterator<Item = (usize, usize, u32)>,
{
    let mut unstable = false;
    for (u, v, target) in pairs {
        match oracle.distance(u, v) {
            Distance::Exact(d) if d == target => {}
            Distance::Exact(_) => return Ok(Verdict::NotGeodesic),
            Distance::Unstable => unstable = true,
            Distance::Unreachable => return Err(Error::Disconnected(u, v)),
        }
    }
    Ok(if unstable { Verdict::Indeterminate } else { Verdict::Geodesic })
}

/// Every vertex pair must be at graph distance equal to its shorter arc.
pub fn is_geodesic_cycle<O: DistanceOracle + ?Sized>(c: &Cycle, oracle: &O) -> Result<Verdict> {
    check_domain(c, oracle)?;
    let vs = c.vertices();
    let len = vs.len();
    let pairs = (0..len).flat_map(|i| {
        (i + 1..len).map(move |j| {
            let arc = (j - i).min(len - (j - i));
            (vs[i], vs[j], arc as u32)
        })
    });
    judge(oracle, pairs)
}

/// For a cycle of length `2L`: every antipodal pair is at distance exactly `L`.
pub fn diagonal_criterion<O: DistanceOracle + ?Sized>(c: &Cycle, oracle: &O) -> Result<Verdict> {
    check_domain(c, oracle)?;
    if !c.len().is_multiple_of(2) {
        return Err(Error::InvalidCycle("diagonal criterion needs an even cycle"));
    }
    let vs = c.vertices();
    let half = vs.len() / 2;
    judge(oracle, (0..half).map(|i| (vs[i], vs[i + half], half as u32)))
}

#[derive(Clone, Debug, Default)]
pub struct GeodesicEnumeration {
    pub geodesic: Vec<Cycle>,
    /// Cycles whose verdict needed an unstable distance.
    pub indeterminate: Vec<Cycle>,
    pub examined: usize,
}

/// Simple cycles of `gv` through `v` of length at most `max_len` that are
/// geodesic for `oracle`, in canonical order.
pub fn enumerate_geodesic_cycles_through<O: DistanceOracle + ?Sized>(
    gv: &GraphView<'_>,
    v: usize,
    max_len: usize,
    oracle: &O,
    budget: usize,
) -> Result<GeodesicEnumeration> {
    let cycles = enumerate_cycles_through(gv, v, max_len, budget)?;
    let mut out = GeodesicEnumeration { examined: cycles.len(), ..Default::default() };
    for c in cycles {
        match is_geodesic_cycle(&c, oracle)? {
            Verdict::Geodesic => out.geodesic.push(c),
            Verdict::Indeterminate => out.indeterminate.push(c),
            Verdict::NotGeodesic => {}
        }
    }
    Ok(out)
}
