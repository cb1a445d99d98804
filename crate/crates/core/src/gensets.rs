//! Locally finite generating sets for the cycle space of a percolation
//! configuration, built level by level from short relator cycles.
//!
//! `k(C)` is the least `n` such that `C` is the GF(2) sum of `n` generator
//! cycles (cycles of the host graph of length at most `k`) whose union is
//! connected. Level `n` of `C'` takes cycles of `ω` with `k(C) = n` that are
//! not yet spanned.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{cycle_space_dim, enumerate_cycles, Cycle, EdgeVector, Gf2Basis, DEFAULT_CYCLE_BUDGET};
use crate::graph::{Distances, Graph};

/// Default cap on generator sets examined by one `k(C)` search.
pub const DEFAULT_SEARCH_BUDGET: usize = 1_000_000;

/// Default level cap.
pub const DEFAULT_N_MAX: usize = 4;

/// All cycles of the host graph of length at most `k`, with a per-edge and
/// per-vertex index.
#[derive(Clone, Debug)]
pub struct GeneratorFamily {
    k: usize,
    edge_count: usize,
    generators: Vec<Cycle>,
    vectors: Vec<EdgeVector>,
    by_edge: Vec<Vec<usize>>,
    by_vertex: Vec<Vec<usize>>,
    max_len: usize,
}

/// Generators of length at most `k`, in canonical order (length, then vertices).
pub fn relator_cycles(g: &Graph, k: usize) -> Result<GeneratorFamily> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("relator length k must be >= 3, got {k}")));
    }
    let mut generators: Vec<Cycle> =
        enumerate_cycles(&g.view(), k, DEFAULT_CYCLE_BUDGET)?.into_iter().map(|c| c.canonical()).collect();
    generators.sort_by(|a, b| (a.len(), a.vertices()).cmp(&(b.len(), b.vertices())));
    let vectors: Vec<EdgeVector> = generators.iter().map(|c| c.to_edge_vector(g)).collect();
    let mut by_edge = vec![Vec::new(); g.edge_count()];
    let mut by_vertex = vec![Vec::new(); g.vertex_count()];
    for (i, c) in generators.iter().enumerate() {
        for &e in c.edges() {
            by_edge[e].push(i);
        }
        for &v in c.vertices() {
            by_vertex[v].push(i);
        }
    }
    let max_len = generators.iter().map(Cycle::len).max().unwrap_or(0);
    Ok(GeneratorFamily { k, edge_count: g.edge_count(), generators, vectors, by_edge, by_vertex, max_len })
}

impl GeneratorFamily {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Cycle] {
        &self.generators
    }

    pub fn vector(&self, i: usize) -> &EdgeVector {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[EdgeVector] {
        &self.vectors
    }

    /// Generator ids containing edge `e`.
    pub fn containing_edge(&self, e: usize) -> &[usize] {
        &self.by_edge[e]
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(Gf2Basis::from_vectors(self.edge_count, &self.vectors)?.rank())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum KOfCycle {
    /// `n` generators with connected union, listed by id.
    Exact { n: usize, generators: Vec<usize> },
    AboveThreshold,
}

impl KOfCycle {
    pub fn value(&self) -> Option<usize> {
        match self {
            KOfCycle::Exact { n, .. } => Some(*n),
            KOfCycle::AboveThreshold => None,
        }
    }
}

/// `k(C)` for a cycle of the host graph.
pub fn k_of_cycle(g: &Graph, c: &Cycle, fam: &GeneratorFamily, n_max: usize) -> Result<KOfCycle> {
    k_of_vector(&c.to_edge_vector(g), fam, n_max, DEFAULT_SEARCH_BUDGET)
}

/// `k(C)` for a cycle required to lie in `omega`.
pub fn k_of_cycle_in(g: &Graph, c: &Cycle, omega: &EdgeVector, fam: &GeneratorFamily, n_max: usize) -> Result<KOfCycle> {
    let v = c.to_edge_vector(g);
    if !v.is_subset_of(omega) {
        return Err(Error::InvalidCycle("cycle is not contained in the configuration"));
    }
    k_of_vector(&v, fam, n_max, DEFAULT_SEARCH_BUDGET)
}

struct Node {
    ids: Vec<usize>,
    sum: EdgeVector,
    vertices: HashSet<usize>,
}

/// Breadth-first over connected generator sets, by size. Every decomposition
/// contains a generator through the first edge of `c`, so the search is
/// seeded there; a set of size `s` is dropped once `|sum ⊕ c|` exceeds what
/// `n_max − s` more generators could still cancel.
pub fn k_of_vector(c: &EdgeVector, fam: &GeneratorFamily, n_max: usize, budget: usize) -> Result<KOfCycle> {
    if c.len() != fam.edge_count {
        return Err(Error::LengthMismatch { expected: fam.edge_count, actual: c.len() });
    }
    let Some(first) = c.first_one() else {
        return Err(Error::InvalidCycle("empty edge set"));
    };
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut level: Vec<Node> = Vec::new();
    for &gid in &fam.by_edge[first] {
        seen.insert(vec![gid]);
        level.push(Node {
            ids: vec![gid],
            sum: fam.vectors[gid].clone(),
            vertices: fam.generators[gid].vertices().iter().copied().collect(),
        });
    }
    for size in 1..=n_max {
        if let Some(hit) = level.iter().find(|node| &node.sum == c) {
            return Ok(KOfCycle::Exact { n: size, generators: hit.ids.clone() });
        }
        if size == n_max {
            break;
        }
        let slack = fam.max_len * (n_max - size);
        let mut next = Vec::new();
        for node in &level {
            if (&node.sum ^ c).count_ones() > slack {
                continue;
            }
            let mut frontier: Vec<usize> =
                node.vertices.iter().flat_map(|&v| fam.by_vertex[v].iter().copied()).collect();
            frontier.sort_unstable();
            frontier.dedup();
            for gid in frontier {
                if node.ids.contains(&gid) {
                    continue;
                }
                let mut ids = node.ids.clone();
                let pos = ids.partition_point(|&x| x < gid);
                ids.insert(pos, gid);
                if !seen.insert(ids.clone()) {
                    continue;
                }
                if seen.len() > budget {
                    return Err(Error::BudgetExceeded { what: "k(C) search set", limit: budget });
                }
                let mut vertices = node.vertices.clone();
                vertices.extend(fam.generators[gid].vertices().iter().copied());
                next.push(Node { ids, sum: &node.sum ^ &fam.vectors[gid], vertices });
            }
        }
        level = next;
    }
    Ok(KOfCycle::AboveThreshold)
}

/// Which cycles of level `n` enter `C'`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Admission {
    /// In canonical order, a cycle enters if it enlarges the running basis.
    #[default]
    RunningBasis,
    /// Every cycle outside the span of levels `< n` enters, so one level may
    /// hold dependent cycles.
    PreviousLevels,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelEntry {
    pub cycle: Vec<usize>,
    #[serde(skip)]
    pub vector: EdgeVector,
    /// Generator ids of the minimal decomposition found.
    pub decomposition: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CPrimeResult {
    /// `levels[i]` holds the cycles added at level `i + 1`.
    pub levels: Vec<Vec<LevelEntry>>,
    pub basis: Gf2Basis,
    pub n_max: usize,
    /// Longest candidate considered, `k · n_max`.
    pub l_max: usize,
    pub admission: Admission,
    pub candidates: usize,
    /// Candidates with `k(C) > n_max`.
    pub above_threshold: usize,
}

impl CPrimeResult {
    pub fn entries(&self) -> impl Iterator<Item = (usize, &LevelEntry)> + '_ {
        self.levels.iter().enumerate().flat_map(|(i, l)| l.iter().map(move |e| (i + 1, e)))
    }

    pub fn cycle_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn vectors(&self) -> Vec<EdgeVector> {
        self.entries().map(|(_, e)| e.vector.clone()).collect()
    }
}

fn candidate_cycles(g: &Graph, omega: &EdgeVector, max_len: usize) -> Result<Vec<Cycle>> {
    let view = g.restrict(omega)?;
    let mut cs: Vec<Cycle> =
        enumerate_cycles(&view, max_len.max(3), DEFAULT_CYCLE_BUDGET)?.into_iter().map(|c| c.canonical()).collect();
    cs.sort_by(|a, b| (a.len(), a.vertices()).cmp(&(b.len(), b.vertices())));
    Ok(cs)
}

pub fn build_cprime(g: &Graph, omega: &EdgeVector, fam: &GeneratorFamily, n_max: usize) -> Result<CPrimeResult> {
    build_cprime_with(g, omega, fam, n_max, Admission::RunningBasis, DEFAULT_SEARCH_BUDGET)
}

/// Computes `k(C)` for every cycle of `omega` of length at most `k · n_max`
/// in parallel, then admits level by level in canonical order.
pub fn build_cprime_with(
    g: &Graph,
    omega: &EdgeVector,
    fam: &GeneratorFamily,
    n_max: usize,
    admission: Admission,
    budget: usize,
) -> Result<CPrimeResult> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be >= 1".into()));
    }
    if omega.len() != g.edge_count() {
        return Err(Error::LengthMismatch { expected: g.edge_count(), actual: omega.len() });
    }
    let l_max = fam.k * n_max;
    let candidates = if fam.is_empty() { Vec::new() } else { candidate_cycles(g, omega, l_max)? };
    let ks = candidates
        .par_iter()
        .map(|c| k_of_vector(&c.to_edge_vector(g), fam, n_max, budget))
        .collect::<Result<Vec<_>>>()?;

    let mut basis = Gf2Basis::new(g.edge_count());
    let mut levels = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let prior = basis.clone();
        let mut level = Vec::new();
        for (c, k) in candidates.iter().zip(&ks) {
            let KOfCycle::Exact { n: kc, generators } = k else { continue };
            if *kc != n {
                continue;
            }
            let v = c.to_edge_vector(g);
            let admit = match admission {
                Admission::RunningBasis => basis.insert(&v)?,
                Admission::PreviousLevels => {
                    let fresh = !prior.contains(&v)?;
                    if fresh {
                        basis.insert(&v)?;
                    }
                    fresh
                }
            };
            if admit {
                level.push(LevelEntry { cycle: c.vertices().to_vec(), vector: v, decomposition: generators.clone() });
            }
        }
        levels.push(level);
    }
    let above_threshold = ks.iter().filter(|k| **k == KOfCycle::AboveThreshold).count();
    Ok(CPrimeResult { levels, basis, n_max, l_max, admission, candidates: candidates.len(), above_threshold })
}

/// Generator provider for [`crate::models::UesMethod::CoinFlip`]: the
/// cycles of `C'` for the sampled configuration.
pub fn cprime_generators(
    k: usize,
    n_max: usize,
) -> impl Fn(&Graph, &EdgeVector) -> Result<Vec<EdgeVector>> + Sync {
    move |g, omega| {
        let fam = relator_cycles(g, k)?;
        Ok(build_cprime(g, omega, &fam, n_max)?.vectors())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicityProfile {
    pub per_edge: Vec<usize>,
    pub max: usize,
}

/// Number of `C'` cycles through each edge.
pub fn multiplicity_profile(res: &CPrimeResult) -> MultiplicityProfile {
    let mut per_edge = vec![0; res.basis.vector_len()];
    for (_, e) in res.entries() {
        for i in e.vector.iter_ones() {
            per_edge[i] += 1;
        }
    }
    let max = per_edge.iter().copied().max().unwrap_or(0);
    MultiplicityProfile { per_edge, max }
}

/// Edge-to-edge distance used by [`k_closure`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureMetric {
    /// Distance in the line graph: 0 to itself, otherwise one more than the
    /// closest-endpoint distance. Equals the distance between midpoints.
    #[default]
    Midpoint,
    /// Distance between closest endpoints; edges sharing a vertex are at 0.
    Endpoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KClosure {
    #[serde(skip)]
    pub edges: EdgeVector,
    pub size: usize,
    /// Edge count of the largest connected component of the closure.
    pub largest_component: usize,
}

fn multi_source_bfs(g: &Graph, sources: impl IntoIterator<Item = usize>) -> Distances {
    let mut dist = vec![Distances::UNREACHABLE; g.vertex_count()];
    let mut queue = VecDeque::new();
    for s in sources {
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &(w, _) in g.adjacency(u) {
            if dist[w] == Distances::UNREACHABLE {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    Distances::from_raw(dist)
}

/// Edges of `g` within distance `k` of some edge outside `omega`.
pub fn k_closure(g: &Graph, omega: &EdgeVector, k: usize, metric: ClosureMetric) -> Result<KClosure> {
    if omega.len() != g.edge_count() {
        return Err(Error::LengthMismatch { expected: g.edge_count(), actual: omega.len() });
    }
    let closed = omega.complement();
    let dist = multi_source_bfs(g, closed.iter_ones().flat_map(|e| {
        let (a, b) = g.edge(e);
        [a, b]
    }));
    let k = k as u64;
    let mut edges = EdgeVector::zeros(g.edge_count());
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        let near = dist.raw()[a].min(dist.raw()[b]);
        if near == Distances::UNREACHABLE {
            continue;
        }
        let d = match metric {
            ClosureMetric::Midpoint if closed.get(e) => 0,
            ClosureMetric::Midpoint => near as u64 + 1,
            ClosureMetric::Endpoint => near as u64,
        };
        if d <= k {
            edges.set(e, true);
        }
    }
    let comps = g.restrict(&edges)?.connected_components();
    let mut per_comp = vec![0usize; comps.count];
    for e in edges.iter_ones() {
        per_comp[comps.labels[g.edge(e).0]] += 1;
    }
    Ok(KClosure { size: edges.count_ones(), largest_component: per_comp.into_iter().max().unwrap_or(0), edges })
}

/// Distance from each vertex to the nearest vertex of less than maximal degree.
pub fn boundary_distances(g: &Graph) -> Distances {
    let top = g.max_degree();
    multi_source_bfs(g, (0..g.vertex_count()).filter(|&v| g.degree(v) < top))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SpanningReport {
    pub l_check: usize,
    pub interior_radius: usize,
    pub checked: usize,
    pub in_span: usize,
    pub interior_checked: usize,
    pub interior_in_span: usize,
    pub rank: usize,
    pub dim: usize,
}

impl SpanningReport {
    /// `None` when no interior cycle was checked.
    pub fn interior_fraction(&self) -> Option<f64> {
        (self.interior_checked > 0).then(|| self.interior_in_span as f64 / self.interior_checked as f64)
    }
}

/// For every cycle of `omega` of length at most `l_check`, whether it lies in
/// `span(C')`. Cycles farther than `interior_radius` from the boundary are
/// counted separately.
pub fn spanning_report(
    g: &Graph,
    omega: &EdgeVector,
    res: &CPrimeResult,
    l_check: usize,
    interior_radius: usize,
) -> Result<SpanningReport> {
    let view = g.restrict(omega)?;
    let boundary = boundary_distances(g);
    let mut r = SpanningReport {
        l_check,
        interior_radius,
        rank: res.basis.rank(),
        dim: cycle_space_dim(&view),
        ..Default::default()
    };
    if l_check < 3 {
        return Ok(r);
    }
    for c in enumerate_cycles(&view, l_check, DEFAULT_CYCLE_BUDGET)? {
        let inside = res.basis.contains(&c.to_edge_vector(g))?;
        r.checked += 1;
        r.in_span += inside as usize;
        let interior = c.vertices().iter().all(|&v| boundary.raw()[v] as u64 > interior_radius as u64);
        if interior {
            r.interior_checked += 1;
            r.interior_in_span += inside as usize;
        }
    }
    Ok(r)
}

/// Re-verifies every stored cycle: its `k` equals its level and it was not
/// spanned by what came before it under the admission rule.
pub fn verify_levels(g: &Graph, res: &CPrimeResult, fam: &GeneratorFamily) -> Result<()> {
    let mut running = Gf2Basis::new(g.edge_count());
    for (n, level) in res.levels.iter().enumerate().map(|(i, l)| (i + 1, l)) {
        let prior = running.clone();
        for e in level {
            let k = k_of_vector(&e.vector, fam, res.n_max, DEFAULT_SEARCH_BUDGET)?;
            if k.value() != Some(n) {
                return Err(Error::StructuralViolation(format!("level-{n} cycle has k = {:?}", k.value())));
            }
            if e.vector.count_ones() > fam.k * n {
                return Err(Error::StructuralViolation(format!("level-{n} cycle longer than k·n")));
            }
            let spanned = match res.admission {
                Admission::RunningBasis => running.contains(&e.vector)?,
                Admission::PreviousLevels => prior.contains(&e.vector)?,
            };
            if spanned {
                return Err(Error::StructuralViolation(format!("level-{n} cycle was already spanned")));
            }
            running.insert(&e.vector)?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Completeness {
    pub checked: usize,
    pub within_threshold: usize,
}

/// Every cycle of `omega` of length at most `k · n_max` with `k(C) <= n_max`
/// must lie in `span(C')`.
pub fn check_completeness(
    g: &Graph,
    omega: &EdgeVector,
    fam: &GeneratorFamily,
    res: &CPrimeResult,
) -> Result<Completeness> {
    let mut out = Completeness::default();
    if fam.is_empty() {
        return Ok(out);
    }
    for c in candidate_cycles(g, omega, res.l_max)? {
        out.checked += 1;
        let v = c.to_edge_vector(g);
        if k_of_vector(&v, fam, res.n_max, DEFAULT_SEARCH_BUDGET)?.value().is_some() {
            out.within_threshold += 1;
            if !res.basis.contains(&v)? {
                return Err(Error::StructuralViolation(format!(
                    "cycle {} has k <= n_max but is outside span(C')",
                    c.to_vertex_list()
                )));
            }
        }
    }
    Ok(out)
}

/// For every cycle at level 2 or higher, no generator of its decomposition
/// lies inside `omega`. Returns the number of decompositions examined.
pub fn check_no_generator_in_omega(res: &CPrimeResult, fam: &GeneratorFamily, omega: &EdgeVector) -> Result<usize> {
    let mut examined = 0;
    for (n, e) in res.entries().filter(|(n, _)| *n >= 2) {
        examined += 1;
        if let Some(&gid) = e.decomposition.iter().find(|&&gid| fam.vector(gid).is_subset_of(omega)) {
            return Err(Error::StructuralViolation(format!(
                "level-{n} cycle uses generator {} lying in the configuration",
                fam.generators()[gid].to_vertex_list()
            )));
        }
    }
    Ok(examined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{binary_tree, build_grid_patch, grid_vertex, k4};
    use crate::models::{bernoulli_from_uniforms, bernoulli_sample, uniforms, RngStream};

    fn grid_cycle(g: &Graph, cols: usize, cells: &[(usize, usize)]) -> Cycle {
        Cycle::new(g, cells.iter().map(|&(r, c)| grid_vertex(cols, r, c)).collect()).unwrap()
    }

    #[test]
    fn relator_examples() {
        let g = build_grid_patch(4, 4).unwrap();
        let fam = relator_cycles(&g, 4).unwrap();
        assert_eq!(fam.len(), 9);
        assert_eq!(fam.rank().unwrap(), cycle_space_dim(&g.view()));
        for e in 0..g.edge_count() {
            assert!(fam.containing_edge(e).iter().all(|&i| fam.vector(i).get(e)));
        }
        let fam = relator_cycles(&k4(), 3).unwrap();
        assert_eq!((fam.len(), fam.rank().unwrap()), (4, 3));
        assert!(relator_cycles(&binary_tree(3).unwrap(), 6).unwrap().is_empty());
        assert!(relator_cycles(&k4(), 2).is_err());
    }

    #[test]
    fn k_examples() {
        let g = build_grid_patch(4, 4).unwrap();
        let fam = relator_cycles(&g, 4).unwrap();
        let square = grid_cycle(&g, 4, &[(0, 0), (0, 1), (1, 1), (1, 0)]);
        assert_eq!(k_of_cycle(&g, &square, &fam, 4).unwrap().value(), Some(1));
        let domino = grid_cycle(&g, 4, &[(0, 0), (0, 1), (0, 2), (1, 2), (1, 1), (1, 0)]);
        assert_eq!(k_of_cycle(&g, &domino, &fam, 4).unwrap().value(), Some(2));
        let block = grid_cycle(&g, 4, &[(0, 0), (0, 1), (0, 2), (1, 2), (2, 2), (2, 1), (2, 0), (1, 0)]);
        assert_eq!(k_of_cycle(&g, &block, &fam, 4).unwrap().value(), Some(4));
        assert_eq!(k_of_cycle(&g, &block, &fam, 3).unwrap(), KOfCycle::AboveThreshold);
        assert!(matches!(
            k_of_vector(&block.to_edge_vector(&g), &fam, 4, 3),
            Err(Error::BudgetExceeded { .. })
        ));
        let mut omega = g.all_edges();
        omega.set(square.edges()[0], false);
        assert!(k_of_cycle_in(&g, &square, &omega, &fam, 4).is_err());
    }

    #[test]
    fn full_configuration_gives_the_generators() {
        let g = build_grid_patch(4, 4).unwrap();
        let fam = relator_cycles(&g, 4).unwrap();
        let res = build_cprime(&g, &g.all_edges(), &fam, 3).unwrap();
        assert_eq!(res.levels[0].len(), 9);
        assert!(res.levels[1..].iter().all(Vec::is_empty));
        let got: Vec<&[usize]> = res.levels[0].iter().map(|e| e.cycle.as_slice()).collect();
        let want: Vec<&[usize]> = fam.generators().iter().map(Cycle::vertices).collect();
        assert_eq!(got, want);
        assert_eq!(multiplicity_profile(&res).max, 2);
        verify_levels(&g, &res, &fam).unwrap();
    }

    #[test]
    fn missing_interior_edge_gives_one_domino() {
        let g = build_grid_patch(4, 4).unwrap();
        let fam = relator_cycles(&g, 4).unwrap();
        let e = g.edge_between(grid_vertex(4, 1, 1), grid_vertex(4, 1, 2)).unwrap();
        let mut omega = g.all_edges();
        omega.set(e, false);
        let res = build_cprime(&g, &omega, &fam, 3).unwrap();
        assert_eq!(res.levels[0].len(), 7);
        assert_eq!(res.levels[1].len(), 1);
        assert!(res.levels[2].is_empty());
        let domino = grid_cycle(&g, 4, &[(0, 1), (0, 2), (1, 2), (2, 2), (2, 1), (1, 1)]);
        assert_eq!(res.levels[1][0].vector, domino.to_edge_vector(&g));
        let prof = multiplicity_profile(&res);
        assert_eq!(prof.per_edge[e], 0);
        let up = g.edge_between(grid_vertex(4, 0, 1), grid_vertex(4, 1, 1)).unwrap();
        assert_eq!(prof.per_edge[up], 2);
        assert_eq!(check_no_generator_in_omega(&res, &fam, &omega).unwrap(), 1);
        let rep = spanning_report(&g, &omega, &res, 8, 0).unwrap();
        assert_eq!((rep.rank, rep.dim), (8, 8));
        assert_eq!(rep.in_span, rep.checked);
    }

    #[test]
    fn spanning_tree_gives_nothing() {
        let g = build_grid_patch(4, 4).unwrap();
        let fam = relator_cycles(&g, 4).unwrap();
        let tree = g.view().spanning_forest();
        let res = build_cprime(&g, &tree, &fam, 3).unwrap();
        assert_eq!(res.cycle_count(), 0);
        assert_eq!(multiplicity_profile(&res), MultiplicityProfile { per_edge: vec![0; g.edge_count()], max: 0 });
        let rep = spanning_report(&g, &tree, &res, 8, 0).unwrap();
        assert_eq!((rep.checked, rep.rank, rep.dim), (0, 0, 0));
    }

    #[test]
    fn random_configurations_pass_all_checks() {
        let g = build_grid_patch(6, 6).unwrap();
        let fam = relator_cycles(&g, 4).unwrap();
        for t in 0..10 {
            let omega = bernoulli_sample(&g, 0.8, &mut RngStream::new(21, t).rng()).unwrap();
            for admission in [Admission::RunningBasis, Admission::PreviousLevels] {
                let res = build_cprime_with(&g, &omega, &fam, 3, admission, DEFAULT_SEARCH_BUDGET).unwrap();
                verify_levels(&g, &res, &fam).unwrap();
                check_completeness(&g, &omega, &fam, &res).unwrap();
                check_no_generator_in_omega(&res, &fam, &omega).unwrap();
            }
        }
    }

    #[test]
    fn k4_cprime_spans() {
        let g = k4();
        let fam = relator_cycles(&g, 3).unwrap();
        let res = build_cprime(&g, &g.all_edges(), &fam, 2).unwrap();
        assert_eq!(res.basis.rank(), 3);
        let mut omega = g.all_edges();
        omega.set(0, false);
        let res = build_cprime(&g, &omega, &fam, 2).unwrap();
        assert_eq!(res.basis.rank(), cycle_space_dim(&g.restrict(&omega).unwrap()));
    }

    #[test]
    fn closure_examples() {
        let g = build_grid_patch(5, 5).unwrap();
        let full = g.all_edges();
        assert_eq!(k_closure(&g, &full, 3, ClosureMetric::Midpoint).unwrap().size, 0);
        let e = g.edge_between(grid_vertex(5, 2, 1), grid_vertex(5, 2, 2)).unwrap();
        let mut omega = full.clone();
        omega.set(e, false);
        let c0 = k_closure(&g, &omega, 0, ClosureMetric::Midpoint).unwrap();
        assert_eq!(c0.edges, EdgeVector::from_edges(g.edge_count(), [e]));
        let c1 = k_closure(&g, &omega, 1, ClosureMetric::Midpoint).unwrap();
        assert_eq!((c1.size, c1.largest_component), (7, 7));
        let e0 = k_closure(&g, &omega, 0, ClosureMetric::Endpoint).unwrap();
        assert_eq!(e0.size, 7);
    }

    #[test]
    fn closure_is_monotone_under_coupling() {
        let g = build_grid_patch(8, 8).unwrap();
        for t in 0..20 {
            let u = uniforms(g.edge_count(), &mut RngStream::new(8, t).rng());
            let closures: Vec<EdgeVector> = [0.8, 0.9, 0.95]
                .iter()
                .map(|&p| k_closure(&g, &bernoulli_from_uniforms(&u, p), 2, ClosureMetric::Midpoint).unwrap().edges)
                .collect();
            assert!(closures[1].is_subset_of(&closures[0]));
            assert!(closures[2].is_subset_of(&closures[1]));
        }
    }

    #[test]
    fn boundary_of_grid() {
        let g = build_grid_patch(5, 5).unwrap();
        let d = boundary_distances(&g);
        assert_eq!(d.get(grid_vertex(5, 2, 2)), Some(2));
        assert_eq!(d.get(0), Some(0));
    }
}
