use std::collections::VecDeque;
use std::fmt;

use super::EdgeVector;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphView};

/// Default cap on the number of cycles a single enumeration may return.
pub const DEFAULT_CYCLE_BUDGET: usize = 2_000_000;

/// A simple cycle given as a closed vertex sequence (last vertex adjacent to
/// the first). Edge `i` joins `vertices[i]` to `vertices[(i + 1) % len]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl Cycle {
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidCycle("fewer than 3 vertices"));
        }
        let mut seen = std::collections::HashSet::with_capacity(vertices.len());
        for &v in &vertices {
            g.check_vertex(v)?;
            if !seen.insert(v) {
                return Err(Error::InvalidCycle("repeated vertex"));
            }
        }
        let len = vertices.len();
        let edges = (0..len)
            .map(|i| {
                g.edge_between(vertices[i], vertices[(i + 1) % len])
                    .ok_or(Error::InvalidCycle("consecutive vertices not adjacent"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cycle { vertices, edges })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn to_edge_vector(&self, g: &Graph) -> EdgeVector {
        EdgeVector::from_edges(g.edge_count(), self.edges.iter().copied())
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    /// Rotation starting at the smallest vertex id, heading towards the
    /// smaller of its two cycle neighbors.
    pub fn canonical(&self) -> Cycle {
        let len = self.len();
        let (start, _) = self.vertices.iter().enumerate().min_by_key(|&(_, v)| v).unwrap();
        let next = self.vertices[(start + 1) % len];
        let prev = self.vertices[(start + len - 1) % len];
        let (vertices, edges) = if next < prev {
            let vs = (0..len).map(|i| self.vertices[(start + i) % len]).collect();
            let es = (0..len).map(|i| self.edges[(start + i) % len]).collect();
            (vs, es)
        } else {
            let vs = (0..len).map(|i| self.vertices[(start + len - i) % len]).collect();
            let es = (0..len).map(|i| self.edges[(start + 2 * len - 1 - i) % len]).collect();
            (vs, es)
        };
        Cycle { vertices, edges }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    /// Comma-separated vertex list.
    pub fn to_vertex_list(&self) -> String {
        self.vertices.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Debug for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cycle[{}]", self.to_vertex_list())
    }
}

/// True iff every vertex has even degree in `v`.
pub fn is_even(v: &EdgeVector, g: &Graph) -> bool {
    let mut parity = vec![false; g.vertex_count()];
    for e in v.iter_ones() {
        let (a, b) = g.edge(e);
        parity[a] ^= true;
        parity[b] ^= true;
    }
    parity.iter().all(|&odd| !odd)
}

/// `E(ω) − V + k(ω)`.
pub fn cycle_space_dim(gv: &GraphView<'_>) -> usize {
    gv.open_edge_count() + gv.connected_components().count - gv.vertex_count()
}

/// One basis vector per open non-forest edge `e`: `e` plus the forest path
/// between its endpoints, in edge-id order of `e`.
pub fn fundamental_cycles(gv: &GraphView<'_>, forest: &EdgeVector) -> Result<Vec<EdgeVector>> {
    let g = gv.graph();
    let m = g.edge_count();
    if forest.len() != m {
        return Err(Error::LengthMismatch { expected: m, actual: forest.len() });
    }
    if !forest.is_subset_of(gv.open_edges()) {
        return Err(Error::InvalidForest("contains edges outside the view"));
    }
    let forest_view = g.restrict(forest)?;
    let comps = forest_view.connected_components().count;
    if comps != gv.connected_components().count {
        return Err(Error::InvalidForest("does not span every component"));
    }
    if forest.count_ones() + comps != gv.vertex_count() {
        return Err(Error::InvalidForest("contains a cycle"));
    }

    const NONE: usize = usize::MAX;
    let n = g.vertex_count();
    let mut parent_edge = vec![NONE; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for (w, e) in forest_view.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent_edge[w] = e;
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    let parent = |v: usize| {
        let (a, b) = g.edge(parent_edge[v]);
        if a == v {
            b
        } else {
            a
        }
    };

    let mut out = Vec::new();
    for e in gv.open_edges().iter_ones().filter(|&e| !forest.get(e)) {
        let mut c = EdgeVector::zeros(m);
        c.set(e, true);
        let (mut a, mut b) = g.edge(e);
        while a != b {
            if depth[a] >= depth[b] {
                c.toggle(parent_edge[a]);
                a = parent(a);
            } else {
                c.toggle(parent_edge[b]);
                b = parent(b);
            }
        }
        out.push(c);
    }
    Ok(out)
}

fn restricted_distances(gv: &GraphView<'_>, root: usize, min_vertex: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; gv.vertex_count()];
    let mut queue = VecDeque::from([root]);
    dist[root] = 0;
    while let Some(u) = queue.pop_front() {
        for (w, _) in gv.neighbors(u) {
            if w >= min_vertex && dist[w] == u32::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

struct Search<'a, 'g> {
    gv: &'a GraphView<'g>,
    max_len: usize,
    budget: usize,
    root: usize,
    min_vertex: usize,
    dist_home: Vec<u32>,
    on_path: Vec<bool>,
    path: Vec<usize>,
    out: Vec<Cycle>,
}

impl Search<'_, '_> {
    fn extend(&mut self) -> Result<()> {
        let u = *self.path.last().unwrap();
        let steps = self.path.len();
        let gv = self.gv;
        for (w, _) in gv.neighbors(u) {
            if w == self.root {
                if steps >= 3 && self.path[1] < u {
                    if self.out.len() >= self.budget {
                        return Err(Error::BudgetExceeded { what: "cycle enumeration", limit: self.budget });
                    }
                    let c = Cycle::new(gv.graph(), self.path.clone())?;
                    self.out.push(c);
                }
                continue;
            }
            if w < self.min_vertex || self.on_path[w] {
                continue;
            }
            // The path would hold steps + 1 vertices and still has to return home.
            if steps + 1 > self.max_len || (steps + self.dist_home[w] as usize) > self.max_len {
                continue;
            }
            self.on_path[w] = true;
            self.path.push(w);
            self.extend()?;
            self.path.pop();
            self.on_path[w] = false;
        }
        Ok(())
    }
}

fn search_from<'g>(
    gv: &GraphView<'g>,
    root: usize,
    min_vertex: usize,
    max_len: usize,
    budget: usize,
    out: Vec<Cycle>,
) -> Result<Vec<Cycle>> {
    let mut s = Search {
        gv,
        max_len,
        budget,
        root,
        min_vertex,
        dist_home: restricted_distances(gv, root, min_vertex),
        on_path: vec![false; gv.vertex_count()],
        path: vec![root],
        out,
    };
    s.on_path[root] = true;
    s.extend()?;
    Ok(s.out)
}

/// All simple cycles of length at most `max_len`, each reported once in
/// canonical form, ordered by smallest vertex and then DFS order.
pub fn enumerate_cycles(gv: &GraphView<'_>, max_len: usize, budget: usize) -> Result<Vec<Cycle>> {
    if max_len < 3 {
        return Err(Error::InvalidParameter(format!("max_len must be >= 3, got {max_len}")));
    }
    let mut out = Vec::new();
    for root in 0..gv.vertex_count() {
        out = search_from(gv, root, root, max_len, budget, out)?;
    }
    Ok(out)
}

/// All simple cycles through `v` of length at most `max_len`, in canonical
/// form and sorted.
pub fn enumerate_cycles_through(gv: &GraphView<'_>, v: usize, max_len: usize, budget: usize) -> Result<Vec<Cycle>> {
    if max_len < 3 {
        return Err(Error::InvalidParameter(format!("max_len must be >= 3, got {max_len}")));
    }
    gv.graph().check_vertex(v)?;
    let mut out: Vec<Cycle> = search_from(gv, v, 0, max_len, budget, Vec::new())?
        .into_iter()
        .map(|c| c.canonical())
        .collect();
    out.sort_by(|a, b| (a.len(), a.vertices()).cmp(&(b.len(), b.vertices())));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::Gf2Basis;
    use crate::graph::{binary_tree, build_grid_patch, k4, triangle};
    use proptest::prelude::*;

    #[test]
    fn k4_face_sum_is_a_four_cycle() {
        let g = k4();
        let t012 = Cycle::new(&g, vec![0, 1, 2]).unwrap().to_edge_vector(&g);
        let t013 = Cycle::new(&g, vec![0, 1, 3]).unwrap().to_edge_vector(&g);
        let sum = &t012 ^ &t013;
        let quad = Cycle::new(&g, vec![1, 2, 0, 3]).unwrap().to_edge_vector(&g);
        assert_eq!(sum, quad);
    }

    #[test]
    fn cycle_validation() {
        let g = k4();
        assert!(Cycle::new(&g, vec![0, 1]).is_err());
        assert!(Cycle::new(&g, vec![0, 1, 0, 2]).is_err());
        let p = crate::graph::path(3).unwrap();
        assert!(Cycle::new(&p, vec![0, 1, 2]).is_err());
    }

    #[test]
    fn canonical_rotation() {
        let g = k4();
        let c = Cycle::new(&g, vec![3, 1, 2, 0]).unwrap().canonical();
        assert_eq!(c.vertices(), &[0, 2, 1, 3]);
        assert_eq!(Cycle::new(&g, c.vertices().to_vec()).unwrap(), c);
        assert!(c.is_canonical());
    }

    #[test]
    fn fundamental_cycle_examples() {
        let t = triangle();
        let fc = fundamental_cycles(&t.view(), &EdgeVector::from_edges(3, [0, 1])).unwrap();
        assert_eq!(fc, vec![t.all_edges()]);

        let g = k4();
        let star = EdgeVector::from_edges(6, [0, 1, 2]);
        let fc = fundamental_cycles(&g.view(), &star).unwrap();
        assert_eq!(fc.len(), 3);
        for c in &fc {
            assert_eq!(c.count_ones(), 3);
            let touches_0 = c.iter_ones().filter(|&e| g.edge(e).0 == 0).count();
            assert_eq!(touches_0, 2);
        }

        let tree = binary_tree(3).unwrap();
        let view = tree.view();
        assert!(fundamental_cycles(&view, &view.spanning_forest()).unwrap().is_empty());
    }

    #[test]
    fn bad_forests_rejected() {
        let g = k4();
        let v = g.view();
        assert!(fundamental_cycles(&v, &EdgeVector::from_edges(6, [0, 1])).is_err());
        assert!(fundamental_cycles(&v, &EdgeVector::from_edges(6, [0, 1, 3])).is_err());
    }

    #[test]
    fn parity_examples() {
        let g = k4();
        assert!(is_even(&EdgeVector::zeros(6), &g));
        assert!(!is_even(&EdgeVector::from_edges(6, [2]), &g));
        for c in enumerate_cycles(&g.view(), 4, DEFAULT_CYCLE_BUDGET).unwrap() {
            assert!(is_even(&c.to_edge_vector(&g), &g));
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(cycle_space_dim(&k4().view()), 3);
        assert_eq!(cycle_space_dim(&binary_tree(2).unwrap().view()), 0);
        assert_eq!(cycle_space_dim(&build_grid_patch(4, 4).unwrap().view()), 9);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_cycles(&triangle().view(), 3, 10).unwrap().len(), 1);
        let k = enumerate_cycles(&k4().view(), 4, 100).unwrap();
        assert_eq!(k.len(), 7);
        assert_eq!(k.iter().filter(|c| c.len() == 3).count(), 4);
        assert!(k.iter().all(Cycle::is_canonical));
        let grid = build_grid_patch(3, 3).unwrap();
        assert_eq!(enumerate_cycles(&grid.view(), 4, 100).unwrap().len(), 4);
        assert!(enumerate_cycles(&k4().view(), 2, 100).is_err());
        assert!(matches!(
            enumerate_cycles(&k4().view(), 4, 5),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn cycles_through_vertex() {
        let grid = build_grid_patch(3, 3).unwrap();
        let through = enumerate_cycles_through(&grid.view(), 4, 4, 100).unwrap();
        assert_eq!(through.len(), 4);
        let all = enumerate_cycles(&grid.view(), 8, 1000).unwrap();
        let mut expected: Vec<_> = all.into_iter().filter(|c| c.contains_vertex(4)).collect();
        expected.sort_by(|a, b| (a.len(), a.vertices()).cmp(&(b.len(), b.vertices())));
        assert_eq!(enumerate_cycles_through(&grid.view(), 4, 8, 1000).unwrap(), expected);
    }

    #[test]
    fn all_cycles_span_the_cycle_space_of_small_graphs() {
        // Every labeled graph on up to 5 vertices, and a stride through those on 6.
        for n in 3..=6usize {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            let stride = if n == 6 { 7 } else { 1 };
            for mask in (0u64..1 << pairs.len()).step_by(stride) {
                let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
                let g = Graph::new(n, &edges).unwrap();
                let view = g.view();
                let cycles = enumerate_cycles(&view, n, DEFAULT_CYCLE_BUDGET).unwrap();
                let vs: Vec<_> = cycles.iter().map(|c| c.to_edge_vector(&g)).collect();
                let b = Gf2Basis::from_vectors(g.edge_count(), &vs).unwrap();
                assert_eq!(b.rank(), cycle_space_dim(&view), "{edges:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn cycle_subset_sums_are_even(mask in any::<u32>()) {
            let g = build_grid_patch(3, 4).unwrap();
            let cycles = enumerate_cycles(&g.view(), 8, DEFAULT_CYCLE_BUDGET).unwrap();
            let mut acc = EdgeVector::zeros(g.edge_count());
            for (i, c) in cycles.iter().enumerate() {
                if mask >> (i % 32) & 1 == 1 && (i / 32) % 2 == (mask as usize >> 5) % 2 {
                    acc ^= &c.to_edge_vector(&g);
                }
            }
            prop_assert!(is_even(&acc, &g));
        }

        #[test]
        fn forest_plus_components_is_vertex_count(mask in any::<u64>()) {
            let g = build_grid_patch(4, 5).unwrap();
            let open = EdgeVector::from_mask(g.edge_count(), mask);
            let view = g.restrict(&open).unwrap();
            let forest = view.spanning_forest();
            prop_assert_eq!(forest.count_ones() + view.connected_components().count, g.vertex_count());
            prop_assert_eq!(fundamental_cycles(&view, &forest).unwrap().len(), cycle_space_dim(&view));
        }
    }
}
