//! Immutable simple graphs, spanning-subgraph views and traversal primitives.

mod builders;
mod dl;
mod small;
mod spec;

pub use builders::{binary_tree, build_grid_patch, build_named, complete, cycle, grid_vertex, k4, path, theta, torus, triangle};
pub use dl::{DLBox, TreeAddr, DEFAULT_VERTEX_BUDGET};
pub use small::connected_graphs_up_to;
pub use spec::{GraphSpec, SpecTarget};

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::gf2::EdgeVector;

/// Finite undirected simple graph with stable vertex and edge ids.
///
/// Adjacency lists are kept in increasing edge-id order, which makes every
/// traversal below deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Builds a graph; each edge is stored as `(min, max)` and gets the id of
    /// its position in `edges`.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut stored = Vec::with_capacity(edges.len());
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for (id, &(a, b)) in edges.iter().enumerate() {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::InvalidEdge(a, b, "endpoint out of range"));
            }
            if a == b {
                return Err(Error::InvalidEdge(a, b, "self-loop"));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(Error::InvalidEdge(a, b, "parallel edge"));
            }
            stored.push(key);
            adjacency[a].push((b, id));
            adjacency[b].push((a, id));
        }
        Ok(Graph { vertex_count, edges: stored, adjacency })
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `(neighbor, edge id)` pairs of `v`.
    #[inline]
    pub fn adjacency(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adjacency.get(u)?.iter().find(|&&(w, _)| w == v).map(|&(_, e)| e)
    }

    pub fn all_edges(&self) -> EdgeVector {
        EdgeVector::ones(self.edge_count())
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v))
        }
    }

    /// View over every edge.
    pub fn view(&self) -> GraphView<'_> {
        GraphView { graph: self, open: self.all_edges() }
    }

    /// Spanning subgraph keeping exactly the edges set in `open_edges`.
    pub fn restrict(&self, open_edges: &EdgeVector) -> Result<GraphView<'_>> {
        if open_edges.len() != self.edge_count() {
            return Err(Error::LengthMismatch { expected: self.edge_count(), actual: open_edges.len() });
        }
        Ok(GraphView { graph: self, open: open_edges.clone() })
    }

    pub fn bfs_distances(&self, source: usize) -> Distances {
        self.view().bfs_distances(source)
    }
}

/// BFS distance table; unreachable vertices hold `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distances(Vec<u32>);

impl Distances {
    pub const UNREACHABLE: u32 = u32::MAX;

    /// Wraps a table using [`Self::UNREACHABLE`] for unreached vertices.
    pub fn from_raw(raw: Vec<u32>) -> Self {
        Distances(raw)
    }

    pub fn get(&self, v: usize) -> Option<u32> {
        match self.0[v] {
            Self::UNREACHABLE => None,
            d => Some(d),
        }
    }

    pub fn raw(&self) -> &[u32] {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<Option<u32>> {
        (0..self.0.len()).map(|v| self.get(v)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    /// Component label per vertex; labels are numbered in order of each
    /// component's lowest vertex id.
    pub labels: Vec<usize>,
    pub count: usize,
}

impl Components {
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

/// A spanning subgraph of a [`Graph`]: all vertices, only the open edges.
#[derive(Clone, Debug)]
pub struct GraphView<'g> {
    graph: &'g Graph,
    open: EdgeVector,
}

impl<'g> GraphView<'g> {
    #[inline]
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    #[inline]
    pub fn open_edges(&self) -> &EdgeVector {
        &self.open
    }

    #[inline]
    pub fn is_open(&self, e: usize) -> bool {
        self.open.get(e)
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn open_edge_count(&self) -> usize {
        self.open.count_ones()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.graph.adjacency(v).iter().copied().filter(move |&(_, e)| self.open.get(e))
    }

    pub fn bfs_distances(&self, source: usize) -> Distances {
        let mut dist = vec![Distances::UNREACHABLE; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for (w, _) in self.neighbors(u) {
                if dist[w] == Distances::UNREACHABLE {
                    dist[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        Distances(dist)
    }

    /// Whether `u` and `v` are joined by open edges other than `skip`.
    pub fn connected_avoiding(&self, u: usize, v: usize, skip: Option<usize>) -> bool {
        if u == v {
            return true;
        }
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![u];
        seen[u] = true;
        while let Some(x) = stack.pop() {
            for (w, e) in self.neighbors(x) {
                if Some(e) == skip || seen[w] {
                    continue;
                }
                if w == v {
                    return true;
                }
                seen[w] = true;
                stack.push(w);
            }
        }
        false
    }

    pub fn connected_components(&self) -> Components {
        const UNSET: usize = usize::MAX;
        let n = self.vertex_count();
        let mut labels = vec![UNSET; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for root in 0..n {
            if labels[root] != UNSET {
                continue;
            }
            labels[root] = count;
            stack.push(root);
            while let Some(u) = stack.pop() {
                for (w, _) in self.neighbors(u) {
                    if labels[w] == UNSET {
                        labels[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        Components { labels, count }
    }

    /// BFS forest grown from each unvisited vertex in increasing id order,
    /// scanning neighbors in edge-id order.
    pub fn spanning_forest(&self) -> EdgeVector {
        let n = self.vertex_count();
        let mut forest = EdgeVector::zeros(self.graph.edge_count());
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for (w, e) in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        forest.set(e, true);
                        queue.push_back(w);
                    }
                }
            }
        }
        forest
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_parallel_edges() {
        assert!(matches!(Graph::new(2, &[(0, 0)]), Err(Error::InvalidEdge(0, 0, "self-loop"))));
        assert!(matches!(Graph::new(2, &[(0, 1), (1, 0)]), Err(Error::InvalidEdge(1, 0, "parallel edge"))));
        assert!(Graph::new(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn adjacency_lists_each_edge_twice() {
        let g = k4();
        let total: usize = (0..4).map(|v| g.degree(v)).sum();
        assert_eq!(total, 2 * g.edge_count());
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            assert!(g.adjacency(a).contains(&(b, e)));
            assert!(g.adjacency(b).contains(&(a, e)));
        }
    }

    #[test]
    fn bfs_examples() {
        let t = triangle();
        assert_eq!(t.bfs_distances(1).to_vec(), vec![Some(1), Some(0), Some(1)]);
        let p = path(3).unwrap();
        assert_eq!(p.bfs_distances(0).to_vec(), vec![Some(0), Some(1), Some(2), Some(3)]);
        let g = build_grid_patch(4, 4).unwrap();
        assert_eq!(g.bfs_distances(0).get(15), Some(6));
    }

    #[test]
    fn restricted_views() {
        let t = triangle();
        let all = t.restrict(&t.all_edges()).unwrap();
        assert_eq!(all.bfs_distances(0), t.bfs_distances(0));

        let none = t.restrict(&EdgeVector::zeros(3)).unwrap();
        assert_eq!(none.connected_components().count, 3);
        assert_eq!(none.bfs_distances(0).get(1), None);

        let e = t.edge_between(0, 1).unwrap();
        let mut open = t.all_edges();
        open.set(e, false);
        assert_eq!(t.restrict(&open).unwrap().bfs_distances(0).get(1), Some(2));

        assert!(t.restrict(&EdgeVector::zeros(2)).is_err());
    }

    #[test]
    fn component_examples() {
        let g = k4();
        assert_eq!(g.view().connected_components().count, 1);
        assert_eq!(g.restrict(&EdgeVector::zeros(6)).unwrap().connected_components().count, 4);
        let t = triangle();
        let one = EdgeVector::from_edges(3, [0]);
        assert_eq!(t.restrict(&one).unwrap().connected_components().count, 2);
    }

    #[test]
    fn forest_examples() {
        assert_eq!(triangle().view().spanning_forest().count_ones(), 2);
        assert_eq!(k4().view().spanning_forest().count_ones(), 3);
        let two = Graph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(two.view().spanning_forest().count_ones(), 4);
    }

    #[test]
    fn connected_avoiding_skips_edge() {
        let p = path(2).unwrap();
        assert!(p.view().connected_avoiding(0, 2, None));
        assert!(!p.view().connected_avoiding(0, 2, Some(0)));
        let t = triangle();
        assert!(t.view().connected_avoiding(0, 1, t.edge_between(0, 1)));
    }
}
