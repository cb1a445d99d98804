use super::Graph;
use crate::error::{Error, Result};

/// Vertex id of grid cell `(r, c)` in a patch with `cols` columns.
#[inline]
pub fn grid_vertex(cols: usize, r: usize, c: usize) -> usize {
    r * cols + c
}

/// `rows × cols` square-grid patch. Edges are numbered row by row: the
/// horizontal edge leaving each vertex to the right, then the vertical edge
/// going down.
pub fn build_grid_patch(rows: usize, cols: usize) -> Result<Graph> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter(format!("grid needs positive size, got {rows}x{cols}")));
    }
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = grid_vertex(cols, r, c);
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Graph::new(rows * cols, &edges)
}

pub fn torus(rows: usize, cols: usize) -> Result<Graph> {
    if rows < 3 || cols < 3 {
        return Err(Error::InvalidParameter(format!(
            "torus needs both sides >= 3 to stay simple, got {rows}x{cols}"
        )));
    }
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = grid_vertex(cols, r, c);
            edges.push((v, grid_vertex(cols, r, (c + 1) % cols)));
            edges.push((v, grid_vertex(cols, (r + 1) % rows, c)));
        }
    }
    Graph::new(rows * cols, &edges)
}

pub fn triangle() -> Graph {
    Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).expect("triangle")
}

pub fn complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("complete graph needs n >= 1".into()));
    }
    let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    Graph::new(n, &edges)
}

pub fn k4() -> Graph {
    complete(4).expect("k4")
}

/// Path with `len` edges on vertices `0..=len`.
pub fn path(len: usize) -> Result<Graph> {
    if len == 0 {
        return Err(Error::InvalidParameter("path length must be positive".into()));
    }
    let edges: Vec<_> = (0..len).map(|i| (i, i + 1)).collect();
    Graph::new(len + 1, &edges)
}

/// Cycle on `len` vertices.
pub fn cycle(len: usize) -> Result<Graph> {
    if len < 3 {
        return Err(Error::InvalidParameter(format!("cycle needs at least 3 vertices, got {len}")));
    }
    let edges: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
    Graph::new(len, &edges)
}

/// Three internally disjoint paths between vertices 0 and 1, of lengths 1, 2
/// and 2 (K4 minus an edge).
pub fn theta() -> Graph {
    Graph::new(4, &[(0, 1), (0, 2), (2, 1), (0, 3), (3, 1)]).expect("theta")
}

/// Full binary tree of the given depth in heap order; the root has degree 2.
pub fn binary_tree(depth: usize) -> Result<Graph> {
    if depth == 0 {
        return Err(Error::InvalidParameter("binary tree depth must be positive".into()));
    }
    if depth > 24 {
        return Err(Error::BudgetExceeded { what: "binary tree depth", limit: 24 });
    }
    let n = (1usize << (depth + 1)) - 1;
    let edges: Vec<_> = (1..n).map(|v| ((v - 1) / 2, v)).collect();
    Graph::new(n, &edges)
}

/// Builds one of the named families. `params` carries the family's size
/// arguments (none for triangle, k4 and theta).
pub fn build_named(name: &str, params: &[usize]) -> Result<Graph> {
    let want = |k: usize| -> Result<()> {
        if params.len() == k {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("`{name}` takes {k} parameter(s), got {}", params.len())))
        }
    };
    match name {
        "triangle" => want(0).map(|_| triangle()),
        "k4" => want(0).map(|_| k4()),
        "theta" => want(0).map(|_| theta()),
        "path" => want(1).and_then(|_| path(params[0])),
        "cycle" => want(1).and_then(|_| cycle(params[0])),
        "complete" => want(1).and_then(|_| complete(params[0])),
        "binary_tree" => want(1).and_then(|_| binary_tree(params[0])),
        "torus" => want(2).and_then(|_| torus(params[0], params[1])),
        "grid" => want(2).and_then(|_| build_grid_patch(params[0], params[1])),
        _ => Err(Error::UnknownGraph(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_dim(g: &Graph) -> usize {
        let k = g.view().connected_components().count;
        g.edge_count() + k - g.vertex_count()
    }

    #[test]
    fn grid_sizes() {
        let g = build_grid_patch(1, 1).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
        let g = build_grid_patch(2, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), cycle_dim(&g)), (4, 4, 1));
        let g = build_grid_patch(4, 4).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), cycle_dim(&g)), (16, 24, 9));
        assert!(build_grid_patch(0, 3).is_err());
    }

    #[test]
    fn named_sizes() {
        let t = build_named("triangle", &[]).unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (3, 3));
        let k = build_named("k4", &[]).unwrap();
        assert_eq!((k.vertex_count(), k.edge_count(), cycle_dim(&k)), (4, 6, 3));
        let b = build_named("binary_tree", &[3]).unwrap();
        assert_eq!((b.vertex_count(), b.edge_count()), (15, 14));
        assert_eq!(b.degree(0), 2);
        let th = build_named("theta", &[]).unwrap();
        assert_eq!(cycle_dim(&th), 2);
        let tor = build_named("torus", &[6, 6]).unwrap();
        assert_eq!((tor.edge_count(), tor.max_degree()), (72, 4));
        assert!(matches!(build_named("petersen", &[]), Err(Error::UnknownGraph(_))));
        assert!(build_named("path", &[]).is_err());
        assert!(torus(2, 5).is_err());
    }
}
