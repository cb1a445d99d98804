use std::collections::BTreeSet;

use super::Graph;
use crate::error::{Error, Result};

const MAX_EDGES: usize = 8;

/// (edge count, vertex count, edge list).
type Keyed = (usize, usize, Vec<(usize, usize)>);

/// All connected simple graphs with at most `max_edges` edges, one per
/// isomorphism class, including the single vertex. Ordered by edge count,
/// then vertex count, then canonical code.
pub fn connected_graphs_up_to(max_edges: usize) -> Result<Vec<Graph>> {
    if max_edges > MAX_EDGES {
        return Err(Error::BudgetExceeded { what: "small graph enumeration edge", limit: MAX_EDGES });
    }
    let mut all: BTreeSet<Keyed> = BTreeSet::new();
    let mut frontier: BTreeSet<(usize, Vec<(usize, usize)>)> = BTreeSet::from([(1, Vec::new())]);
    all.insert((0, 1, Vec::new()));
    for _ in 0..max_edges {
        let mut next = BTreeSet::new();
        for (v, edges) in &frontier {
            let v = *v;
            for a in 0..v {
                for b in a + 1..=v {
                    let grown_v = if b == v { v + 1 } else { v };
                    if b < v && edges.contains(&(a, b)) {
                        continue;
                    }
                    let mut grown = edges.clone();
                    grown.push((a, b));
                    next.insert((grown_v, canonical(grown_v, &grown)));
                }
            }
        }
        for (v, edges) in &next {
            all.insert((edges.len(), *v, edges.clone()));
        }
        frontier = next;
    }
    all.into_iter().map(|(_, v, edges)| Graph::new(v, &edges)).collect()
}

/// Lexicographically smallest sorted edge list over all relabelings.
fn canonical(v: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..v).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    loop {
        let mut relabeled: Vec<_> = edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        relabeled.sort_unstable();
        if best.as_ref().is_none_or(|b| relabeled < *b) {
            best = Some(relabeled);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}
