//! Finite boxes of the Diestel-Leader graph DL(2,2).
//!
//! A box of depth `n` and margin `m` is the horocyclic product of two
//! complete binary trees of depth `N = n + 2m`:
//!
//! * `T1` is rooted `m` levels above `o1`; its root sits at level `m` and its
//!   leaves at level `-n - m`. Moving down a level goes to a child in `T1`.
//! * `T2` is rooted at the ancestor of `ô2` that is `m` levels further down;
//!   its root sits at level `-n - m` and its leaves at level `m`. Moving down
//!   a level goes to the parent in `T2`.
//!
//! A vertex is a pair of tree addresses sitting at the same level and two
//! vertices are adjacent when both coordinates are adjacent. Every edge
//! therefore joins adjacent levels, pairing a child step in `T1` with a parent
//! step in `T2`. With `m = 0` this is exactly the region spanned by `T_{1,n}`
//! and `T_{2,n}`; the margin enlarges it symmetrically for distance checks.
//!
//! `o1`, `ô2` and `o2` all lie on the all-zero branch of their trees, so a
//! vertex of a box with margin `m` keeps its address bits in a box with margin
//! `m' > m`; only the depths grow by `m' - m`.

use std::collections::VecDeque;
use std::fmt;

use super::Graph;
use crate::error::{Error, Result};
use crate::gf2::EdgeVector;

/// Default cap on box vertex count.
pub const DEFAULT_VERTEX_BUDGET: usize = 1 << 22;

/// Address in a complete binary tree: the child choices taken from the root,
/// first step in the most significant of the `depth` low bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeAddr {
    depth: u8,
    bits: u64,
}

impl TreeAddr {
    pub const ROOT: TreeAddr = TreeAddr { depth: 0, bits: 0 };

    pub fn new(depth: usize, bits: u64) -> Self {
        assert!(depth < 64 && bits >> depth == 0, "bits {bits:#b} do not fit depth {depth}");
        TreeAddr { depth: depth as u8, bits }
    }

    #[inline]
    pub fn depth(self) -> usize {
        self.depth as usize
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn child(self, c: u64) -> Self {
        TreeAddr::new(self.depth() + 1, self.bits << 1 | (c & 1))
    }

    pub fn parent(self) -> Option<Self> {
        (self.depth > 0).then(|| TreeAddr { depth: self.depth - 1, bits: self.bits >> 1 })
    }

    /// Ancestor at depth `d`; `None` if `d` is deeper than `self`.
    pub fn prefix(self, d: usize) -> Option<Self> {
        (d <= self.depth()).then(|| TreeAddr { depth: d as u8, bits: self.bits >> (self.depth() - d) })
    }

    pub fn is_descendant_of(self, anc: TreeAddr) -> bool {
        self.prefix(anc.depth()) == Some(anc)
    }

    /// The child choice taken at step `i` (0-based from the root).
    pub fn step(self, i: usize) -> u64 {
        assert!(i < self.depth());
        self.bits >> (self.depth() - 1 - i) & 1
    }

    /// Same address seen from a root `shift` levels higher along the all-zero branch.
    pub fn lift(self, shift: usize) -> Self {
        TreeAddr::new(self.depth() + shift, self.bits)
    }
}

impl fmt::Debug for TreeAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TreeAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.depth == 0 {
            return write!(f, "ε");
        }
        for i in 0..self.depth() {
            write!(f, "{}", self.step(i))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct DLBox {
    graph: Graph,
    n: usize,
    margin: usize,
    coord1: Vec<TreeAddr>,
    coord2: Vec<TreeAddr>,
    level: Vec<i32>,
    /// Canonical index `(d1, b1, b2)` → vertex id.
    lookup: Vec<u32>,
    o: usize,
    l1: Vec<usize>,
    l1_prime: Vec<usize>,
    l2: Vec<usize>,
    o2_path: Vec<TreeAddr>,
}

impl DLBox {
    pub fn build(n: usize, margin: usize) -> Result<Self> {
        Self::build_with_budget(n, margin, DEFAULT_VERTEX_BUDGET)
    }

    pub fn build_with_budget(n: usize, margin: usize, vertex_budget: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("DL box depth n must be >= 1".into()));
        }
        let depth = n + 2 * margin;
        let count = (depth < 40)
            .then(|| (depth + 1).checked_mul(1usize << depth))
            .flatten()
            .filter(|&c| c <= vertex_budget)
            .ok_or(Error::BudgetExceeded { what: "DL box vertex", limit: vertex_budget })?;

        let per_level = 1usize << depth;
        let canon = |d1: usize, b1: u64, b2: u64| d1 * per_level + ((b1 as usize) << (depth - d1)) + b2 as usize;
        let decode = |c: usize| {
            let d1 = c / per_level;
            let rest = c % per_level;
            let d2 = depth - d1;
            (d1, (rest >> d2) as u64, (rest & ((1 << d2) - 1)) as u64)
        };
        let neighbors = |c: usize| {
            let (d1, b1, b2) = decode(c);
            let mut out = Vec::with_capacity(4);
            if d1 < depth {
                for ch in 0..2 {
                    out.push(canon(d1 + 1, b1 << 1 | ch, b2 >> 1));
                }
            }
            if d1 > 0 {
                for ch in 0..2 {
                    out.push(canon(d1 - 1, b1 >> 1, b2 << 1 | ch));
                }
            }
            out
        };

        // Renumber in BFS order from o so ids are stable and o = 0.
        let o_canon = canon(margin, 0, 0);
        let mut lookup = vec![u32::MAX; count];
        let mut order = Vec::with_capacity(count);
        let mut queue = VecDeque::from([o_canon]);
        lookup[o_canon] = 0;
        while let Some(c) = queue.pop_front() {
            order.push(c);
            for w in neighbors(c) {
                if lookup[w] == u32::MAX {
                    lookup[w] = order.len() as u32 + queue.len() as u32;
                    queue.push_back(w);
                }
            }
        }
        if order.len() != count {
            return Err(Error::StructuralViolation(format!(
                "DL box reached {} of {count} vertices from o",
                order.len()
            )));
        }

        let mut coord1 = Vec::with_capacity(count);
        let mut coord2 = Vec::with_capacity(count);
        let mut level = Vec::with_capacity(count);
        let mut edges = Vec::with_capacity(2 * count);
        for (id, &c) in order.iter().enumerate() {
            let (d1, b1, b2) = decode(c);
            coord1.push(TreeAddr::new(d1, b1));
            coord2.push(TreeAddr::new(depth - d1, b2));
            level.push(margin as i32 - d1 as i32);
            if d1 < depth {
                for ch in 0..2 {
                    let w = lookup[canon(d1 + 1, b1 << 1 | ch, b2 >> 1)] as usize;
                    edges.push((id.min(w), id.max(w)));
                }
            }
        }
        edges.sort_unstable();
        let graph = Graph::new(count, &edges)?;

        let id = |d1: usize, b1: u64, b2: u64| lookup[canon(d1, b1, b2)] as usize;
        let half = 1u64 << (n - 1);
        let l1 = (0..half).map(|b| id(margin + n, b, 0)).collect();
        let l1_prime = (half..2 * half).map(|b| id(margin + n, b, 0)).collect();
        let l2 = (half..2 * half).map(|b| id(margin, 0, b)).collect();
        let o2_path = (0..=n).map(|i| TreeAddr::new(margin + n - i, 0)).collect();

        Ok(DLBox {
            graph,
            n,
            margin,
            coord1,
            coord2,
            level,
            lookup,
            o: 0,
            l1,
            l1_prime,
            l2,
            o2_path,
        })
    }

    #[inline]
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn margin(&self) -> usize {
        self.margin
    }

    /// Depth of each of the two truncated trees, `n + 2·margin`.
    pub fn tree_depth(&self) -> usize {
        self.n + 2 * self.margin
    }

    #[inline]
    pub fn coord1(&self, v: usize) -> TreeAddr {
        self.coord1[v]
    }

    #[inline]
    pub fn coord2(&self, v: usize) -> TreeAddr {
        self.coord2[v]
    }

    #[inline]
    pub fn level(&self, v: usize) -> i32 {
        self.level[v]
    }

    pub fn o(&self) -> usize {
        self.o
    }

    pub fn o1(&self) -> TreeAddr {
        TreeAddr::new(self.margin, 0)
    }

    pub fn o2(&self) -> TreeAddr {
        TreeAddr::new(self.margin + self.n, 0)
    }

    pub fn o_hat2(&self) -> TreeAddr {
        TreeAddr::new(self.margin, 0)
    }

    /// Vertices `(ℓ, ô2)` with `ℓ` below the first child of `o1`.
    pub fn l1(&self) -> &[usize] {
        &self.l1
    }

    /// Vertices `(ℓ, ô2)` with `ℓ` below the second child of `o1`.
    pub fn l1_prime(&self) -> &[usize] {
        &self.l1_prime
    }

    /// Vertices `(o1, x2)` with `x2` at distance `n` below `ô2` on the branch
    /// away from `o2`.
    pub fn l2(&self) -> &[usize] {
        &self.l2
    }

    /// `T2` addresses from `o2` up to `ô2`.
    pub fn o2_path(&self) -> &[TreeAddr] {
        &self.o2_path
    }

    /// Vertex with the given coordinates, if it lies in the box.
    pub fn vertex(&self, a1: TreeAddr, a2: TreeAddr) -> Option<usize> {
        let depth = self.tree_depth();
        if a1.depth() + a2.depth() != depth {
            return None;
        }
        let c = a1.depth() * (1usize << depth) + ((a1.bits() as usize) << a2.depth()) + a2.bits() as usize;
        self.lookup.get(c).map(|&id| id as usize)
    }

    /// Id in `other` of vertex `v` of this box. Both boxes must share `n` and
    /// `other` must have a margin at least as large.
    pub fn embed(&self, v: usize, other: &DLBox) -> Option<usize> {
        if other.n != self.n || other.margin < self.margin {
            return None;
        }
        let shift = other.margin - self.margin;
        other.vertex(self.coord1[v].lift(shift), self.coord2[v].lift(shift))
    }

    /// Edge id joining `u` (one level up) to its down-neighbor whose first
    /// coordinate is the child `c` of `u`'s.
    pub fn down_edge(&self, u: usize, c: u64) -> Option<usize> {
        let w = self.vertex(self.coord1[u].child(c), self.coord2[u].parent()?)?;
        self.graph.edge_between(u, w)
    }

    pub fn edges_where<F>(&self, mut keep: F) -> EdgeVector
    where
        F: FnMut(usize, usize) -> bool,
    {
        let mut out = EdgeVector::zeros(self.graph.edge_count());
        for (e, &(a, b)) in self.graph.edges().iter().enumerate() {
            let (upper, lower) = if self.level[a] > self.level[b] { (a, b) } else { (b, a) };
            if keep(upper, lower) {
                out.set(e, true);
            }
        }
        out
    }
}
