//! Bernoulli bond percolation and the FK-Ising (q = 2 random-cluster) measure.

use rand::Rng;

use super::distribution::{check_cap, check_probability, SubsetDistribution, DEFAULT_EDGE_CAP};
use crate::error::{Error, Result};
use crate::gf2::EdgeVector;
use crate::graph::Graph;

/// Each edge open independently with probability `p`.
pub fn bernoulli_sample<R: Rng + ?Sized>(g: &Graph, p: f64, rng: &mut R) -> Result<EdgeVector> {
    check_probability(p)?;
    let u = uniforms(g.edge_count(), rng);
    Ok(bernoulli_from_uniforms(&u, p))
}

/// One uniform label per edge, in edge-id order.
pub fn uniforms<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    (0..m).map(|_| rng.random::<f64>()).collect()
}

/// Threshold coupling: edge `e` is open iff `u[e] < p`, so configurations
/// built from the same labels are nested in `p`.
pub fn bernoulli_from_uniforms(u: &[f64], p: f64) -> EdgeVector {
    EdgeVector::from_edges(u.len(), u.iter().enumerate().filter(|(_, &x)| x < p).map(|(e, _)| e))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Number of connected components of the spanning subgraph `mask`.
pub(crate) fn components_of_mask(g: &Graph, mask: u64, parent: &mut Vec<usize>) -> usize {
    parent.clear();
    parent.extend(0..g.vertex_count());
    let mut count = g.vertex_count();
    let mut rest = mask;
    while rest != 0 {
        let e = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let (a, b) = g.edge(e);
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}

/// Exact FK-Ising distribution: weight `(p/(1−p))^{#open} · 2^{k(ω)}`.
/// `p ∈ {0, 1}` gives the point masses on the empty and full configurations.
pub fn fk_exact(g: &Graph, p: f64) -> Result<SubsetDistribution> {
    fk_exact_capped(g, p, DEFAULT_EDGE_CAP)
}

pub fn fk_exact_capped(g: &Graph, p: f64, cap: usize) -> Result<SubsetDistribution> {
    check_probability(p)?;
    let m = g.edge_count();
    check_cap(m, cap)?;
    if p == 0.0 {
        return Ok(SubsetDistribution::point_mass(m, 0));
    }
    if p == 1.0 {
        return Ok(SubsetDistribution::point_mass(m, (1u64 << m) - 1));
    }
    let log_r = (p / (1.0 - p)).ln();
    let ln2 = std::f64::consts::LN_2;
    let mut parent = Vec::with_capacity(g.vertex_count());
    let logs: Vec<f64> = (0..1u64 << m)
        .map(|mask| {
            let k = components_of_mask(g, mask, &mut parent);
            mask.count_ones() as f64 * log_r + k as f64 * ln2
        })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    SubsetDistribution::from_weights(m, logs.into_iter().map(|l| (l - top).exp()).collect())
}

/// Heat-bath open probability for one edge given the rest of the
/// configuration: `p` if its endpoints are joined off the edge, `p/(2−p)`
/// otherwise.
pub fn heat_bath_open_probability(p: f64, endpoints_connected: bool) -> f64 {
    if endpoints_connected {
        p
    } else {
        p / (2.0 - p)
    }
}

/// Single-bond heat-bath chain for the FK-Ising measure, started all-open.
/// Each update picks an edge uniformly at random and resamples it from its
/// conditional law, so the chain is reversible for [`fk_exact`].
#[derive(Clone, Debug)]
pub struct FkChain<'g> {
    graph: &'g Graph,
    p: f64,
    state: EdgeVector,
    mark: Vec<u32>,
    epoch: u32,
    stack: Vec<usize>,
}

impl<'g> FkChain<'g> {
    pub fn new(graph: &'g Graph, p: f64) -> Result<Self> {
        check_probability(p)?;
        if p == 0.0 || p == 1.0 {
            return Err(Error::InvalidParameter("heat-bath chain needs 0 < p < 1".into()));
        }
        Ok(FkChain {
            graph,
            p,
            state: graph.all_edges(),
            mark: vec![0; graph.vertex_count()],
            epoch: 0,
            stack: Vec::new(),
        })
    }

    pub fn state(&self) -> &EdgeVector {
        &self.state
    }

    fn connected_off(&mut self, e: usize) -> bool {
        let (u, v) = self.graph.edge(e);
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        self.stack.clear();
        self.stack.push(u);
        self.mark[u] = epoch;
        while let Some(x) = self.stack.pop() {
            for &(w, f) in self.graph.adjacency(x) {
                if f == e || !self.state.get(f) || self.mark[w] == epoch {
                    continue;
                }
                if w == v {
                    return true;
                }
                self.mark[w] = epoch;
                self.stack.push(w);
            }
        }
        false
    }

    /// Resamples edge `e` from its conditional law.
    pub fn update_edge<R: Rng + ?Sized>(&mut self, e: usize, rng: &mut R) {
        let q = heat_bath_open_probability(self.p, self.connected_off(e));
        let open = rng.random::<f64>() < q;
        self.state.set(e, open);
    }

    pub fn update<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let m = self.graph.edge_count();
        if m == 0 {
            return;
        }
        let e = rng.random_range(0..m);
        self.update_edge(e, rng);
    }

    pub fn run<R: Rng + ?Sized>(&mut self, updates: usize, rng: &mut R) {
        for _ in 0..updates {
            self.update(rng);
        }
    }
}

/// Chain state after `sweeps · E` random single-edge updates from all-open.
pub fn fk_glauber<R: Rng + ?Sized>(g: &Graph, p: f64, sweeps: usize, rng: &mut R) -> Result<EdgeVector> {
    if sweeps == 0 {
        return Err(Error::InvalidParameter("sweeps must be >= 1".into()));
    }
    let mut chain = FkChain::new(g, p)?;
    chain.run(sweeps * g.edge_count(), rng);
    Ok(chain.state)
}

/// Empirical distribution of the chain: discards `burn_in` updates, then
/// records the state after each of the next `recorded` updates.
pub fn fk_glauber_histogram<R: Rng + ?Sized>(
    g: &Graph,
    p: f64,
    burn_in: usize,
    recorded: usize,
    rng: &mut R,
) -> Result<SubsetDistribution> {
    check_cap(g.edge_count(), DEFAULT_EDGE_CAP)?;
    let mut chain = FkChain::new(g, p)?;
    chain.run(burn_in, rng);
    let mut counts = vec![0u64; 1 << g.edge_count()];
    for _ in 0..recorded {
        chain.update(rng);
        counts[chain.state.to_mask() as usize] += 1;
    }
    SubsetDistribution::from_counts(g.edge_count(), &counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{k4, path, triangle};
    use crate::models::{tv_distance, RngStream};

    #[test]
    fn bernoulli_extremes() {
        let g = k4();
        let mut rng = RngStream::new(1, 0).rng();
        assert!(bernoulli_sample(&g, 0.0, &mut rng).unwrap().is_zero());
        assert_eq!(bernoulli_sample(&g, 1.0, &mut rng).unwrap(), g.all_edges());
        assert!(bernoulli_sample(&g, -0.1, &mut rng).is_err());
    }

    #[test]
    fn bernoulli_edge_frequency() {
        let g = k4();
        let mut rng = RngStream::new(2, 0).rng();
        let trials = 100_000;
        let mut counts = [0usize; 6];
        for _ in 0..trials {
            for e in bernoulli_sample(&g, 0.5, &mut rng).unwrap().iter_ones() {
                counts[e] += 1;
            }
        }
        for c in counts {
            assert!((c as f64 / trials as f64 - 0.5).abs() < 0.005);
        }
    }

    #[test]
    fn coupled_samples_are_nested() {
        let mut rng = RngStream::new(3, 0).rng();
        let u = uniforms(50, &mut rng);
        let lo = bernoulli_from_uniforms(&u, 0.4);
        let hi = bernoulli_from_uniforms(&u, 0.7);
        assert!(lo.is_subset_of(&hi));
    }

    #[test]
    fn triangle_half() {
        let d = fk_exact(&triangle(), 0.5).unwrap();
        assert!((d.prob(0) - 8.0 / 28.0).abs() < 1e-12);
        assert!((d.prob(0b111) - 2.0 / 28.0).abs() < 1e-12);
        assert!((d.probs().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_edge_marginal_is_p_over_two_minus_p() {
        // Weights: closed 2^2 = 4, open r·2; P(open) = r/(r+2) = p/(2−p).
        let g = path(1).unwrap();
        for p in [0.1, 0.5, 0.9] {
            let d = fk_exact(&g, p).unwrap();
            assert!((d.prob(1) - p / (2.0 - p)).abs() < 1e-12);
        }
    }

    #[test]
    fn small_p_concentrates_on_empty() {
        let d = fk_exact(&k4(), 1e-6).unwrap();
        assert!(d.prob(0) > 0.9999);
        assert_eq!(fk_exact(&k4(), 0.0).unwrap().prob(0), 1.0);
        assert_eq!(fk_exact(&k4(), 1.0).unwrap().prob(63), 1.0);
    }

    #[test]
    fn cap_is_enforced() {
        let g = crate::graph::build_grid_patch(10, 10).unwrap();
        assert!(matches!(fk_exact(&g, 0.5), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn heat_bath_probabilities() {
        assert_eq!(heat_bath_open_probability(0.6, true), 0.6);
        assert!((heat_bath_open_probability(0.6, false) - 3.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn conditional_law_matches_exact_ratio() {
        // For every configuration of the other edges, the exact conditional
        // P(e open | rest) must equal the heat-bath rule.
        let g = k4();
        let p = 0.6;
        let d = fk_exact(&g, p).unwrap();
        for e in 0..6 {
            for rest in 0..64u64 {
                if rest >> e & 1 == 1 {
                    continue;
                }
                let open = d.prob(rest | 1 << e);
                let closed = d.prob(rest);
                let view = g.restrict(&EdgeVector::from_mask(6, rest)).unwrap();
                let (a, b) = g.edge(e);
                let want = heat_bath_open_probability(p, view.connected_avoiding(a, b, Some(e)));
                assert!((open / (open + closed) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn triangle_chain_converges() {
        let g = triangle();
        let exact = fk_exact(&g, 0.6).unwrap();
        let mut rng = RngStream::new(4, 0).rng();
        let emp = fk_glauber_histogram(&g, 0.6, 500_000, 1_000_000, &mut rng).unwrap();
        assert!(tv_distance(&emp, &exact).unwrap() < 0.01);
    }

    #[test]
    fn near_one_stays_near_full() {
        let g = k4();
        let mut rng = RngStream::new(5, 0).rng();
        let s = fk_glauber(&g, 0.999, 20, &mut rng).unwrap();
        assert!(s.count_ones() >= 5);
        assert!(fk_glauber(&g, 0.5, 0, &mut rng).is_err());
    }
}
