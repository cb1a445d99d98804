//! Loop O(1) measure, uniform even subgraphs, and the FK-Ising route to the
//! Loop O(1) model: sample FK-Ising at `p = 2x/(1+x)` and take a uniform even
//! subgraph of the result.

use rand::Rng;

use super::distribution::{check_cap, check_probability, SubsetDistribution, SubsetSampler, DEFAULT_EDGE_CAP};
use super::fk::{fk_exact, fk_glauber};
use crate::error::{Error, Result};
use crate::gf2::{fundamental_cycles, EdgeVector};
use crate::graph::{Graph, GraphView};

/// FK parameter whose uniform even subgraph is Loop O(1) at `x`.
pub fn fk_parameter_for(x: f64) -> f64 {
    2.0 * x / (1.0 + x)
}

/// Loop O(1) parameter reached from FK-Ising at `p`.
pub fn loop_parameter_for(p: f64) -> f64 {
    p / (2.0 - p)
}

fn even_masks(g: &Graph) -> impl Iterator<Item = u64> + '_ {
    let m = g.edge_count();
    let endpoint_bits: Option<Vec<u64>> = (g.vertex_count() <= 64)
        .then(|| g.edges().iter().map(|&(a, b)| 1u64 << a | 1u64 << b).collect());
    (0..1u64 << m).filter(move |&mask| match &endpoint_bits {
        Some(bits) => {
            let mut parity = 0u64;
            let mut rest = mask;
            while rest != 0 {
                parity ^= bits[rest.trailing_zeros() as usize];
                rest &= rest - 1;
            }
            parity == 0
        }
        None => crate::gf2::is_even(&EdgeVector::from_mask(m, mask), g),
    })
}

/// Exact Loop O(1) measure: weight `x^{|ω|}` on even subgraphs, zero elsewhere.
pub fn loop_o1_exact(g: &Graph, x: f64) -> Result<SubsetDistribution> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("loop weight {x} outside [0, 1]")));
    }
    let m = g.edge_count();
    check_cap(m, DEFAULT_EDGE_CAP)?;
    let mut weights = vec![0.0; 1 << m];
    for mask in even_masks(g) {
        weights[mask as usize] = x.powi(mask.count_ones() as i32);
    }
    SubsetDistribution::from_weights(m, weights)
}

fn fundamental_basis(gv: &GraphView<'_>) -> Vec<EdgeVector> {
    fundamental_cycles(gv, &gv.spanning_forest()).expect("BFS forest is a spanning forest of its own view")
}

/// Xor of the generators whose coin is heads.
pub fn ues_coinflip_from_coins(m: usize, gens: &[EdgeVector], coins: &[bool]) -> Result<EdgeVector> {
    if coins.len() != gens.len() {
        return Err(Error::LengthMismatch { expected: gens.len(), actual: coins.len() });
    }
    let mut out = EdgeVector::zeros(m);
    for (g, &heads) in gens.iter().zip(coins) {
        if heads {
            out.try_xor_assign(g)?;
        }
    }
    Ok(out)
}

/// Xor of a uniformly random subset of `gens`. When the generators span the
/// cycle space of the view, the output is its uniform even subgraph.
pub fn ues_coinflip<R: Rng + ?Sized>(m: usize, gens: &[EdgeVector], rng: &mut R) -> Result<EdgeVector> {
    let coins: Vec<bool> = gens.iter().map(|_| rng.random::<bool>()).collect();
    ues_coinflip_from_coins(m, gens, &coins)
}

/// Uniform even subgraph via the fundamental cycles of the view's BFS
/// spanning forest, one coin per non-forest edge.
pub fn ues_spanning_tree<R: Rng + ?Sized>(gv: &GraphView<'_>, rng: &mut R) -> EdgeVector {
    let basis = fundamental_basis(gv);
    ues_coinflip(gv.graph().edge_count(), &basis, rng).expect("basis vectors share the host length")
}

/// Deterministic counterpart of [`ues_spanning_tree`] for exhaustive checks.
pub fn ues_spanning_tree_from_coins(gv: &GraphView<'_>, coins: &[bool]) -> Result<EdgeVector> {
    ues_coinflip_from_coins(gv.graph().edge_count(), &fundamental_basis(gv), coins)
}

/// Number of non-forest edges of the view, i.e. coins used by the spanning-tree sampler.
pub fn ues_coin_count(gv: &GraphView<'_>) -> usize {
    fundamental_basis(gv).len()
}

/// Exact law of the uniform even subgraph of each configuration, averaged
/// over `dist`.
pub fn ues_pushforward(g: &Graph, dist: &SubsetDistribution) -> Result<SubsetDistribution> {
    let m = g.edge_count();
    if dist.edge_count() != m {
        return Err(Error::LengthMismatch { expected: m, actual: dist.edge_count() });
    }
    let mut weights = vec![0.0; 1 << m];
    for (mask, prob) in dist.support() {
        let omega = EdgeVector::from_mask(m, mask);
        let view = g.restrict(&omega)?;
        let basis: Vec<u64> = fundamental_basis(&view).iter().map(EdgeVector::to_mask).collect();
        let share = prob / (1u64 << basis.len()) as f64;
        for coins in 0..1u64 << basis.len() {
            let even = basis
                .iter()
                .enumerate()
                .filter(|(i, _)| coins >> i & 1 == 1)
                .fold(0u64, |acc, (_, b)| acc ^ b);
            weights[even as usize] += share;
        }
    }
    SubsetDistribution::from_weights(m, weights)
}

/// Total-variation distance between the exact UES pushforward of FK-Ising
/// at `p` and Loop O(1) at `x = p/(2−p)`.
pub fn identity_gap(g: &Graph, p: f64) -> Result<f64> {
    let pushed = ues_pushforward(g, &fk_exact(g, p)?)?;
    let target = loop_o1_exact(g, loop_parameter_for(p))?;
    super::tv_distance(&pushed, &target)
}

/// How FK-Ising configurations are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FkSource {
    /// Inverse-CDF sampling from the exact distribution (small graphs).
    Exact,
    /// Heat-bath chain with the given number of sweeps.
    Glauber { sweeps: usize },
}

/// Source of generators for the coin-flip sampler, given the host graph and
/// an FK configuration.
pub type GeneratorProvider<'a> = dyn Fn(&Graph, &EdgeVector) -> Result<Vec<EdgeVector>> + Sync + 'a;

/// How the uniform even subgraph of the FK configuration is drawn.
#[derive(Clone, Copy)]
pub enum UesMethod<'a> {
    SpanningTree,
    CoinFlip(&'a GeneratorProvider<'a>),
}

/// Loop O(1) sampler at weight `x` through FK-Ising at `p = 2x/(1+x)`.
pub struct LoopViaFk<'g> {
    graph: &'g Graph,
    x: f64,
    p: f64,
    source: FkSource,
    exact: Option<SubsetSampler>,
}

impl<'g> LoopViaFk<'g> {
    pub fn new(graph: &'g Graph, x: f64, source: FkSource) -> Result<Self> {
        check_probability(x)?;
        let p = fk_parameter_for(x);
        let exact = match source {
            FkSource::Exact => Some(fk_exact(graph, p)?.sampler()),
            FkSource::Glauber { .. } => None,
        };
        Ok(LoopViaFk { graph, x, p, source, exact })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn sample_fk<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<EdgeVector> {
        match (&self.exact, self.source) {
            (Some(s), _) => Ok(s.sample(rng)),
            (None, FkSource::Glauber { sweeps }) => {
                if self.p == 0.0 {
                    Ok(EdgeVector::zeros(self.graph.edge_count()))
                } else if self.p == 1.0 {
                    Ok(self.graph.all_edges())
                } else {
                    fk_glauber(self.graph, self.p, sweeps, rng)
                }
            }
            (None, FkSource::Exact) => unreachable!("exact sampler built in new"),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, method: UesMethod<'_>, rng: &mut R) -> Result<EdgeVector> {
        let omega = self.sample_fk(rng)?;
        match method {
            UesMethod::SpanningTree => Ok(ues_spanning_tree(&self.graph.restrict(&omega)?, rng)),
            UesMethod::CoinFlip(provider) => {
                let gens = provider(self.graph, &omega)?;
                if gens.iter().any(|g| !g.is_subset_of(&omega)) {
                    return Err(Error::InvalidParameter("generator not contained in the FK configuration".into()));
                }
                ues_coinflip(self.graph.edge_count(), &gens, rng)
            }
        }
    }
}

/// One Loop O(1) sample at weight `x`, drawing FK exactly when the graph is
/// within the exact cap and by 50 heat-bath sweeps otherwise.
pub fn loop_via_fk<R: Rng + ?Sized>(g: &Graph, x: f64, method: UesMethod<'_>, rng: &mut R) -> Result<EdgeVector> {
    let source = if g.edge_count() <= DEFAULT_EDGE_CAP { FkSource::Exact } else { FkSource::Glauber { sweeps: 50 } };
    LoopViaFk::new(g, x, source)?.sample(method, rng)
}
