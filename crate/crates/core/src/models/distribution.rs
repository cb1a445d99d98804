use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::EdgeVector;

/// Default cap on host edge count for exact subset distributions.
pub const DEFAULT_EDGE_CAP: usize = 20;

/// Distribution over the `2^m` edge subsets of an `m`-edge graph. Subset
/// `mask` contains edge `i` iff bit `i` is set.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetDistribution {
    edge_count: usize,
    weights: Vec<f64>,
    normalizer: f64,
}

pub(crate) fn check_cap(m: usize, cap: usize) -> Result<()> {
    if m > cap || m > 30 {
        return Err(Error::BudgetExceeded { what: "exact distribution edge", limit: cap.min(30) });
    }
    Ok(())
}

impl SubsetDistribution {
    /// Wraps unnormalized weights; `weights.len()` must be `2^m`.
    pub fn from_weights(edge_count: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != 1usize << edge_count {
            return Err(Error::InvalidParameter(format!(
                "expected {} weights for {edge_count} edges, got {}",
                1usize << edge_count,
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter("weights must be finite and nonnegative".into()));
        }
        let normalizer = neumaier_sum(weights.iter().copied());
        if normalizer <= 0.0 {
            return Err(Error::InvalidParameter("weights sum to zero".into()));
        }
        Ok(SubsetDistribution { edge_count, weights, normalizer })
    }

    pub fn point_mass(edge_count: usize, mask: u64) -> Self {
        let mut weights = vec![0.0; 1 << edge_count];
        weights[mask as usize] = 1.0;
        SubsetDistribution { edge_count, weights, normalizer: 1.0 }
    }

    /// Product measure with each edge open independently with probability `p`.
    pub fn bernoulli(edge_count: usize, p: f64) -> Result<Self> {
        check_probability(p)?;
        check_cap(edge_count, DEFAULT_EDGE_CAP)?;
        let weights = (0..1u64 << edge_count)
            .map(|mask| {
                let k = mask.count_ones() as i32;
                p.powi(k) * (1.0 - p).powi(edge_count as i32 - k)
            })
            .collect();
        Self::from_weights(edge_count, weights)
    }

    /// Empirical distribution from per-subset counts.
    pub fn from_counts(edge_count: usize, counts: &[u64]) -> Result<Self> {
        Self::from_weights(edge_count, counts.iter().map(|&c| c as f64).collect())
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn weight(&self, mask: u64) -> f64 {
        self.weights[mask as usize]
    }

    pub fn prob(&self, mask: u64) -> f64 {
        self.weights[mask as usize] / self.normalizer
    }

    pub fn probs(&self) -> impl Iterator<Item = f64> + '_ {
        self.weights.iter().map(move |w| w / self.normalizer)
    }

    /// Probability that edge `e` is open.
    pub fn marginal(&self, e: usize) -> f64 {
        neumaier_sum(self.probs().enumerate().filter(|(mask, _)| mask >> e & 1 == 1).map(|(_, p)| p))
    }

    /// Probability of the event given as a bitmask over subset indices
    /// (bit `s` set iff subset `s` belongs to the event). Needs `m <= 6`.
    pub fn event_prob(&self, event: u64) -> f64 {
        debug_assert!(self.edge_count <= 6);
        let mut total = 0.0;
        let mut rest = event;
        while rest != 0 {
            let s = rest.trailing_zeros() as usize;
            total += self.weights[s];
            rest &= rest - 1;
        }
        total / self.normalizer
    }

    /// Support restricted iterator `(mask, probability)` over nonzero entries.
    pub fn support(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(move |(mask, w)| (mask as u64, w / self.normalizer))
    }

    /// CSV rows `(subset-hex, weight, probability)` over the whole universe.
    pub fn csv_rows(&self) -> impl Iterator<Item = (String, f64, f64)> + '_ {
        self.weights.iter().enumerate().map(move |(mask, &w)| {
            (EdgeVector::from_mask(self.edge_count, mask as u64).to_hex(), w, w / self.normalizer)
        })
    }

    pub fn sampler(&self) -> SubsetSampler {
        let mut acc = 0.0;
        let cdf = self
            .weights
            .iter()
            .map(|w| {
                acc += w / self.normalizer;
                acc
            })
            .collect();
        SubsetSampler { edge_count: self.edge_count, cdf }
    }
}

/// Inverse-CDF sampler for a [`SubsetDistribution`].
#[derive(Clone, Debug)]
pub struct SubsetSampler {
    edge_count: usize,
    cdf: Vec<f64>,
}

impl SubsetSampler {
    pub fn sample_mask<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let total = *self.cdf.last().unwrap();
        let u = rng.random::<f64>() * total;
        let i = self.cdf.partition_point(|&c| c <= u);
        if i < self.cdf.len() {
            return i as u64;
        }
        // u rounded up to the total: take the last entry with positive mass.
        (1..self.cdf.len()).rev().find(|&j| self.cdf[j] > self.cdf[j - 1]).unwrap_or(0) as u64
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> EdgeVector {
        EdgeVector::from_mask(self.edge_count, self.sample_mask(rng))
    }
}

/// Half the L1 distance.
pub fn tv_distance(a: &SubsetDistribution, b: &SubsetDistribution) -> Result<f64> {
    if a.edge_count != b.edge_count {
        return Err(Error::LengthMismatch { expected: a.edge_count, actual: b.edge_count });
    }
    Ok(0.5 * neumaier_sum(a.probs().zip(b.probs()).map(|(x, y)| (x - y).abs())))
}

pub fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")))
    }
}

/// Compensated summation.
pub(crate) fn neumaier_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::RngStream;

    #[test]
    fn tv_examples() {
        let d = SubsetDistribution::bernoulli(3, 0.3).unwrap();
        assert_eq!(tv_distance(&d, &d).unwrap(), 0.0);
        let a = SubsetDistribution::point_mass(3, 0);
        let b = SubsetDistribution::point_mass(3, 7);
        assert_eq!(tv_distance(&a, &b).unwrap(), 1.0);
        assert!(tv_distance(&a, &SubsetDistribution::point_mass(2, 0)).is_err());
    }

    #[test]
    fn bernoulli_normalizes_and_has_right_marginals() {
        let d = SubsetDistribution::bernoulli(5, 0.37).unwrap();
        assert!((d.probs().sum::<f64>() - 1.0).abs() < 1e-12);
        for e in 0..5 {
            assert!((d.marginal(e) - 0.37).abs() < 1e-12);
        }
    }

    #[test]
    fn sampler_never_returns_zero_mass() {
        let d = SubsetDistribution::from_weights(2, vec![0.0, 1.0, 0.0, 1.0]).unwrap();
        let s = d.sampler();
        let mut rng = RngStream::new(1, 0).rng();
        for _ in 0..1000 {
            let m = s.sample_mask(&mut rng);
            assert!(m == 1 || m == 3);
        }
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(SubsetDistribution::from_weights(2, vec![1.0; 3]).is_err());
        assert!(SubsetDistribution::from_weights(1, vec![0.0, 0.0]).is_err());
        assert!(SubsetDistribution::from_weights(1, vec![-1.0, 2.0]).is_err());
        assert!(SubsetDistribution::bernoulli(2, 1.5).is_err());
    }

    #[test]
    fn event_probability() {
        let d = SubsetDistribution::bernoulli(2, 0.5).unwrap();
        // Subsets {0} and {0,1}: edge 0 open.
        assert!((d.event_prob(0b1010) - 0.5).abs() < 1e-15);
    }
}
