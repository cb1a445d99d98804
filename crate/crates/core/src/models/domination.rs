//! Stochastic domination between subset distributions.
//!
//! `μ` dominates `ν` when `μ(A) ≥ ν(A)` for every increasing event `A`. For
//! up to five edges every increasing event is enumerated (7581 of them at
//! five edges); beyond that only a sampled family of increasing events is
//! tested and the report says so.

use std::sync::OnceLock;

use rand::Rng;
use serde::Serialize;

use super::distribution::{neumaier_sum, SubsetDistribution};
use crate::error::{Error, Result};

/// Largest edge count handled by exhaustive enumeration.
pub const EXHAUSTIVE_MAX_EDGES: usize = 5;

/// Slack allowed when comparing event probabilities; product measures on
/// bridges give exact ties that floating point must not break.
pub const DOMINATION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominationReport {
    pub dominates: bool,
    pub exhaustive: bool,
    pub events_checked: usize,
    /// `min_A (d1(A) − d2(A))` over the events checked.
    pub worst_gap: f64,
    /// Subsets (as masks) forming the worst event.
    pub worst_event: Vec<u64>,
}

/// All up-closed families of subsets of an `m`-element set, each encoded as
/// a bitmask over the `2^m` subset indices.
pub fn monotone_events(m: usize) -> Result<&'static [u64]> {
    static TABLES: [OnceLock<Vec<u64>>; EXHAUSTIVE_MAX_EDGES + 1] =
        [const { OnceLock::new() }; EXHAUSTIVE_MAX_EDGES + 1];
    if m > EXHAUSTIVE_MAX_EDGES {
        return Err(Error::BudgetExceeded { what: "exhaustive domination edge", limit: EXHAUSTIVE_MAX_EDGES });
    }
    Ok(TABLES[m].get_or_init(|| build_monotone(m)))
}

fn build_monotone(m: usize) -> Vec<u64> {
    if m == 0 {
        // Over the one-point lattice: the empty event and the whole space.
        return vec![0, 1];
    }
    // U is increasing iff its slices without / with the top element are
    // increasing families of the smaller lattice with the first inside the second.
    let smaller = build_monotone(m - 1);
    let shift = 1u32 << (m - 1);
    let mut out = Vec::new();
    for &lo in &smaller {
        for &hi in &smaller {
            if lo & !hi == 0 {
                out.push(lo | hi << shift);
            }
        }
    }
    out.sort_unstable();
    out
}

fn event_members(event: u64) -> Vec<u64> {
    (0..64).filter(|s| event >> s & 1 == 1).collect()
}

/// Exhaustive check over every increasing event; needs at most
/// [`EXHAUSTIVE_MAX_EDGES`] edges.
pub fn check_domination(d1: &SubsetDistribution, d2: &SubsetDistribution) -> Result<DominationReport> {
    let m = d1.edge_count();
    if d2.edge_count() != m {
        return Err(Error::LengthMismatch { expected: m, actual: d2.edge_count() });
    }
    let events = monotone_events(m)?;
    let mut worst = (f64::INFINITY, 0u64);
    for &a in events {
        let gap = d1.event_prob(a) - d2.event_prob(a);
        if gap < worst.0 {
            worst = (gap, a);
        }
    }
    Ok(DominationReport {
        dominates: worst.0 >= -DOMINATION_TOLERANCE,
        exhaustive: true,
        events_checked: events.len(),
        worst_gap: worst.0,
        worst_event: event_members(worst.1),
    })
}

/// Non-exhaustive check for larger graphs: every principal up-set `{S ⊇ T}`
/// with `|T| ≤ 2`, plus `samples` up-closures of random antichains of up to
/// four random subsets.
pub fn check_domination_sampled<R: Rng + ?Sized>(
    d1: &SubsetDistribution,
    d2: &SubsetDistribution,
    samples: usize,
    rng: &mut R,
) -> Result<DominationReport> {
    let m = d1.edge_count();
    if d2.edge_count() != m {
        return Err(Error::LengthMismatch { expected: m, actual: d2.edge_count() });
    }
    let full = (1u64 << m) - 1;
    let mut families: Vec<Vec<u64>> = Vec::new();
    for a in 0..m {
        families.push(vec![1 << a]);
        for b in a + 1..m {
            families.push(vec![1 << a | 1 << b]);
        }
    }
    for _ in 0..samples {
        let k = rng.random_range(1..=4);
        families.push((0..k).map(|_| rng.random::<u64>() & full).collect());
    }
    let up_prob = |d: &SubsetDistribution, gens: &[u64]| {
        neumaier_sum(
            (0..=full)
                .filter(|s| gens.iter().any(|g| s & g == *g))
                .map(|s| d.prob(s)),
        )
    };
    let mut worst = (f64::INFINITY, Vec::new());
    for gens in &families {
        let gap = up_prob(d1, gens) - up_prob(d2, gens);
        if gap < worst.0 {
            worst = (gap, gens.clone());
        }
    }
    Ok(DominationReport {
        dominates: worst.0 >= -DOMINATION_TOLERANCE,
        exhaustive: false,
        events_checked: families.len(),
        worst_gap: worst.0,
        worst_event: worst.1,
    })
}
