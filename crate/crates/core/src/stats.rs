//! Binomial summary statistics for Monte Carlo frequencies.

use serde::Serialize;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> Interval {
    if trials == 0 {
        return Interval { lo: 0.0, hi: 1.0 };
    }
    let n = trials as f64;
    let f = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (f + z2 / (2.0 * n)) / denom;
    let half = z * (f * (1.0 - f) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Interval { lo: (centre - half).max(0.0), hi: (centre + half).min(1.0) }
}

/// Standard error `sqrt(q(1−q)/trials)` of a frequency with success probability `q`.
pub fn binomial_sigma(q: f64, trials: usize) -> f64 {
    if trials == 0 {
        return f64::INFINITY;
    }
    (q * (1.0 - q) / trials as f64).sqrt()
}
