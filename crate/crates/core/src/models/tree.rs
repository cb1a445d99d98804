use super::distribution::check_probability;
use crate::error::Result;

/// Probability that the root of the rooted binary tree (root degree 2)
/// reaches depth `depth` through open edges under Bernoulli(`p`); `None`
/// means the infinite tree.
pub fn tree_survival(p: f64, depth: Option<usize>) -> Result<f64> {
    check_probability(p)?;
    Ok(match depth {
        None => {
            if p <= 0.5 {
                0.0
            } else {
                (2.0 * p - 1.0) / (p * p)
            }
        }
        Some(n) => (0..n).fold(1.0, |theta, _| {
            let miss = 1.0 - p * theta;
            1.0 - miss * miss
        }),
    })
}
