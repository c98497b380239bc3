use statrs::function::gamma::{gamma_ur, ln_gamma};

use super::{ContingencyTable, FittedTable};
use crate::error::{Error, Result};

/// Pearson statistic `n Σ (p - p̂)² / p̂` over the cells with `p̂ > 0`.
pub fn pearson_c2(h: &ContingencyTable, fit: &FittedTable) -> Result<f64> {
    c2_from_counts(&h.counts, &fit.probs, h.shape.cols)
}

/// Likelihood-ratio statistic `2n Σ p log(p / p̂)` over the cells with `h > 0`.
pub fn g2(h: &ContingencyTable, fit: &FittedTable) -> Result<f64> {
    g2_from_counts(&h.counts, &fit.probs, h.shape.cols)
}

fn inconsistent(k: usize, cols: usize) -> Error {
    Error::Inconsistent { row: k / cols + 1, col: k % cols + 1 }
}

pub(crate) fn c2_from_counts(h: &[u64], probs: &[f64], cols: usize) -> Result<f64> {
    let n = h.iter().sum::<u64>() as f64;
    let mut acc = 0.0;
    for (k, (&x, &p)) in h.iter().zip(probs).enumerate() {
        if p > 0.0 {
            let d = x as f64 - n * p;
            acc += d * d / (n * p);
        } else if x > 0 {
            return Err(inconsistent(k, cols));
        }
    }
    Ok(acc)
}

pub(crate) fn g2_from_counts(h: &[u64], probs: &[f64], cols: usize) -> Result<f64> {
    let n = h.iter().sum::<u64>() as f64;
    let mut acc = 0.0;
    for (k, (&x, &p)) in h.iter().zip(probs).enumerate() {
        if x == 0 {
            continue;
        }
        if p <= 0.0 {
            return Err(inconsistent(k, cols));
        }
        let obs = x as f64 / n;
        acc += obs * (obs / p).ln();
    }
    Ok(2.0 * n * acc)
}

/// Upper tail `P(X > x)` of the chi-square distribution with `df` degrees of
/// freedom, i.e. the regularized upper incomplete gamma `Q(df/2, x/2)`.
pub fn chisq_sf(x: f64, df: usize) -> f64 {
    assert!(df > 0, "chi-square needs positive degrees of freedom");
    if x <= 0.0 {
        return 1.0;
    }
    gamma_ur(df as f64 / 2.0, x / 2.0)
}

/// `-Σ log(h_ij!)`, the log of the unnormalized hypergeometric weight of a
/// table on its fiber.
pub fn log_fiber_weight(h: &ContingencyTable) -> f64 {
    -h.counts.iter().map(|&x| ln_gamma(x as f64 + 1.0)).sum::<f64>()
}
