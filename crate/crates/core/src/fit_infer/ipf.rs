use serde::{Deserialize, Serialize};

use super::ContingencyTable;
use crate::error::{Error, Result};
use crate::suffstat::SuffStatMatrix;
use crate::table_model::Shape;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    /// Convergence threshold on the Birch residual, relative to `n`.
    pub tol: f64,
    /// Maximum number of full scaling cycles.
    pub max_iter: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { tol: 1e-10, max_iter: 100_000 }
    }
}

/// Result of iterative proportional scaling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedTable {
    pub shape: Shape,
    /// Fitted cell probabilities, row-major, summing to one.
    pub probs: Vec<f64>,
    pub total: u64,
    pub converged: bool,
    pub iterations: usize,
    /// `max |A_Bᵗ (n p̂ - h)|`.
    pub birch_residual: f64,
}

impl FittedTable {
    /// Fitted counts `n p̂`.
    pub fn counts(&self) -> Vec<f64> {
        self.probs.iter().map(|p| p * self.total as f64).collect()
    }

    pub fn ensure_converged(&self, max_iter: usize) -> Result<&Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence { max_iter, residual: self.birch_residual })
        }
    }
}

/// Maximum-likelihood fit on the closure of the model.
///
/// Starts from the uniform table and cycles over the columns of `A_B`,
/// rescaling the fitted counts on each column's support to match the observed
/// column total. Columns with a zero observed total pin their support to zero
/// up front. An unconverged fit is returned with `converged == false`.
pub fn fit_mle(a: &SuffStatMatrix, h: &ContingencyTable, options: FitOptions) -> Result<FittedTable> {
    if h.shape != a.shape() {
        return Err(Error::InvalidParams(format!("table is {} but the model is {}", h.shape, a.shape())));
    }
    let n = h.total();
    if n == 0 {
        return Err(Error::InvalidParams("the table is empty".into()));
    }
    let nf = n as f64;
    let cells = h.counts.len();
    let observed = a.statistic(&h.counts);
    let supports: Vec<Vec<usize>> = (0..a.cols()).map(|k| a.support(k)).collect();

    let mut fitted = vec![nf / cells as f64; cells];
    for (s, support) in supports.iter().enumerate() {
        if observed[s] == 0 {
            for &i in support {
                fitted[i] = 0.0;
            }
        }
    }
    let active: Vec<usize> = (0..a.cols()).filter(|&s| observed[s] > 0).collect();

    let residual = |fitted: &[f64]| -> f64 {
        supports
            .iter()
            .zip(&observed)
            .map(|(sup, &t)| (sup.iter().map(|&i| fitted[i]).sum::<f64>() - t as f64).abs())
            .fold(0.0, f64::max)
    };

    // Free cells sit in a single one-cell column; they are pinned to their
    // observed counts and the rest of the table is scaled to total `n`, so
    // free cells reproduce `h / n` exactly.
    let mut free = vec![false; cells];
    for support in supports.iter().filter(|s| s.len() == 1) {
        free[support[0]] = true;
    }
    let free_mass: f64 = (0..cells).filter(|&i| free[i]).map(|i| h.counts[i] as f64).sum();
    let normalize = |fitted: &mut [f64]| {
        let rest: f64 = (0..cells).filter(|&i| !free[i]).map(|i| fitted[i]).sum();
        for i in 0..cells {
            if free[i] {
                fitted[i] = h.counts[i] as f64;
            } else if rest > 0.0 {
                fitted[i] *= (nf - free_mass) / rest;
            }
        }
    };
    normalize(&mut fitted);

    let mut res = residual(&fitted);
    let mut iterations = 0;
    while res > options.tol * nf && iterations < options.max_iter {
        for &s in &active {
            let current: f64 = supports[s].iter().map(|&i| fitted[i]).sum();
            if current > 0.0 {
                let factor = observed[s] as f64 / current;
                for &i in &supports[s] {
                    fitted[i] *= factor;
                }
            }
        }
        normalize(&mut fitted);
        iterations += 1;
        res = residual(&fitted);
    }

    let probs = fitted.iter().map(|x| x / nf).collect::<Vec<_>>();
    let birch_residual = res;
    Ok(FittedTable {
        shape: h.shape,
        probs,
        total: n,
        converged: birch_residual <= options.tol * nf,
        iterations,
        birch_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table_model::{MinorAnchor, MinorSet};

    fn fit(m: &MinorSet, rows: &[&[u64]]) -> FittedTable {
        let a = SuffStatMatrix::for_model(m).unwrap();
        fit_mle(&a, &ContingencyTable::from_rows(rows), FitOptions::default()).unwrap()
    }

    #[test]
    fn independence_closed_form() {
        let rows: &[&[u64]] = &[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]];
        let f = fit(&MinorSet::full(Shape::new(3, 3)).unwrap(), rows);
        assert!(f.converged);
        let n = 36.0;
        let r = [8.0, 15.0, 13.0];
        let c = [6.0, 12.0, 18.0];
        for i in 0..3 {
            for j in 0..3 {
                let expected = r[i] * c[j] / (n * n);
                assert!((f.probs[i * 3 + j] - expected).abs() < 1e-10);
            }
        }
        assert!((f.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn biostat_fit_has_structural_zero() {
        let m =
            MinorSet::validate(Shape::new(3, 3), &[MinorAnchor::new(1, 1), MinorAnchor::new(2, 2)]).unwrap();
        let f = fit(&m, &[&[7, 5, 0], &[4, 5, 2], &[1, 5, 5]]);
        assert!(f.converged);
        assert_eq!(f.probs[2], 0.0);
        let counts = f.counts();
        assert!((counts[6] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn saturated_model_returns_observed() {
        let m = MinorSet::validate(Shape::new(2, 2), &[]).unwrap();
        let f = fit(&m, &[&[1, 2], &[3, 4]]);
        assert!(f.converged);
        for (p, h) in f.probs.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!((p - h / 10.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_empty_and_mismatched_tables() {
        let a = SuffStatMatrix::for_model(&MinorSet::full(Shape::new(2, 2)).unwrap()).unwrap();
        let empty = ContingencyTable::from_rows(&[&[0, 0], &[0, 0]]);
        assert!(matches!(fit_mle(&a, &empty, FitOptions::default()), Err(Error::InvalidParams(_))));
        let wide = ContingencyTable::from_rows(&[&[1, 2, 3], &[1, 2, 3]]);
        assert!(fit_mle(&a, &wide, FitOptions::default()).is_err());
    }

    #[test]
    fn unconverged_fit_is_flagged() {
        let m = MinorSet::all_except(Shape::new(4, 4), &[MinorAnchor::new(2, 2)]).unwrap();
        let a = SuffStatMatrix::for_model(&m).unwrap();
        let h = ContingencyTable::from_rows(&[&[4, 2, 2, 2], &[2, 4, 2, 2], &[2, 2, 4, 2], &[2, 2, 2, 4]]);
        let f = fit_mle(&a, &h, FitOptions { tol: 1e-14, max_iter: 1 }).unwrap();
        assert!(!f.converged);
        assert!(matches!(f.ensure_converged(1), Err(Error::NoConvergence { .. })));
    }
}
