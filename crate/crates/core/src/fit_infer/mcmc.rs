//! Exact conditional goodness-of-fit test by a Metropolis walk on the fiber.
//!
//! Each step picks a move uniformly from the basis and a sign uniformly from
//! `{-1, +1}`, and accepts the proposal when it stays nonnegative and
//! `min(1, H(h₂)/H(h₁)) > u` for `u ~ U[0, 1)`, where `H(h) ∝ 1/∏ h_ij!`.

use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::ipf::{fit_mle, FitOptions};
use super::stats::{c2_from_counts, g2_from_counts};
use super::ContingencyTable;
use crate::error::{Error, Result};
use crate::markov_basis::{MarkovBasis, Move};
use crate::suffstat::SuffStatMatrix;

/// The generator behind every chain. Chain `c` of a run seeded with `s` is
/// seeded with `s + c` (wrapping).
pub const RNG_ALGORITHM: &str = "pcg64 (PCG XSL RR 128/64) via seed_from_u64";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    C2,
    G2,
}

impl Statistic {
    fn eval(self, h: &[u64], probs: &[f64], cols: usize) -> Result<f64> {
        match self {
            Statistic::C2 => c2_from_counts(h, probs, cols),
            Statistic::G2 => g2_from_counts(h, probs, cols),
        }
    }
}

impl std::str::FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c2" => Ok(Statistic::C2),
            "g2" => Ok(Statistic::G2),
            other => Err(Error::InvalidParams(format!("unknown statistic {other:?}"))),
        }
    }
}

impl std::fmt::Display for Statistic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Statistic::C2 => "c2",
            Statistic::G2 => "g2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McmcParams {
    /// Recorded states per chain.
    pub samples: usize,
    pub burn_in: usize,
    pub thinning: usize,
    pub seed: u64,
    pub chains: usize,
}

impl Default for McmcParams {
    fn default() -> Self {
        McmcParams { samples: 10_000, burn_in: 50_000, thinning: 50, seed: 0, chains: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactTest {
    pub statistic: Statistic,
    pub observed: f64,
    /// `(1 + #exceedances) / (1 + recorded samples)`.
    pub p_value: f64,
    /// Monte Carlo standard error `sqrt(p (1 - p) / samples)`.
    pub std_error: f64,
    pub params: McmcParams,
    pub acceptance_rate: f64,
    pub rng: String,
}

/// A single Metropolis chain over nonnegative tables.
pub struct MetropolisChain<'a> {
    moves: &'a [Move],
    state: Vec<u64>,
    log_factorial: Vec<f64>,
    rng: Pcg64,
    proposals: u64,
    accepted: u64,
}

impl<'a> MetropolisChain<'a> {
    pub fn new(moves: &'a [Move], start: Vec<u64>, seed: u64) -> Self {
        let n: u64 = start.iter().sum();
        let log_factorial = (0..=n).map(|k| ln_gamma(k as f64 + 1.0)).collect();
        MetropolisChain {
            moves,
            state: start,
            log_factorial,
            rng: Pcg64::seed_from_u64(seed),
            proposals: 0,
            accepted: 0,
        }
    }

    pub fn state(&self) -> &[u64] {
        &self.state
    }

    /// One proposal; returns whether it was accepted.
    pub fn step(&mut self) -> bool {
        self.proposals += 1;
        if self.moves.is_empty() {
            return false;
        }
        let m = &self.moves[self.rng.random_range(0..self.moves.len())];
        let sign: i64 = if self.rng.random_bool(0.5) { 1 } else { -1 };
        let u: f64 = self.rng.random();

        let mut log_ratio = 0.0;
        for (&x, &d) in self.state.iter().zip(&m.vector) {
            if d == 0 {
                continue;
            }
            let y = x as i64 + sign * d;
            if y < 0 {
                return false;
            }
            log_ratio += self.log_factorial[x as usize] - self.log_factorial[y as usize];
        }
        if log_ratio.exp().min(1.0) > u {
            for (x, &d) in self.state.iter_mut().zip(&m.vector) {
                *x = (*x as i64 + sign * d) as u64;
            }
            self.accepted += 1;
            true
        } else {
            false
        }
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposals as f64
        }
    }

    fn counts(&self) -> (u64, u64) {
        (self.accepted, self.proposals)
    }
}

/// Monte Carlo exact p-value of `stat` for `h` under the model `a`.
///
/// The reference fit is the MLE for the observed table, which is shared by
/// the whole fiber. Ties within `1e-12` count as exceedances.
pub fn mcmc_exact_test(
    a: &SuffStatMatrix,
    basis: &MarkovBasis,
    h: &ContingencyTable,
    stat: Statistic,
    params: McmcParams,
) -> Result<ExactTest> {
    if params.samples == 0 || params.thinning == 0 || params.chains == 0 {
        return Err(Error::InvalidParams("samples, thinning and chains must be positive".into()));
    }
    if basis.shape != a.shape() || !basis.is_orthogonal_to(a) {
        return Err(Error::InvalidParams("basis moves are not in the kernel of the design".into()));
    }
    let fit = fit_mle(a, h, FitOptions::default())?;
    fit.ensure_converged(FitOptions::default().max_iter)?;
    let cols = h.shape.cols;
    let observed = stat.eval(&h.counts, &fit.probs, cols)?;
    let rng = RNG_ALGORITHM.to_string();

    if basis.is_empty() {
        return Ok(ExactTest {
            statistic: stat,
            observed,
            p_value: 1.0,
            std_error: 0.0,
            params,
            acceptance_rate: 0.0,
            rng,
        });
    }

    let threshold = observed - 1e-12 * observed.abs().max(1.0);
    let run_chain = |chain: usize| -> Result<(u64, u64, u64)> {
        let seed = params.seed.wrapping_add(chain as u64);
        let mut walk = MetropolisChain::new(&basis.moves, h.counts.clone(), seed);
        for _ in 0..params.burn_in {
            walk.step();
        }
        let mut exceed = 0u64;
        for _ in 0..params.samples {
            for _ in 0..params.thinning {
                walk.step();
            }
            if stat.eval(walk.state(), &fit.probs, cols)? >= threshold {
                exceed += 1;
            }
        }
        let (acc, prop) = walk.counts();
        Ok((exceed, acc, prop))
    };

    let results: Vec<Result<(u64, u64, u64)>> = if params.chains == 1 {
        vec![run_chain(0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..params.chains).map(|c| s.spawn(move || run_chain(c))).collect();
            handles.into_iter().map(|h| h.join().expect("chain thread panicked")).collect()
        })
    };
    let (mut exceed, mut accepted, mut proposals) = (0, 0, 0);
    for r in results {
        let (e, a, p) = r?;
        exceed += e;
        accepted += a;
        proposals += p;
    }
    let total = (params.samples * params.chains) as f64;
    let p_value = (1.0 + exceed as f64) / (1.0 + total);
    Ok(ExactTest {
        statistic: stat,
        observed,
        p_value,
        std_error: (p_value * (1.0 - p_value) / total).sqrt(),
        params,
        acceptance_rate: accepted as f64 / proposals as f64,
        rng,
    })
}
