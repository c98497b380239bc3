//! Maximum-likelihood fitting and goodness-of-fit testing.

mod ipf;
mod mcmc;
mod stats;

use serde::{Deserialize, Serialize};

pub use self::ipf::{fit_mle, FitOptions, FittedTable};
pub use self::mcmc::{mcmc_exact_test, ExactTest, McmcParams, MetropolisChain, Statistic, RNG_ALGORITHM};
pub use self::stats::{chisq_sf, g2, log_fiber_weight, pearson_c2};
use crate::error::{Error, Result};
use crate::table_model::{Cell, Shape};

/// Observed nonnegative counts, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub shape: Shape,
    pub counts: Vec<u64>,
}

impl ContingencyTable {
    pub fn new(shape: Shape, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != shape.len() {
            return Err(Error::InvalidParams(format!("{} counts for a {shape} table", counts.len())));
        }
        Ok(ContingencyTable { shape, counts })
    }

    /// Builds a table from nested rows. Panics on ragged input.
    pub fn from_rows(rows: &[&[u64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        ContingencyTable {
            shape: Shape::new(rows.len(), cols),
            counts: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn get(&self, cell: Cell) -> u64 {
        self.counts[self.shape.index(cell)]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.counts.chunks(self.shape.cols).map(<[u64]>::to_vec).collect()
    }
}
