//! Weakened independence models for two-way contingency tables.
//!
//! A model is a subset `B` of the adjacent 2x2 minors of an `I x J` table of
//! probabilities; the model is the set of strictly positive tables on which
//! every minor in `B` vanishes. This crate derives the model's sufficient
//! statistic and monomial parametrization, computes a Markov basis for its
//! fibers, fits maximum-likelihood estimates by iterative proportional
//! scaling, and runs asymptotic and Monte Carlo exact goodness-of-fit tests.
//!
//! ```
//! use weakind::{MinorAnchor, MinorSet, Shape, SuffStatMatrix};
//!
//! let model = MinorSet::validate(
//!     Shape::new(3, 3),
//!     &[MinorAnchor::new(1, 1), MinorAnchor::new(2, 2)],
//! )?;
//! let a = SuffStatMatrix::for_model(&model)?;
//! assert_eq!(a.rank(), 9 - 2);
//! # Ok::<(), weakind::Error>(())
//! ```

pub mod error;
pub mod fit_infer;
pub mod intlinalg;
pub mod io;
pub mod markov_basis;
pub mod report;
pub mod suffstat;
pub mod table_model;

pub use crate::error::{Error, Result};
pub use crate::fit_infer::{
    chisq_sf, fit_mle, g2, log_fiber_weight, mcmc_exact_test, pearson_c2, ContingencyTable, ExactTest,
    FitOptions, FittedTable, McmcParams, MetropolisChain, Statistic,
};
pub use crate::intlinalg::{integer_kernel, log_vector, rank, IntLattice, IntMatrix, IntVector};
pub use crate::markov_basis::{
    compute_basis, verify_connectivity, BasisOptions, Coverage, Limits, MarkovBasis, Move,
};
pub use crate::suffstat::{generators, parametrize, ColumnLabel, Parametrization, SuffStatMatrix};
pub use crate::table_model::{
    build_graph, decompose, Cell, Decomposition, MinorAnchor, MinorSet, ModelGraph, Shape,
};
