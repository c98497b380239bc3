use thiserror::Error;

use crate::table_model::MinorAnchor;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("minor anchored at {0} lies outside the table")]
    OutOfBounds(MinorAnchor),
    #[error("minor anchored at {0} is listed twice")]
    DuplicateAnchor(MinorAnchor),
    #[error("a {rows}x{cols} table is too small to carry a 2x2 minor")]
    ShapeTooSmall { rows: usize, cols: usize },
    #[error("sufficient statistic has rank {found}, expected {expected}")]
    RankDeficient { expected: usize, found: usize },
    #[error("design matrix is not usable for a Markov basis: {0}")]
    NotApplicable(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("fit did not converge within {max_iter} cycles (residual {residual:e})")]
    NoConvergence { max_iter: usize, residual: f64 },
    #[error("fitted probability is zero at cell ({row},{col}) but the observed count is positive")]
    Inconsistent { row: usize, col: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("integer value does not fit in 64 bits")]
    Overflow,
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("negative count at line {line}, column {col}")]
    NegativeCount { line: usize, col: usize },
    #[error("row {line} has {found} entries, expected {expected}")]
    RaggedRows { line: usize, expected: usize, found: usize },
    #[error("invalid model file: {0}")]
    Model(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
