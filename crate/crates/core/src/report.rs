//! The JSON report document written by the command-line tool.
//!
//! Its layout is described by `schemas/report.schema.json`; bump
//! [`SCHEMA_VERSION`] whenever a field changes.

use serde::{Deserialize, Serialize};

use crate::fit_infer::{chisq_sf, ExactTest, FittedTable};
use crate::markov_basis::MarkovBasis;
use crate::suffstat::{ColumnLabel, SuffStatMatrix};
use crate::table_model::{Cell, Decomposition, MinorSet};

pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: String,
    pub model: ModelSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tests: Option<TestSummary>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSummary {
    pub rows: usize,
    pub cols: usize,
    pub minors: Vec<Cell>,
    pub mcrs: usize,
    pub mccs: usize,
    pub free_cells: Vec<Cell>,
    pub components: usize,
    pub corners: Vec<Cell>,
    pub rank: usize,
    pub df: usize,
    pub columns: Vec<ColumnLabel>,
    /// One line per cell, e.g. `p[1,1] = z1*z4`.
    pub parametrization: Vec<String>,
}

impl ModelSummary {
    pub fn new(model: &MinorSet, decomp: &Decomposition, a: &SuffStatMatrix) -> Self {
        let shape = model.shape();
        ModelSummary {
            rows: shape.rows,
            cols: shape.cols,
            minors: model.anchors().map(|m| m.cell()).collect(),
            mcrs: decomp.r(),
            mccs: decomp.c(),
            free_cells: decomp.free_cells.clone(),
            components: decomp.k(),
            corners: decomp.corners.clone(),
            rank: a.rank(),
            df: model.len(),
            columns: a.labels().to_vec(),
            parametrization: a.parametrize().to_string().lines().map(str::to_owned).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSummary {
    pub size: usize,
    /// Each move as an `I x J` grid.
    pub moves: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified_up_to: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connected: Option<bool>,
}

impl BasisSummary {
    pub fn new(basis: &MarkovBasis) -> Self {
        BasisSummary {
            size: basis.len(),
            moves: basis.moves.iter().map(|m| m.grid(basis.shape)).collect(),
            verified_up_to: None,
            connected: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSummary {
    pub observed: Vec<Vec<u64>>,
    pub fitted_counts: Vec<Vec<f64>>,
    pub fitted_probs: Vec<Vec<f64>>,
    pub total: u64,
    pub converged: bool,
    pub iterations: usize,
    pub birch_residual: f64,
}

impl FitSummary {
    pub fn new(observed: Vec<Vec<u64>>, fit: &FittedTable) -> Self {
        let cols = fit.shape.cols;
        FitSummary {
            observed,
            fitted_counts: fit.counts().chunks(cols).map(<[f64]>::to_vec).collect(),
            fitted_probs: fit.probs.chunks(cols).map(<[f64]>::to_vec).collect(),
            total: fit.total,
            converged: fit.converged,
            iterations: fit.iterations,
            birch_residual: fit.birch_residual,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestSummary {
    pub c2: f64,
    pub g2: f64,
    pub df: usize,
    pub p_asymptotic_c2: f64,
    pub p_asymptotic_g2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactTest>,
}

impl TestSummary {
    /// Asymptotic p-values use `df` chi-square degrees of freedom; a model
    /// with no minors is saturated and gets p = 1.
    pub fn new(c2: f64, g2: f64, df: usize) -> Self {
        let p = |x: f64| if df == 0 { 1.0 } else { chisq_sf(x, df) };
        TestSummary { c2, g2, df, p_asymptotic_c2: p(c2), p_asymptotic_g2: p(g2), exact: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
}

impl Provenance {
    pub fn new(command: &str) -> Self {
        Provenance {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            model_path: None,
            table_path: None,
            seed: None,
            tol: None,
            max_iter: None,
            max_degree: None,
        }
    }
}
