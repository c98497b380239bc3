//! Model files (JSON) and count tables (CSV).
//!
//! A model file names the table shape and the minors by their 1-based
//! upper-left cells:
//!
//! ```json
//! { "rows": 3, "cols": 3, "minors": [[1, 1], [2, 2]] }
//! { "rows": 4, "cols": 4, "minors": "all" }
//! { "rows": 4, "cols": 4, "minors": { "all_except": [[2, 2]] } }
//! ```
//!
//! A table file has one line per row of comma-separated nonnegative integer
//! counts and no header.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit_infer::ContingencyTable;
use crate::table_model::{Cell, MinorAnchor, MinorSet, Shape};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MinorsSpec {
    /// Only `"all"` is accepted.
    Keyword(String),
    List(Vec<Cell>),
    AllExcept {
        all_except: Vec<Cell>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub rows: usize,
    pub cols: usize,
    pub minors: MinorsSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl ModelFile {
    pub fn from_model(model: &MinorSet) -> Self {
        let shape = model.shape();
        ModelFile {
            rows: shape.rows,
            cols: shape.cols,
            minors: MinorsSpec::List(model.anchors().map(|a| a.cell()).collect()),
            name: None,
            description: None,
        }
    }

    pub fn to_model(&self) -> Result<MinorSet> {
        let shape = Shape::new(self.rows, self.cols);
        let anchors = |cells: &[Cell]| cells.iter().map(|&c| MinorAnchor(c)).collect::<Vec<_>>();
        match &self.minors {
            MinorsSpec::Keyword(k) if k == "all" => MinorSet::full(shape),
            MinorsSpec::Keyword(k) => Err(Error::Model(format!("unknown minors keyword {k:?}"))),
            MinorsSpec::List(cells) => MinorSet::validate(shape, &anchors(cells)),
            MinorsSpec::AllExcept { all_except } => MinorSet::all_except(shape, &anchors(all_except)),
        }
    }
}

pub fn parse_model_json(text: &str) -> Result<MinorSet> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
    file.to_model()
}

pub fn read_model_file(path: impl AsRef<Path>) -> Result<MinorSet> {
    parse_model_json(&std::fs::read_to_string(path)?)
}

/// Parses comma-separated counts; blank lines are ignored.
pub fn parse_table_csv(text: &str) -> Result<ContingencyTable> {
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (k, field) in line.split(',').enumerate() {
            let field = field.trim();
            let col = k + 1;
            match field.parse::<i64>() {
                Ok(x) if x < 0 => return Err(Error::NegativeCount { line: line_no, col }),
                Ok(x) => row.push(x as u64),
                Err(e) => return Err(Error::Parse { line: line_no, col, msg: format!("{field:?}: {e}") }),
            }
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::RaggedRows { line: line_no, expected: first.len(), found: row.len() });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse { line: 1, col: 1, msg: "no rows".into() });
    }
    let shape = Shape::new(rows.len(), rows[0].len());
    ContingencyTable::new(shape, rows.concat())
}

pub fn read_table_csv(path: impl AsRef<Path>) -> Result<ContingencyTable> {
    parse_table_csv(&std::fs::read_to_string(path)?)
}

pub fn format_table_csv(table: &ContingencyTable) -> String {
    table
        .rows()
        .iter()
        .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}
