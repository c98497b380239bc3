//! Fixtures shared by the benchmarks: bundled models and tables.

use std::path::PathBuf;

use weakind::io::{read_model_file, read_table_csv};
use weakind::{compute_basis, BasisOptions, ContingencyTable, MarkovBasis, SuffStatMatrix};

pub fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

pub fn design(model: &str) -> SuffStatMatrix {
    SuffStatMatrix::for_model(&read_model_file(data(model)).expect("model file")).expect("design")
}

pub fn table(file: &str) -> ContingencyTable {
    read_table_csv(data(file)).expect("table file")
}

pub fn basis(a: &SuffStatMatrix) -> MarkovBasis {
    compute_basis(a, BasisOptions::default()).expect("basis")
}
