//! Plain-text rendering of a report. Floats are printed with `{:?}`, which
//! round-trips, so every value parses back to the one in the JSON form.

use std::fmt::Write as _;

use weakind::report::{BasisSummary, FitSummary, ModelSummary, Report, TestSummary};
use weakind::Cell;

fn cells(list: &[Cell]) -> String {
    list.iter().map(Cell::to_string).collect::<Vec<_>>().join(" ")
}

fn row(values: &[f64]) -> String {
    values.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ")
}

pub fn text(r: &Report) -> String {
    let mut s = String::new();
    model(&mut s, &r.model);
    if let Some(b) = &r.basis {
        basis(&mut s, b);
    }
    if let Some(f) = &r.fit {
        fit(&mut s, f);
    }
    if let Some(t) = &r.tests {
        tests(&mut s, t);
    }
    s
}

fn model(s: &mut String, m: &ModelSummary) {
    let _ = writeln!(s, "shape: {}x{}", m.rows, m.cols);
    let _ = writeln!(s, "minors: {}", cells(&m.minors));
    let _ = writeln!(s, "mcrs: {}", m.mcrs);
    let _ = writeln!(s, "mccs: {}", m.mccs);
    let _ = writeln!(s, "free cells: {}", m.free_cells.len());
    if !m.free_cells.is_empty() {
        let _ = writeln!(s, "  {}", cells(&m.free_cells));
    }
    let _ = writeln!(s, "components: {}", m.components);
    let _ = writeln!(s, "corners: {}", m.corners.len());
    if !m.corners.is_empty() {
        let _ = writeln!(s, "  {}", cells(&m.corners));
    }
    let _ = writeln!(s, "rank: {}", m.rank);
    let _ = writeln!(s, "df: {}", m.df);
    let _ = writeln!(s, "columns:");
    for (k, c) in m.columns.iter().enumerate() {
        let _ = writeln!(s, "  z{}: {c}", k + 1);
    }
    let _ = writeln!(s, "parametrization:");
    for line in &m.parametrization {
        let _ = writeln!(s, "  {line}");
    }
}

fn basis(s: &mut String, b: &BasisSummary) {
    let _ = writeln!(s, "moves: {}", b.size);
    for (k, grid) in b.moves.iter().enumerate() {
        let _ = writeln!(s, "  m{}:", k + 1);
        for r in grid {
            let cols: Vec<String> = r.iter().map(|x| format!("{x:>3}")).collect();
            let _ = writeln!(s, "   {}", cols.join(""));
        }
    }
    if let (Some(n), Some(ok)) = (b.verified_up_to, b.connected) {
        let _ = writeln!(s, "verified up to: {n}");
        let _ = writeln!(s, "connected: {ok}");
    }
}

fn fit(s: &mut String, f: &FitSummary) {
    let _ = writeln!(s, "total: {}", f.total);
    let _ = writeln!(s, "fitted counts:");
    for r in &f.fitted_counts {
        let _ = writeln!(s, "  {}", row(r));
    }
    let _ = writeln!(s, "converged: {}", f.converged);
    let _ = writeln!(s, "iterations: {}", f.iterations);
    let _ = writeln!(s, "birch residual: {:?}", f.birch_residual);
}

fn tests(s: &mut String, t: &TestSummary) {
    let _ = writeln!(s, "c2: {:?}", t.c2);
    let _ = writeln!(s, "g2: {:?}", t.g2);
    let _ = writeln!(s, "test df: {}", t.df);
    let _ = writeln!(s, "p asymptotic c2: {:?}", t.p_asymptotic_c2);
    let _ = writeln!(s, "p asymptotic g2: {:?}", t.p_asymptotic_g2);
    if let Some(e) = &t.exact {
        let _ = writeln!(s, "exact statistic: {}", e.statistic);
        let _ = writeln!(s, "exact observed: {:?}", e.observed);
        let _ = writeln!(s, "p exact: {:?}", e.p_value);
        let _ = writeln!(s, "std error: {:?}", e.std_error);
        let _ = writeln!(s, "samples: {}", e.params.samples);
        let _ = writeln!(s, "burn in: {}", e.params.burn_in);
        let _ = writeln!(s, "thinning: {}", e.params.thinning);
        let _ = writeln!(s, "seed: {}", e.params.seed);
        let _ = writeln!(s, "chains: {}", e.params.chains);
        let _ = writeln!(s, "acceptance rate: {:?}", e.acceptance_rate);
        let _ = writeln!(s, "rng: {}", e.rng);
    }
}
