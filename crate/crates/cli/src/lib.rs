//! Command-line front end: argument parsing, command dispatch and rendering.
//!
//! Every command builds a [`Report`]; `--json` prints it as JSON and the
//! default text form is rendered from the same value.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use weakind::io::{read_model_file, read_table_csv};
use weakind::report::{
    BasisSummary, FitSummary, ModelSummary, Provenance, Report, TestSummary, SCHEMA_VERSION,
};
use weakind::{
    compute_basis, decompose, fit_mle, g2, mcmc_exact_test, pearson_c2, verify_connectivity, BasisOptions,
    ContingencyTable, Coverage, Error, FitOptions, Limits, MarkovBasis, McmcParams, MinorSet, Statistic,
    SuffStatMatrix,
};

mod render;

pub const EXIT_OK: i32 = 0;
/// Verification ran and found a disconnected fiber.
pub const EXIT_NOT_CONNECTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
/// An internal consistency check failed.
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Parser, Debug)]
#[command(name = "weakind", version, about = "Weakened independence models for two-way tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decomposition, sufficient statistic and parametrization of a model
    Suffstat {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Markov basis of a model
    Basis {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        basis: BasisArgs,
        #[command(flatten)]
        verify: VerifyArgs,
        #[arg(long)]
        json: bool,
    },
    /// Maximum-likelihood fit with asymptotic goodness-of-fit tests
    Fit {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo exact goodness-of-fit test
    Exact {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        mcmc: McmcArgs,
        #[command(flatten)]
        basis: BasisArgs,
        #[arg(long)]
        json: bool,
    },
    /// Everything above in one JSON document
    Report {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        mcmc: McmcArgs,
        #[command(flatten)]
        basis: BasisArgs,
        #[command(flatten)]
        verify: VerifyArgs,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    table: PathBuf,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[arg(long, default_value_t = FitOptions::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = FitOptions::default().max_iter)]
    max_iter: usize,
}

#[derive(Args, Debug)]
struct McmcArgs {
    #[arg(long, default_value = "c2")]
    stat: Statistic,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 50_000)]
    burnin: usize,
    #[arg(long, default_value_t = 50)]
    thin: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    chains: usize,
}

#[derive(Args, Debug)]
struct BasisArgs {
    /// Largest binomial degree allowed during the Gröbner computation.
    #[arg(long, default_value_t = Limits::default().max_degree)]
    max_degree: u32,
    #[arg(long, default_value_t = Limits::default().max_generators)]
    max_generators: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Check that the basis connects every fiber of tables with total up to N.
    #[arg(long, value_name = "N")]
    verify: Option<u64>,
    /// Check only the fibers of this many random tables instead of all.
    #[arg(long, value_name = "K", requires = "verify")]
    verify_sample: Option<usize>,
    #[arg(long, default_value_t = 0, requires = "verify_sample")]
    verify_seed: u64,
    /// Node cap on each fiber enumeration.
    #[arg(long, default_value_t = weakind::markov_basis::DEFAULT_NODE_BUDGET)]
    verify_budget: usize,
}

impl BasisArgs {
    fn options(&self) -> BasisOptions {
        BasisOptions {
            limits: Limits { max_degree: self.max_degree, max_generators: self.max_generators },
            ..BasisOptions::default()
        }
    }
}

impl McmcArgs {
    fn params(&self) -> McmcParams {
        McmcParams {
            samples: self.samples,
            burn_in: self.burnin,
            thinning: self.thin,
            seed: self.seed,
            chains: self.chains,
        }
    }
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
        Error::ResourceLimit(_) | Error::Overflow => EXIT_RESOURCE,
        Error::RankDeficient { .. } => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_command<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new(), report: None }
                }
                _ => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text, report: None },
            };
        }
    };
    match run(cli) {
        Ok(out) => out,
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            report: None,
        },
    }
}

struct Loaded {
    model: MinorSet,
    a: SuffStatMatrix,
    summary: ModelSummary,
}

/// Names the file in I/O errors.
fn with_path<T>(path: &Path, r: Result<T, Error>) -> Result<T, Error> {
    r.map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => other,
    })
}

fn load_model(path: &Path) -> Result<Loaded, Error> {
    let model = with_path(path, read_model_file(path))?;
    let decomp = decompose(&model);
    let a = weakind::generators(&model, &decomp)?;
    let summary = ModelSummary::new(&model, &decomp, &a);
    Ok(Loaded { model, a, summary })
}

fn load_table(path: &Path, model: &MinorSet) -> Result<ContingencyTable, Error> {
    let h = with_path(path, read_table_csv(path))?;
    if h.shape != model.shape() {
        return Err(Error::InvalidParams(format!("table is {} but the model is {}", h.shape, model.shape())));
    }
    Ok(h)
}

fn provenance(command: &str, model: &Path, table: Option<&PathBuf>) -> Provenance {
    let mut p = Provenance::new(command);
    p.model_path = Some(model.display().to_string());
    p.table_path = table.map(|t| t.display().to_string());
    p
}

fn report(model: ModelSummary, provenance: Provenance) -> Report {
    Report {
        schema_version: SCHEMA_VERSION.to_string(),
        model,
        basis: None,
        fit: None,
        tests: None,
        provenance,
    }
}

fn basis_summary(
    a: &SuffStatMatrix,
    basis: &MarkovBasis,
    verify: &VerifyArgs,
) -> Result<BasisSummary, Error> {
    let mut s = BasisSummary::new(basis);
    if let Some(n) = verify.verify {
        let coverage = match verify.verify_sample {
            Some(tables) => Coverage::Sampled { tables, seed: verify.verify_seed },
            None => Coverage::Exhaustive,
        };
        s.verified_up_to = Some(n);
        s.connected = Some(verify_connectivity(&basis.moves, a, n, coverage, verify.verify_budget)?);
    }
    Ok(s)
}

fn fit_and_test(
    l: &Loaded,
    h: &ContingencyTable,
    args: &FitArgs,
) -> Result<(FitSummary, TestSummary), Error> {
    let options = FitOptions { tol: args.tol, max_iter: args.max_iter };
    let fit = fit_mle(&l.a, h, options)?;
    fit.ensure_converged(args.max_iter)?;
    let tests = TestSummary::new(pearson_c2(h, &fit)?, g2(h, &fit)?, l.model.len());
    Ok((FitSummary::new(h.rows(), &fit), tests))
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let (rep, json) = match cli.command {
        Command::Suffstat { model, json } => {
            let l = load_model(&model)?;
            (report(l.summary, provenance("suffstat", &model, None)), json)
        }
        Command::Basis { model, basis, verify, json } => {
            let l = load_model(&model)?;
            let b = compute_basis(&l.a, basis.options())?;
            let mut prov = provenance("basis", &model, None);
            prov.max_degree = Some(basis.max_degree);
            let mut rep = report(l.summary, prov);
            rep.basis = Some(basis_summary(&l.a, &b, &verify)?);
            (rep, json)
        }
        Command::Fit { input, fit, json } => {
            let l = load_model(&input.model)?;
            let h = load_table(&input.table, &l.model)?;
            let mut prov = provenance("fit", &input.model, Some(&input.table));
            prov.tol = Some(fit.tol);
            prov.max_iter = Some(fit.max_iter);
            let (f, t) = fit_and_test(&l, &h, &fit)?;
            let mut rep = report(l.summary, prov);
            rep.fit = Some(f);
            rep.tests = Some(t);
            (rep, json)
        }
        Command::Exact { input, mcmc, basis, json } => {
            let l = load_model(&input.model)?;
            let h = load_table(&input.table, &l.model)?;
            let b = compute_basis(&l.a, basis.options())?;
            let exact = mcmc_exact_test(&l.a, &b, &h, mcmc.stat, mcmc.params())?;
            let mut prov = provenance("exact", &input.model, Some(&input.table));
            prov.seed = Some(mcmc.seed);
            prov.max_degree = Some(basis.max_degree);
            let defaults = FitOptions::default();
            let (_, mut t) =
                fit_and_test(&l, &h, &FitArgs { tol: defaults.tol, max_iter: defaults.max_iter })?;
            t.exact = Some(exact);
            let mut rep = report(l.summary, prov);
            rep.tests = Some(t);
            (rep, json)
        }
        Command::Report { input, fit, mcmc, basis, verify, out } => {
            let l = load_model(&input.model)?;
            let h = load_table(&input.table, &l.model)?;
            let b = compute_basis(&l.a, basis.options())?;
            let mut prov = provenance("report", &input.model, Some(&input.table));
            prov.seed = Some(mcmc.seed);
            prov.tol = Some(fit.tol);
            prov.max_iter = Some(fit.max_iter);
            prov.max_degree = Some(basis.max_degree);
            let (f, mut t) = fit_and_test(&l, &h, &fit)?;
            t.exact = Some(mcmc_exact_test(&l.a, &b, &h, mcmc.stat, mcmc.params())?);
            let basis_summary = basis_summary(&l.a, &b, &verify)?;
            let mut rep = report(l.summary, prov);
            rep.basis = Some(basis_summary);
            rep.fit = Some(f);
            rep.tests = Some(t);
            if let Some(path) = out {
                std::fs::write(path, serde_json::to_string_pretty(&rep)? + "\n")?;
            }
            (rep, true)
        }
    };

    let mut stdout = if json { serde_json::to_string_pretty(&rep)? + "\n" } else { render::text(&rep) };
    let code = match rep.basis.as_ref().and_then(|b| b.connected) {
        Some(false) => {
            if !json {
                let _ = writeln!(stdout, "warning: the basis does not connect every fiber checked");
            }
            EXIT_NOT_CONNECTED
        }
        _ => EXIT_OK,
    };
    Ok(Outcome { code, stdout, stderr: String::new(), report: Some(rep) })
}
