//! Command-line driver. Exit status 0 on success, 1 when a check fails,
//! 2 on usage errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use super::checks::{kernel_report, smoothing_report, tensor_report, transference_report};
use super::ensembles::{EnsembleKind, EnsembleSpec};
use super::experiments::{
    contrast_report, fp_suite, identity_suite, max_ratio, np_ratio_suite, perturb_suite, ExperimentRecord,
    DEFAULT_P_GRID,
};
use super::report::{write_report, Format};
use crate::error::{Error, Result};
use crate::fourier::sandwich_lower;
use crate::funclib::{parse as parse_function, LipschitzFn};

/// Largest dilation discrepancy accepted by `perturb-ratio`.
pub const DILATION_TOL: f64 = 1e-9;
/// Slack on ratios that must stay at most 1 (or at most `||f'||_∞`).
pub const RATIO_SLACK: f64 = 1e-9;
/// Drift allowed for the positive-mass smoothing control.
pub const MASS_DRIFT_TOL: f64 = 1e-6;
/// Additive grid error of the tensor sandwich.
pub const SANDWICH_TOL: f64 = 1e-3;
pub const HARMONIC_C0_TOL: f64 = 1e-6;
pub const HARMONIC_C1_REL_TOL: f64 = 0.02;

#[derive(Parser, Debug)]
#[command(name = "oplip", about = "Weak-type operator Lipschitz experiments", arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Commutator identity residual against its tolerance
    IdentityCheck(Common),
    /// ||[f(A), B]||_{1,∞} / ||f'||_∞ ||[A, B]||_1
    NpRatio(Common),
    /// ||f(X) - f(Y)||_{1,∞} / ||f'||_∞ ||X - Y||_1 with the dilation check
    PerturbRatio(Common),
    /// Schatten-p ratios along a p grid
    FpScaling(Common),
    /// Trace-class and weak ratios per dimension
    Contrast(Common),
    /// L1 norm of Gaussian-smoothed inputs along dyadic l
    Smoothing(Common),
    /// Transference defect for diag(0, 1, 2)
    Transference(Common),
    /// Calderón–Zygmund constants of sampled kernels
    KernelCheck(Common),
    /// Weak norm of X tensored with a Gaussian profile
    TensorCheck(Common),
}

#[derive(Args, Debug, Default)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Matrix dimension, or the space dimension for `smoothing`
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    /// Catalog entry `name[:p1,p2,..]`; repeat for several
    #[arg(long)]
    function: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long)]
    ensemble: Option<String>,
    /// Ensemble parameters
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    params: Vec<f64>,
    /// Gaussian scales
    #[arg(long, value_delimiter = ',')]
    ls: Vec<f64>,
    /// Space dimension of `tensor-check`
    #[arg(long)]
    space_dim: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    /// Upper bound on the largest reported ratio
    #[arg(long)]
    tol: Option<f64>,
    /// key=value file mirroring the long flags; flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Reads `key=value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: format!("expected key=value, got `{line}`"),
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Splices config entries into `argv` right after the subcommand, skipping
/// keys already given as flags.
fn merge_config(argv: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else if a == "--config" {
            path = argv.get(i + 1).cloned();
        }
    }
    let Some(path) = path else { return Ok(argv) };
    let config = parse_config(&fs::read_to_string(&path)?)?;
    let given = |key: &str| {
        let flag = format!("--{key}");
        argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
    };
    let mut extra = Vec::new();
    for (k, v) in &config {
        if k == "config" || given(k) {
            continue;
        }
        extra.push(format!("--{k}={v}"));
    }
    let mut out = argv;
    let at = out.len().min(2);
    out.splice(at..at, extra);
    Ok(out)
}

enum Failure {
    Usage(String),
    Breach(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Other(e.to_string())
        }
    }
}

/// Runs one invocation and returns the exit status.
pub fn run_cli<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = args.into_iter().map(Into::into).collect();
    let argv = match merge_config(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let matches = match Cli::command().try_get_matches_from(&argv) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    0
                }
                _ => {
                    eprint!("{}", e.render());
                    2
                }
            };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            eprint!("{}", e.render());
            return 2;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Breach(m)) => {
            eprintln!("check failed: {m}");
            1
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            1
        }
    }
}

fn functions(c: &Common, default: &[&str]) -> Result<Vec<LipschitzFn>> {
    if c.function.is_empty() {
        default.iter().map(|s| parse_function(s)).collect()
    } else {
        c.function.iter().map(|s| parse_function(s)).collect()
    }
}

fn ensemble(c: &Common, default: EnsembleKind) -> Result<EnsembleKind> {
    c.ensemble.as_deref().map_or(Ok(default), str::parse)
}

fn emit(c: &Common, records: &[ExperimentRecord]) -> Result<()> {
    let format = c.format.as_deref().map_or(Ok(Format::Csv), str::parse)?;
    write_report(records, format, c.out.as_deref())
}

fn breach(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Breach(msg()))
    }
}

/// `--tol` caps the largest ratio when given.
fn ceiling(c: &Common, records: &[ExperimentRecord]) -> std::result::Result<(), Failure> {
    if let (Some(tol), Some(m)) = (c.tol, max_ratio(records)) {
        breach(m <= tol, || format!("largest ratio {m} exceeds --tol {tol}"))?;
    }
    Ok(())
}

/// Shared invariants: nonnegative sides, finite ratios, identity rows at
/// most 1.
fn row_invariants(records: &[ExperimentRecord]) -> std::result::Result<(), Failure> {
    for r in records {
        breach(r.lhs >= 0.0 && r.rhs >= 0.0, || format!("negative side in {r:?}"))?;
        breach(r.ratio.is_none_or(f64::is_finite), || format!("non-finite ratio in {r:?}"))?;
        if r.function == "identity" {
            breach(r.ratio.is_none_or(|q| q <= 1.0 + RATIO_SLACK), || {
                format!("identity ratio above 1 in {r:?}")
            })?;
        }
    }
    Ok(())
}

fn dispatch(cmd: Command) -> std::result::Result<(), Failure> {
    match cmd {
        Command::IdentityCheck(c) => {
            let fs = functions(&c, &["abs", "sin", "piecewise"])?;
            let rows = identity_suite(c.dim.unwrap_or(8), c.trials.unwrap_or(200), c.seed.unwrap_or(0), &fs)?;
            emit(&c, &rows)?;
            // lhs is the residual, rhs its tolerance
            let scale = c.tol.unwrap_or(1.0);
            for r in &rows {
                breach(r.lhs <= scale * r.rhs, || {
                    format!("residual {} above tolerance {} (trial {}, {})", r.lhs, scale * r.rhs, r.trial, r.function)
                })?;
            }
            Ok(())
        }
        Command::NpRatio(c) => {
            let spec = spec_of(&c, EnsembleKind::GaussianHermitian, 16, 0)?;
            let rows = np_ratio_suite(&spec, c.trials.unwrap_or(10), &functions(&c, &["abs"])?)?;
            emit(&c, &rows)?;
            row_invariants(&rows)?;
            ceiling(&c, &rows)
        }
        Command::PerturbRatio(c) => {
            let spec = spec_of(&c, EnsembleKind::LowRankPerturbation, 16, 0)?;
            let out = perturb_suite(&spec, c.trials.unwrap_or(10), &functions(&c, &["abs"])?)?;
            let rows: Vec<_> = out.iter().map(|(r, _)| r.clone()).collect();
            emit(&c, &rows)?;
            for (r, d) in &out {
                breach(*d <= DILATION_TOL, || format!("dilation discrepancy {d} on trial {}", r.trial))?;
            }
            row_invariants(&rows)?;
            ceiling(&c, &rows)
        }
        Command::FpScaling(c) => {
            let spec = spec_of(&c, EnsembleKind::DiagonalCrossing, 64, 33)?;
            let f = single_function(&c, "abs")?;
            let ps = if c.p.is_empty() { DEFAULT_P_GRID.to_vec() } else { c.p.clone() };
            let rows = fp_suite(&spec, c.trials.unwrap_or(10), &f, &ps)?;
            emit(&c, &rows)?;
            row_invariants(&rows)?;
            let bound = f.lipschitz_constant() + RATIO_SLACK;
            for r in rows.iter().filter(|r| r.p == Some(2.0)) {
                let q = r.ratio.unwrap_or(0.0);
                breach(q <= bound, || format!("p = 2 ratio {q} above ||f'|| on trial {}", r.trial))?;
            }
            ceiling(&c, &rows)
        }
        Command::Contrast(c) => {
            let kind = ensemble(&c, EnsembleKind::LowRankPerturbation)?;
            let dims = if c.dims.is_empty() { vec![8, 16, 32, 64] } else { c.dims.clone() };
            let f = single_function(&c, "abs")?;
            let rows = contrast_report(kind, c.seed.unwrap_or(7), &c.params, &f, &dims, c.trials.unwrap_or(20))?;
            emit(&c, &rows)?;
            row_invariants(&rows)?;
            // only the weak curve is asserted
            let weak: Vec<_> = rows.iter().filter(|r| r.experiment == "contrast-weak").cloned().collect();
            ceiling(&c, &weak)
        }
        Command::Smoothing(c) => {
            let rows = smoothing_report(c.dim.unwrap_or(1))?;
            emit(&c, &rows)?;
            let (decay, control): (Vec<_>, Vec<_>) = rows.iter().partition(|r| r.function != "positive");
            breach(decay.windows(2).all(|w| w[1].lhs <= w[0].lhs), || "smoothed L1 norms increase".into())?;
            for r in control {
                breach((r.lhs - r.rhs).abs() <= MASS_DRIFT_TOL, || {
                    format!("positive control drifts to {} from {} at l = {}", r.lhs, r.rhs, r.trial)
                })?;
            }
            if let (Some(tol), Some(last)) = (c.tol, decay.last()) {
                let q = last.ratio.unwrap_or(0.0);
                breach(q <= tol, || format!("decay ratio {q} exceeds --tol {tol}"))?;
            }
            Ok(())
        }
        Command::Transference(c) => {
            let ls = if c.ls.is_empty() { vec![2.0, 4.0, 8.0] } else { c.ls.clone() };
            let rows = transference_report(c.seed.unwrap_or(17), &ls)?;
            emit(&c, &rows)?;
            let steps: Vec<_> = rows.iter().skip(1).cloned().collect();
            ceiling(&c, &steps)
        }
        Command::KernelCheck(c) => {
            let rows = kernel_report()?;
            emit(&c, &rows)?;
            let c0 = &rows[0];
            let c1 = &rows[1];
            breach((c0.lhs - c0.rhs).abs() <= HARMONIC_C0_TOL, || format!("harmonic C0 {} vs {}", c0.lhs, c0.rhs))?;
            breach((c1.lhs - c1.rhs).abs() <= HARMONIC_C1_REL_TOL * c1.rhs, || {
                format!("harmonic C1 {} vs {}", c1.lhs, c1.rhs)
            })
        }
        Command::TensorCheck(c) => {
            let d = c.space_dim.unwrap_or(1);
            let ls = if c.ls.is_empty() { vec![1.0, 3.0, 10.0] } else { c.ls.clone() };
            let rows = tensor_report(c.seed.unwrap_or(0), c.trials.unwrap_or(50), c.dim.unwrap_or(8), d, &ls)?;
            emit(&c, &rows)?;
            let lower = sandwich_lower(d);
            for r in &rows {
                breach(r.lhs <= r.rhs + SANDWICH_TOL && r.lhs >= lower * r.rhs - SANDWICH_TOL, || {
                    format!("sandwich violated: {} outside [{}, {}] ({})", r.lhs, lower * r.rhs, r.rhs, r.experiment)
                })?;
            }
            Ok(())
        }
    }
}

fn spec_of(c: &Common, kind: EnsembleKind, dim: usize, seed: u64) -> Result<EnsembleSpec> {
    Ok(EnsembleSpec::new(ensemble(c, kind)?, c.dim.unwrap_or(dim), c.seed.unwrap_or(seed)).with_params(c.params.clone()))
}

fn single_function(c: &Common, default: &str) -> Result<LipschitzFn> {
    let mut fs = functions(c, &[default])?;
    if fs.len() != 1 {
        return Err(Error::InvalidParameter("this experiment takes a single --function".into()));
    }
    Ok(fs.remove(0))
}
