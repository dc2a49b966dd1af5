//! Config-driven front end behind the `dfsl` binary.
//!
//! ```text
//! dfsl solve   --config <path> --out <dir>
//! dfsl verify  --config <path> --out <dir>
//! dfsl kernels --mu <real> --m <int> --out <dir>
//! ```
//!
//! Exit codes: 0 success, 1 invalid input or I/O failure, 2 numerical
//! failure, 3 verification ran but at least one check failed. Diagnostics go
//! to standard error; standard output carries nothing.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::assembly::{assemble, sample_coefficients, CoefficientSpec, Coefficients, Form, Profile};
use crate::eigensolve::{residual_check, solve_problem};
use crate::error::{Error, Result};
use crate::fracops::Grid;
use crate::kernels::{gl_weights, rl_diff_kernel, rl_sum_kernel, FractionalOrder};
use crate::verify::{run_suite, CoefficientProfile, SuiteConfig, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_CHECKS_FAILED: i32 = 3;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
}

/// The JSON document as written by the user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub form: Form,
    pub mu: f64,
    pub grid: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Profile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Profile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Profile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Random trials per bilinear check in `verify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Run a parameter sweep in `verify` instead of checking only this problem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SuiteConfig>,
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub form: Form,
    pub mu: FractionalOrder,
    pub grid: Grid,
    pub coeff_spec: CoefficientSpec,
    pub coeffs: Coefficients,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub trials: Option<usize>,
    pub sweep: Option<SuiteConfig>,
    pub raw: RawConfig,
}

fn parse_error(e: serde_json::Error) -> Error {
    use serde_json::error::Category;
    match e.classify() {
        Category::Syntax | Category::Eof => Error::Parse(format!(
            "malformed JSON at line {} column {}: {e}",
            e.line(),
            e.column()
        )),
        Category::Data => Error::Parse(format!("config schema violation: {e}")),
        Category::Io => Error::Io(e.to_string()),
    }
}

fn build_grid(form: Form, grid: &GridConfig, h: Option<f64>) -> Result<Grid> {
    match (form, grid.a, grid.b, grid.n) {
        (Form::Rl, _, _, _) if h.is_some_and(|h| h != 1.0) => {
            Err(Error::Validation("h: the rl form requires h = 1".into()))
        }
        (Form::Rl, Some(a), Some(b), None) => Grid::nabla(a, b),
        // points {0, …, n}
        (Form::Rl, None, None, Some(n)) => Grid::nabla(-1, n.saturating_add(1)),
        (Form::Gl, None, None, Some(n)) => Grid::delta(n, h.unwrap_or(1.0)),
        (Form::Gl, _, _, _) => Err(Error::Validation("grid: the gl form takes {\"n\": N}".into())),
        (Form::Rl, _, _, _) => Err(Error::Validation(
            "grid: the rl form takes either {\"a\": A, \"b\": B} or {\"n\": N}".into(),
        )),
    }
}

/// Parses and validates a JSON config document.
pub fn parse_config(text: &str) -> Result<RunSpec> {
    let raw: RawConfig = serde_json::from_str(text).map_err(parse_error)?;
    let mu = FractionalOrder::new(raw.mu)?;
    let grid = build_grid(raw.form, &raw.grid, raw.h)?;
    let coeff_spec = CoefficientSpec {
        p: raw.p.clone().unwrap_or(Profile::Constant(1.0)),
        q: raw.q.clone().unwrap_or(Profile::Constant(0.0)),
        r: raw.r.clone().unwrap_or(Profile::Constant(1.0)),
    };
    let coeffs = sample_coefficients(&coeff_spec, &grid)?;
    if raw.trials == Some(0) {
        return Err(Error::Validation("trials must be at least 1".into()));
    }
    if let Some(sweep) = &raw.sweep {
        sweep.validate()?;
    }
    Ok(RunSpec {
        form: raw.form,
        mu,
        grid,
        coeff_spec,
        coeffs,
        seed: raw.seed,
        out: raw.out.clone(),
        trials: raw.trials,
        sweep: raw.sweep.clone(),
        raw,
    })
}

pub fn load_config(path: &Path) -> Result<RunSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// `%.17g`: 17 significant digits, trailing zeros dropped.
pub fn format_g17(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    if (-4..17).contains(&exp) {
        let body = if exp >= 0 {
            let int_len = exp as usize + 1;
            if digits.len() <= int_len {
                format!("{digits}{}", "0".repeat(int_len - digits.len()))
            } else {
                format!("{}.{}", &digits[..int_len], &digits[int_len..])
            }
        } else {
            format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
        };
        format!("{sign}{body}")
    } else {
        let frac = &digits[1..];
        let mant = if frac.is_empty() { digits[..1].to_string() } else { format!("{}.{frac}", &digits[..1]) };
        let esign = if exp < 0 { '-' } else { '+' };
        format!("{sign}{mant}e{esign}{:02}", exp.abs())
    }
}

fn write_lines(path: &Path, lines: impl IntoIterator<Item = String>) -> Result<()> {
    let mut text = String::new();
    for line in lines {
        text.push_str(&line);
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))
}

/// Assembles and solves the configured problem; writes `eigenvalues.csv`,
/// `eigenvectors.csv` and `manifest.json` into `out`.
pub fn solve(spec: &RunSpec, out: &Path) -> Result<()> {
    let problem = assemble(spec.form, &spec.coeffs, &spec.grid, spec.mu)?;
    let decomp = solve_problem(&problem)?;
    let max_residual = residual_check(&problem, &decomp)?;

    ensure_dir(out)?;
    write_lines(&out.join("eigenvalues.csv"), decomp.values().iter().map(|&v| format_g17(v)))?;
    let vectors = decomp.vectors();
    write_lines(
        &out.join("eigenvectors.csv"),
        (0..vectors.nrows()).map(|i| {
            vectors.row(i).iter().map(|&v| format_g17(v)).collect::<Vec<_>>().join(",")
        }),
    )?;
    let manifest = json!({
        "toolkit": "dfsl",
        "version": crate::VERSION,
        "command": "solve",
        "config": spec.raw,
        "grid_points": spec.grid.points().collect::<Vec<_>>(),
        "dimension": problem.dim(),
        "residuals": decomp.residuals(),
        "max_relative_residual": max_residual,
        "solver": decomp.meta(),
    });
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Io(e.to_string()))?;
    write_lines(&out.join("manifest.json"), [text])
}

/// Suite configuration implied by a run spec: its own sweep, or the single
/// configured problem.
pub fn suite_for(spec: &RunSpec) -> SuiteConfig {
    let mut cfg = spec.sweep.clone().unwrap_or_else(|| SuiteConfig {
        mus: vec![spec.mu.get()],
        sizes: vec![spec.grid.size()],
        forms: vec![spec.form],
        coefficients: vec![CoefficientProfile::Custom(spec.coeff_spec.clone())],
        h: spec.grid.h,
        ..SuiteConfig::default()
    });
    if let Some(seed) = spec.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = spec.trials {
        cfg.trials = trials;
    }
    cfg
}

/// Runs the verification checks and writes `report.json` into `out`.
pub fn verify(spec: &RunSpec, out: &Path) -> Result<VerificationReport> {
    let report = run_suite(&suite_for(spec))?;
    ensure_dir(out)?;
    write_lines(&out.join("report.json"), [report.to_json()?])?;
    Ok(report)
}

/// Writes `kernels.csv` with columns `k, gl_weight, rl_sum, rl_diff`.
pub fn kernels(mu: FractionalOrder, m: usize, out: &Path) -> Result<()> {
    let w = gl_weights(mu, m);
    let c = rl_sum_kernel(mu, m);
    let e = rl_diff_kernel(mu, m);
    ensure_dir(out)?;
    let rows = (0..=m).map(|k| {
        format!("{k},{},{},{}", format_g17(w[k]), format_g17(c[k]), format_g17(e[k]))
    });
    write_lines(
        &out.join("kernels.csv"),
        std::iter::once("k,gl_weight,rl_sum,rl_diff".to_string()).chain(rows),
    )
}

#[derive(Debug, Parser)]
#[command(name = "dfsl", version, about = "Discrete fractional Sturm-Liouville toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the configured eigenproblem and write spectra and eigenvectors.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification checks and write report.json.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the kernel coefficient sequences.
    Kernels {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Convergence { .. } => EXIT_NUMERICAL,
        _ => EXIT_INVALID,
    }
}

fn out_dir(cli: Option<PathBuf>, spec: &RunSpec) -> Result<PathBuf> {
    cli.or_else(|| spec.out.clone())
        .ok_or_else(|| Error::Validation("no output directory: pass --out or set \"out\"".into()))
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Solve { config, out } => {
            let spec = load_config(&config)?;
            solve(&spec, &out_dir(out, &spec)?)?;
            Ok(EXIT_OK)
        }
        Command::Verify { config, out } => {
            let spec = load_config(&config)?;
            let report = verify(&spec, &out_dir(out, &spec)?)?;
            if report.all_passed() {
                Ok(EXIT_OK)
            } else {
                eprintln!(
                    "dfsl: {} of {} checks failed",
                    report.summary.failed, report.summary.total
                );
                Ok(EXIT_CHECKS_FAILED)
            }
        }
        Command::Kernels { mu, m, out } => {
            kernels(FractionalOrder::new(mu)?, m, &out)?;
            Ok(EXIT_OK)
        }
    }
}

/// Entry point shared by the binary and tests; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            // help and version text go to stderr as well
            eprint!("{e}");
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("dfsl: {e}");
            exit_code(&e)
        }
    }
}
