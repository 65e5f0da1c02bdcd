//! Command-line front end. `run` parses arguments, executes one command and
//! returns the process exit code: 0 on success, 1 on a domain error or failed
//! check, 2 on invalid flags, 3 on an integrity failure.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bessel::{eval_bessel, omega, omega_bar, BesselKind, BesselParams};
use crate::checks::{run_suite, Suite};
use crate::error::{Error, Result};
use crate::errtable::{build_table, write_csv, ErrTableSpec, ExpansionForm};
use crate::kernel::{parse_rational, CoeffExpr};
use crate::legendre::{chain, eval_legendre, LegendreIndex, LegendreKind, LegendreParams};
use crate::oracle::OracleConfig;

#[derive(Debug, Parser)]
#[command(
    name = "legendre-uniform",
    version,
    about = "Uniform large-order expansions of Legendre and modified Bessel functions",
    after_help = "Oracle precision (decimal digits) can be set with LEGENDRE_ORACLE_DIGITS."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a truncated expansion at one point.
    Eval(EvalArgs),
    /// Dump an exact expansion coefficient.
    Coeffs(CoeffsArgs),
    /// Relative errors of the expansion against the oracle, as CSV.
    Errtable(ErrTableArgs),
    /// Run invariant suites.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Bessel,
    Legendre,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// I, K, dI, dK (bessel) or p, q, dp, dq (legendre).
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    pub n: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub xi: f64,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "theta")]
    pub x: Option<f64>,
    /// Angle with x = cos θ, accurate near x = 1.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub k: usize,
    /// γ² as "p/q" (legendre only).
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    /// ξ − 1/8 as "p/q" (legendre only).
    #[arg(long, allow_hyphen_values = true)]
    pub zeta: Option<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    /// The Stirling-adjusted coefficients ψ⁺ (ψ̄⁺ with --bar).
    #[arg(long)]
    pub plus: bool,
    /// Coefficients of the derivative expansion.
    #[arg(long)]
    pub bar: bool,
}

#[derive(Debug, Args)]
pub struct ErrTableArgs {
    #[arg(long, default_value_t = 0.1)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub xi: f64,
    #[arg(long, default_value_t = 4)]
    pub n: u32,
    #[arg(long, default_value_t = 0.5)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub lambda_max: f64,
    /// Number of λ grid points, both ends included.
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
    pub orders: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// legendre or bessel-form.
    #[arg(long, default_value = "legendre")]
    pub form: String,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Serialize)]
struct EvalResult {
    value: f64,
    log_scale: Option<f64>,
    terms: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    v: Option<f64>,
    #[serde(rename = "S", skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<LegendreIndex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta: Option<f64>,
}

/// Parses `args` (program name first) and runs the command, writing results
/// to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        // The reader went away (`| head`); nothing left to report.
        Err(Error::Io(std::io::ErrorKind::BrokenPipe, _)) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Eval(a) => cmd_eval(&a, out),
        Command::Coeffs(a) => cmd_coeffs(&a, out),
        Command::Errtable(a) => cmd_errtable(&a, out, err),
        Command::Check(a) => cmd_check(&a, out),
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.kind(), e.to_string())
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<i32> {
    let r = match a.family {
        FamilyArg::Bessel => {
            let kind: BesselKind = a.kind.parse()?;
            let lambda = a.lambda.ok_or_else(|| Error::Usage("--lambda is required for bessel".into()))?;
            let e = eval_bessel(&BesselParams::new(a.n, lambda, a.order, kind)?)?;
            EvalResult {
                value: e.value,
                log_scale: e.log_scale,
                terms: e.terms,
                v: None,
                s: None,
                mu: None,
                t: Some(e.t),
                eta: Some(e.eta),
            }
        }
        FamilyArg::Legendre => {
            let kind: LegendreKind = a.kind.parse()?;
            let gamma = a.gamma.ok_or_else(|| Error::Usage("--gamma is required for legendre".into()))?;
            let p = match (a.x, a.theta) {
                (Some(x), None) => LegendreParams::new(a.n, gamma, a.xi, x, a.order, kind)?,
                (None, Some(th)) => LegendreParams::at_angle(a.n, gamma, a.xi, th, a.order, kind)?,
                _ => return Err(Error::Usage("give exactly one of --x and --theta".into())),
            };
            let e = eval_legendre(&p)?;
            EvalResult {
                value: e.value,
                log_scale: e.log_scale,
                terms: e.terms,
                v: Some(e.v),
                s: Some(e.s),
                mu: Some(e.mu),
                t: None,
                eta: None,
            }
        }
    };
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("plain data")).map_err(io)?;
    } else {
        match r.log_scale {
            None => writeln!(out, "value = {:.17e}", r.value),
            Some(e) => writeln!(out, "value = {:.17e} * exp({e:.17e})", r.value),
        }
        .map_err(io)?;
        for (k, t) in r.terms.iter().enumerate() {
            writeln!(out, "term[{k}] = {t:.17e}").map_err(io)?;
        }
    }
    Ok(0)
}

fn coefficient(a: &CoeffsArgs) -> Result<(CoeffExpr, &'static str)> {
    match a.family {
        FamilyArg::Bessel => {
            if a.plus {
                return Err(Error::Usage("--plus applies to the legendre family only".into()));
            }
            let e = if a.bar { omega_bar(a.k)? } else { omega(a.k)? };
            Ok((e.clone(), "t"))
        }
        FamilyArg::Legendre => {
            let g = parse_rational(a.g.as_deref().ok_or_else(|| Error::Usage("--g is required".into()))?)?;
            let zeta = parse_rational(a.zeta.as_deref().ok_or_else(|| Error::Usage("--zeta is required".into()))?)?;
            let ch = chain(&g, &zeta)?;
            let mut list = match (a.bar, a.plus) {
                (false, false) => ch.psi_upto(a.k)?,
                (true, false) => ch.psi_bar_upto(a.k)?,
                (false, true) => ch.psi_plus_upto(a.k)?,
                (true, true) => ch.psi_bar_plus_upto(a.k)?,
            };
            Ok((list.swap_remove(a.k), "v"))
        }
    }
}

fn cmd_coeffs(a: &CoeffsArgs, out: &mut dyn Write) -> Result<i32> {
    let (e, var) = coefficient(a)?;
    if !e.is_log_free() {
        return Err(Error::Integrity(format!("log term survives in coefficient {}", a.k)));
    }
    match a.format {
        FormatArg::Json => writeln!(out, "{}", serde_json::to_string_pretty(&e.to_json()).expect("plain data")),
        FormatArg::Text => writeln!(out, "{}", e.render(var)),
    }
    .map_err(io)?;
    Ok(0)
}

fn cmd_errtable(a: &ErrTableArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let spec = ErrTableSpec {
        theta: a.theta,
        xi: a.xi,
        n: a.n,
        lambda_min: a.lambda_min,
        lambda_max: a.lambda_max,
        steps: a.steps,
        orders: a.orders.clone(),
        form: a.form.parse::<ExpansionForm>()?,
    };
    let cfg = OracleConfig::from_env()?;
    let rows = build_table(&spec, &cfg)?;
    match &a.out {
        Some(path) => {
            let f = File::create(path).map_err(io)?;
            let mut w = BufWriter::new(f);
            write_csv(&rows, &mut w).map_err(io)?;
            w.flush().map_err(io)?;
        }
        None => write_csv(&rows, &mut *out).map_err(io)?,
    }
    let flagged = rows.iter().filter(|r| r.is_flagged()).count();
    if flagged > 0 {
        writeln!(err, "error: {flagged} rows flagged NaN (oracle failure)").map_err(io)?;
        return Ok(1);
    }
    Ok(0)
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> Result<i32> {
    let suite: Suite = a.suite.parse()?;
    let cfg = OracleConfig::from_env()?;
    let results = run_suite(suite, &cfg);
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&results).expect("plain data")).map_err(io)?;
    } else {
        for r in &results {
            writeln!(out, "{}", r.line()).map_err(io)?;
        }
    }
    Ok(if results.iter().all(|r| r.pass) { 0 } else { 1 })
}
