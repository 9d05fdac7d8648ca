//! Command-line front end. Results go to stdout as JSON, diagnostics to
//! stderr; the exit code is 0 only for successful commands.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::Matrix6;
use serde_json::{json, Value};

use crate::cone::{self, VVector, DEFAULT_TOL};
use crate::error::Error;
use crate::group::{self, from_row_major, triple_compose, triple_decompose, GElement};
use crate::metric::{counterexample, search_violations, write_records_csv};
use crate::semigroup::{self, gamma_factor, polar_factor};

#[derive(Debug, Parser)]
#[command(name = "vinberg", version, about = "Dual Vinberg cone: membership, decompositions and contraction probes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Membership test for a point of V (5 numbers) or a 6x6 matrix (36 numbers, row-major).
    Check {
        #[arg(long, value_enum)]
        what: CheckKind,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Input file; standard input when omitted or "-".
        input: Option<PathBuf>,
    },
    /// Factor a 6x6 matrix (36 numbers, row-major).
    Decompose {
        #[arg(long, value_enum, default_value_t = DecomposeMode::Triple)]
        mode: DecomposeMode,
        #[command(flatten)]
        opts: FactorOpts,
        input: Option<PathBuf>,
    },
    /// Polar factorization g = rho(A) exp(X); same as `decompose --mode polar`.
    Polar {
        #[command(flatten)]
        opts: FactorOpts,
        input: Option<PathBuf>,
    },
    /// Reproduce the translation that stretches a tangent vector at the identity.
    Counterexample,
    /// Random search for contraction violations.
    Search {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        /// CSV output for violated probes.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Do not inject the known counterexample as probe 0.
        #[arg(long)]
        no_probe: bool,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct FactorOpts {
    /// Membership tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Convergence tolerance of the polar iteration.
    #[arg(long, default_value_t = 1e-12)]
    pub iter_tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Cone,
    ClosedCone,
    Symplectic,
    #[value(name = "G", alias = "g")]
    G,
    Upsilon,
    Gamma,
    GammaSp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecomposeMode {
    Triple,
    Gamma,
    Polar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    DomainError,
    ConvergenceError,
    Inconsistency,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::DomainError => "domain_error",
            Status::ConvergenceError => "convergence_error",
            Status::Inconsistency => "inconsistency",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::DomainError => 2,
            Status::ConvergenceError => 3,
            Status::Inconsistency => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
}

impl CommandResult {
    fn ok(payload: Value) -> Self {
        CommandResult { status: Status::Ok, payload }
    }

    fn error(status: Status, message: impl Into<String>) -> Self {
        CommandResult { status, payload: json!({ "error": message.into() }) }
    }
}

impl From<Error> for CommandResult {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Convergence { .. } => Status::ConvergenceError,
            Error::Inconsistency(_) => Status::Inconsistency,
            _ => Status::DomainError,
        };
        CommandResult::error(status, e.to_string())
    }
}

fn read_input<R: Read>(path: &Option<PathBuf>, stdin: R) -> Result<String, CommandResult> {
    let io_err = |e: std::io::Error| CommandResult::error(Status::DomainError, format!("cannot read input: {e}"));
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map_err(io_err),
        _ => {
            let mut s = String::new();
            let mut stdin = stdin;
            stdin.read_to_string(&mut s).map_err(io_err)?;
            Ok(s)
        }
    }
}

fn parse_numbers(text: &str) -> Result<Vec<f64>, CommandResult> {
    serde_json::from_str::<Vec<f64>>(text)
        .map_err(|e| CommandResult::error(Status::DomainError, format!("parse error: {e}")))
}

fn parse_vector(text: &str) -> Result<VVector, CommandResult> {
    let numbers = parse_numbers(text)?;
    let arr: [f64; 5] = numbers.as_slice().try_into().map_err(|_| {
        CommandResult::error(
            Status::DomainError,
            format!("parse error: expected 5 numbers, got {}", numbers.len()),
        )
    })?;
    Ok(VVector(arr))
}

fn parse_matrix(text: &str) -> Result<Matrix6<f64>, CommandResult> {
    let numbers = parse_numbers(text)?;
    from_row_major(&numbers).map_err(|e| CommandResult::error(Status::DomainError, format!("parse error: {e}")))
}

fn parse_g(text: &str) -> Result<GElement, CommandResult> {
    GElement::new(parse_matrix(text)?).map_err(CommandResult::from)
}

fn verdict(result: bool, reason: Option<&str>) -> CommandResult {
    match (result, reason) {
        (true, _) => CommandResult::ok(json!({ "result": true })),
        (false, Some(r)) => CommandResult::ok(json!({ "result": false, "reason": r })),
        (false, None) => CommandResult::ok(json!({ "result": false })),
    }
}

pub fn cmd_check(what: CheckKind, text: &str, tol: f64) -> CommandResult {
    let run = || -> Result<CommandResult, CommandResult> {
        Ok(match what {
            CheckKind::Cone => {
                let x = parse_vector(text)?;
                let (d1, d2, d3) = cone::minors(&x);
                let reason = if d1 <= 0.0 {
                    Some("minor 1 not positive")
                } else if d2 <= 0.0 {
                    Some("minor 2 not positive")
                } else if d3 <= 0.0 {
                    Some("minor 3 not positive")
                } else {
                    None
                };
                verdict(cone::in_open_cone(&x), reason)
            }
            CheckKind::ClosedCone => {
                let x = parse_vector(text)?;
                verdict(cone::in_closed_cone(&x, tol), Some("negative eigenvalue"))
            }
            CheckKind::Symplectic => {
                let m = parse_matrix(text)?;
                verdict(group::is_symplectic(&m), Some("not symplectic"))
            }
            CheckKind::G => {
                let m = parse_matrix(text)?;
                let reason = group::g_violation(&m);
                verdict(reason.is_none(), reason)
            }
            CheckKind::Upsilon => {
                let m = parse_matrix(text)?;
                let reason = group::g_violation(&m).or_else(|| (!group::d_invertible(&m)).then_some("det D = 0"));
                verdict(reason.is_none(), reason)
            }
            CheckKind::Gamma => {
                let m = parse_matrix(text)?;
                let reason = semigroup::gamma_violation(&m, tol);
                verdict(reason.is_none(), reason)
            }
            CheckKind::GammaSp => {
                let m = parse_matrix(text)?;
                let reason = semigroup::gamma_sp_violation(&m, tol);
                verdict(reason.is_none(), reason)
            }
        })
    };
    run().unwrap_or_else(|e| e)
}

pub fn cmd_decompose(mode: DecomposeMode, text: &str, opts: &FactorOpts) -> CommandResult {
    let run = || -> Result<CommandResult, CommandResult> {
        let g = parse_g(text)?;
        let (mut payload, rebuilt) = match mode {
            DecomposeMode::Triple => {
                let f = triple_decompose(&g).map_err(|e| match e {
                    Error::Singular(_) => CommandResult::error(Status::DomainError, "not in Upsilon: det D = 0"),
                    other => other.into(),
                })?;
                (json!(f), triple_compose(&f)?)
            }
            DecomposeMode::Gamma => {
                let f = gamma_factor(&g, opts.tol)?;
                (json!(f), f.compose()?)
            }
            DecomposeMode::Polar => {
                let f = polar_factor(&g, opts.max_iter, opts.iter_tol)?;
                (json!(f), f.compose()?)
            }
        };
        payload["residual"] = json!(rebuilt.max_abs_diff(&g));
        Ok(CommandResult::ok(payload))
    };
    run().unwrap_or_else(|e| e)
}

pub fn cmd_counterexample() -> CommandResult {
    let r = counterexample();
    CommandResult::ok(json!({
        "before": r.before,
        "after": r.after,
        "ratio": r.ratio,
        "violated": r.violated,
    }))
}

pub fn cmd_search(seed: u64, samples: usize, out: Option<&PathBuf>, inject_probe: bool) -> CommandResult {
    let report = match search_violations(seed, samples, inject_probe) {
        Ok(r) => r,
        Err(e) => return e.into(),
    };
    if let Some(path) = out {
        let file = match File::create(path) {
            Ok(f) => f,
            Err(e) => return CommandResult::error(Status::DomainError, format!("cannot write {}: {e}", path.display())),
        };
        if let Err(e) = write_records_csv(&report.violations, BufWriter::new(file)) {
            return e.into();
        }
    }
    CommandResult::ok(json!(report.summary))
}

/// Runs a parsed command, writing the payload or the diagnostic, and returns
/// the process exit code.
pub fn run<R: Read, W: Write, E: Write>(cli: &Cli, stdin: R, stdout: &mut W, stderr: &mut E) -> i32 {
    let result = match &cli.command {
        Command::Check { what, tol, input } => match read_input(input, stdin) {
            Ok(text) => cmd_check(*what, &text, *tol),
            Err(e) => e,
        },
        Command::Decompose { mode, opts, input } => match read_input(input, stdin) {
            Ok(text) => cmd_decompose(*mode, &text, opts),
            Err(e) => e,
        },
        Command::Polar { opts, input } => match read_input(input, stdin) {
            Ok(text) => cmd_decompose(DecomposeMode::Polar, &text, opts),
            Err(e) => e,
        },
        Command::Counterexample => cmd_counterexample(),
        Command::Search { seed, samples, out, no_probe } => cmd_search(*seed, *samples as usize, out.as_ref(), !no_probe),
    };
    let mut body = result.payload.clone();
    body["status"] = json!(result.status.as_str());
    let line = serde_json::to_string(&body).expect("json values serialize");
    let written = if result.status == Status::Ok {
        writeln!(stdout, "{line}")
    } else {
        writeln!(stderr, "{line}")
    };
    if written.is_err() {
        return 1;
    }
    result.status.exit_code()
}
