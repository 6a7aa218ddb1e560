//! Command-line surface.
//!
//! Exit codes: 0 success/converged, 1 usage or input error, 2 not converged
//! (or parity violated), 3 enumeration budget exceeded.

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::functions::{builtin, parse, CATALOG};
use crate::grid::GridSpec;
use crate::labeling::{InducedLabeling, Labeling, MapFn};
use crate::output::{fmt_f64, to_json};
use crate::render::trace_svg;
use crate::search::{parity_check, path_follow, ParityReport, SearchError, DEFAULT_BUDGET};
use crate::solver::{solve, Engine, SolveConfig, SolveError, SolveReport};

pub const BUDGET_ENV: &str = "STRINGCHASE_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "stringchase", version, about = "Approximate Brouwer fixed points on grid subdivisions of [0,1]^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Refine the grid until the residual meets the tolerance.
    Solve(SolveArgs),
    /// Check odd counts and the double-counting identity at every level.
    VerifyParity(GridArgs),
    /// Emit the door-to-door walk at a fixed resolution.
    Trace(TraceArgs),
    /// Dump the labeling of every grid point as CSV.
    Labels(GridArgs),
    /// List the builtin maps.
    Builtins,
}

#[derive(Args, Debug, Clone)]
struct MapArgs {
    /// Semicolon-separated component expressions in x1..xn.
    #[arg(long, group = "source")]
    map: Option<String>,
    /// Name of a catalog map.
    #[arg(long, group = "source")]
    builtin: Option<String>,
    /// Dimension (defaults to the component count of --map).
    #[arg(long)]
    n: Option<usize>,
    /// Center for const-c / avg-c, comma separated.
    #[arg(long, value_delimiter = ',')]
    c: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    source: MapArgs,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 2)]
    initial_m: u32,
    #[arg(long, default_value_t = 2)]
    growth: u32,
    #[arg(long, default_value_t = 1 << 16)]
    max_m: u32,
    #[arg(long, value_enum, default_value_t = EngineArg::Path)]
    engine: EngineArg,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Print the per-resolution history as CSV instead of JSON.
    #[arg(long)]
    csv: bool,
    #[arg(long)]
    budget: Option<u128>,
    /// Also write a run record (with timestamp) to this file.
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[command(flatten)]
    source: MapArgs,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    budget: Option<u128>,
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    source: MapArgs,
    #[arg(long)]
    m: u32,
    /// Write an SVG rendering (n = 2 only).
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum EngineArg {
    Oracle,
    Path,
}

/// What a command printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, msg: impl std::fmt::Display) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    Solve(SolveReport),
    Parity(ParityReport),
}

/// A command invocation and its result, for archiving.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub arguments: Vec<String>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub version: String,
    pub payload: Payload,
}

fn build_map(a: &MapArgs) -> Result<MapFn, String> {
    match (&a.map, &a.builtin) {
        (Some(text), None) => {
            // without --n the dimension is the number of components
            let n = a.n.unwrap_or_else(|| text.split(';').filter(|c| !c.trim().is_empty()).count());
            let spec = parse(text, n).map_err(|e| e.to_string())?;
            Ok(spec.into_map_fn(text.clone()))
        }
        (None, Some(name)) => builtin(name, a.n, a.c.as_deref()).map_err(|e| e.to_string()),
        _ => Err("one of --map or --builtin is required".into()),
    }
}

fn resolve_budget(flag: Option<u128>) -> Result<u128, String> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{BUDGET_ENV}={v} is not a nonnegative integer")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn grid(n: usize, m: u32) -> Result<GridSpec, Outcome> {
    GridSpec::new(n, m).map_err(|e| Outcome::fail(EXIT_USAGE, e))
}

fn search_failure(e: SearchError) -> Outcome {
    match e {
        SearchError::BudgetExceeded { .. } => Outcome::fail(EXIT_BUDGET, e),
        other => Outcome::fail(EXIT_USAGE, other),
    }
}

fn write_record(path: &PathBuf, command: &str, args: &[String], payload: Payload) -> Result<(), Outcome> {
    let record = RunRecord {
        command: command.to_string(),
        arguments: args.to_vec(),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        version: env!("CARGO_PKG_VERSION").to_string(),
        payload,
    };
    let text = to_json(&record).map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
    std::fs::write(path, text)
        .map_err(|e| Outcome::fail(EXIT_USAGE, format!("writing {}: {e}", path.display())))
}

fn cmd_solve(a: &SolveArgs, argv: &[String]) -> Result<Outcome, Outcome> {
    let g = build_map(&a.source).map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
    let cfg = SolveConfig {
        initial_m: a.initial_m,
        growth: a.growth,
        max_m: a.max_m,
        tol: a.tol,
        engine: match a.engine {
            EngineArg::Oracle => Engine::Oracle,
            EngineArg::Path => Engine::PathFollow,
        },
        budget: resolve_budget(a.budget).map_err(|e| Outcome::fail(EXIT_USAGE, e))?,
    };
    let report = solve(&g, &cfg).map_err(|e| match e {
        SolveError::Search(s) => search_failure(s),
        other => Outcome::fail(EXIT_USAGE, other),
    })?;
    let code = if report.converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    };
    let stdout = if a.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Outcome::fail(EXIT_USAGE, e);
        w.write_record(["m", "residual", "diameter", "evals"]).map_err(csv_err)?;
        for h in &report.history {
            w.write_record([
                h.m.to_string(),
                fmt_f64(h.residual),
                fmt_f64(h.diameter),
                h.evals.to_string(),
            ])
            .map_err(csv_err)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Outcome::fail(EXIT_USAGE, e))?)
            .expect("csv output is utf-8")
    } else {
        to_json(&report).map_err(|e| Outcome::fail(EXIT_USAGE, e))?
    };
    if let Some(path) = &a.record {
        write_record(path, "solve", argv, Payload::Solve(report))?;
    }
    Ok(Outcome::ok(code, stdout))
}

fn cmd_verify_parity(a: &GridArgs, argv: &[String]) -> Result<Outcome, Outcome> {
    let g = build_map(&a.source).map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
    let spec = grid(g.n(), a.m)?;
    let budget = resolve_budget(a.budget).map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
    let lab = InducedLabeling::new(spec, g);
    let report = parity_check(&lab, budget).map_err(search_failure)?;
    let code = if report.ok() {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    };
    let stdout = to_json(&report).map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
    if let Some(path) = &a.record {
        write_record(path, "verify-parity", argv, Payload::Parity(report))?;
    }
    Ok(Outcome::ok(code, stdout))
}

fn cmd_trace(a: &TraceArgs) -> Result<Outcome, Outcome> {
    let g = build_map(&a.source).map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
    let spec = grid(g.n(), a.m)?;
    if a.svg.is_some() && spec.n() != 2 {
        return Err(Outcome::fail(
            EXIT_USAGE,
            format!("SvgUnsupportedDimension: --svg needs n = 2, got n = {}", spec.n()),
        ));
    }
    let lab = InducedLabeling::new(spec, g);
    let (_, trace) = path_follow(&lab).map_err(search_failure)?;
    if let Some(path) = &a.svg {
        let svg = trace_svg(&spec, &trace).map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
        std::fs::write(path, svg)
            .map_err(|e| Outcome::fail(EXIT_USAGE, format!("writing {}: {e}", path.display())))?;
    }
    let stdout = to_json(&trace).map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
    Ok(Outcome::ok(EXIT_OK, stdout))
}

fn cmd_labels(a: &GridArgs) -> Result<Outcome, Outcome> {
    let g = build_map(&a.source).map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
    let spec = grid(g.n(), a.m)?;
    let budget = resolve_budget(a.budget).map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
    if spec.point_count() > budget {
        return Err(search_failure(SearchError::BudgetExceeded {
            required: spec.point_count(),
            budget,
        }));
    }
    let lab = InducedLabeling::new(spec, g);
    let n = spec.n();
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Outcome::fail(EXIT_USAGE, e);
    let header: Vec<String> = (1..=n)
        .map(|i| format!("x{i}"))
        .chain((1..=n).map(|i| format!("r{i}")))
        .chain(std::iter::once("label".to_string()))
        .collect();
    w.write_record(&header).map_err(csv_err)?;
    for p in spec.points() {
        let l = lab.label(&p).map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
        let row: Vec<String> = p
            .coords()
            .iter()
            .map(|c| c.to_string())
            .chain(spec.to_real(&p).into_iter().map(fmt_f64))
            .chain(std::iter::once(l.to_string()))
            .collect();
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
    Ok(Outcome::ok(
        EXIT_OK,
        String::from_utf8(bytes).expect("csv output is utf-8"),
    ))
}

fn cmd_builtins() -> Outcome {
    let mut out = String::new();
    for name in CATALOG {
        let g = builtin(name, None, None).expect("catalog entries resolve");
        let fps: Vec<String> = g
            .fixed_points()
            .iter()
            .map(|fp| format!("({})", fp.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        out.push_str(&format!(
            "{name}\tn={}\tL={}\tfixed points: {}\n",
            g.n(),
            g.lipschitz().map_or("?".to_string(), |l| format!("{l:.6}")),
            fps.join(" ")
        ));
    }
    Outcome::ok(EXIT_OK, out)
}

/// Runs one command; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(EXIT_OK, text),
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let rest = argv.get(1..).unwrap_or(&[]);
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, rest),
        Command::VerifyParity(a) => cmd_verify_parity(a, rest),
        Command::Trace(a) => cmd_trace(a),
        Command::Labels(a) => cmd_labels(a),
        Command::Builtins => Ok(cmd_builtins()),
    };
    result.unwrap_or_else(|e| e)
}
