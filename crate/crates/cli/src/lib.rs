//! `transport` command-line front end.
//!
//! Exit codes: 0 success, 1 Monge condition violated, 2 input error
//! (unreadable file, parse error, imbalance, bad parameters), 3 the chosen
//! method's preconditions are not met (e.g. fractional marginals for the
//! Hungarian method, instance too large for the oracle).

#![allow(clippy::result_large_err)]

pub mod format;
pub mod generate;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use transport_core::hungarian::{self, PinnedCover, SolveOptions};
use transport_core::nwcorner::{self, MongeMode, Shape};
use transport_core::{oracle, Error, Rational, TransportInstance};

use crate::generate::Marginals;
use crate::report::SolveOutcome;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "transport",
    version,
    about = "Exact transportation problem solver"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance file and print the plan and its cost.
    Solve(SolveArgs),
    /// Check whether the cost matrix satisfies the Monge condition.
    CheckMonge {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
    },
    /// Print a structured instance in canonical file form.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Hungarian)]
    pub method: Method,
    /// Print every reduced matrix, cover and delta (hungarian only).
    #[arg(long)]
    pub trace: bool,
    /// Emit a JSON document instead of text.
    #[arg(long)]
    pub json: bool,
    /// Print dual potentials and check them against the plan.
    #[arg(long)]
    pub certificate: bool,
    /// Use this cover on the next pass instead of the canonical minimum cut,
    /// written `ROWS:COLS` with 1-based comma lists, e.g. `1:1,2,4`.
    /// Repeat for later passes.
    #[arg(long = "pin-cover", value_name = "ROWS:COLS", value_parser = parse_pin)]
    pub pin_cover: Vec<PinnedCover>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// North West corner rule.
    Nw,
    /// Weighted Hungarian method.
    Hungarian,
    /// Exhaustive enumeration (tiny instances only).
    Oracle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Nw => "nw",
            Method::Hungarian => "hungarian",
            Method::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Adjacent,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Square,
    Abs,
    Pos,
}

impl From<ShapeArg> for Shape {
    fn from(s: ShapeArg) -> Shape {
        match s {
            ShapeArg::Square => Shape::Square,
            ShapeArg::Abs => Shape::Abs,
            ShapeArg::Pos => Shape::PositivePart,
        }
    }
}

/// Comma-separated rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct List(pub Vec<Rational>);

fn parse_list(s: &str) -> Result<List, String> {
    generate::parse_list(s).map(List)
}

fn parse_indices(s: &str) -> Result<Vec<usize>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k - 1),
            _ => Err(format!("bad 1-based index `{t}`")),
        })
        .collect()
}

fn parse_pin(s: &str) -> Result<PinnedCover, String> {
    let (rows, cols) = s
        .split_once(':')
        .ok_or_else(|| format!("cover `{s}` must look like ROWS:COLS"))?;
    Ok(PinnedCover {
        rows: parse_indices(rows)?,
        cols: parse_indices(cols)?,
    })
}

#[derive(Debug, Args)]
pub struct MarginalArgs {
    /// Supplies; defaults to all ones.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub supply: Option<List>,
    /// Demands; defaults to all ones.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub demand: Option<List>,
}

impl From<MarginalArgs> for Marginals {
    fn from(m: MarginalArgs) -> Marginals {
        Marginals {
            supply: m.supply.map(|l| l.0),
            demand: m.demand.map(|l| l.0),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    /// c_ij = x_i * y_j
    Factored {
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        x: List,
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        y: List,
        #[command(flatten)]
        marginals: MarginalArgs,
    },
    /// c_ij = x_i + y_j
    Sum {
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        x: List,
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        y: List,
        #[command(flatten)]
        marginals: MarginalArgs,
    },
    /// c_ij = f(x_i - y_j) with sorted x, y and convex f
    Convexdiff {
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        x: List,
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        y: List,
        #[arg(long, value_enum)]
        f: ShapeArg,
        #[command(flatten)]
        marginals: MarginalArgs,
    },
    /// Coupling of two discrete distributions minimising E f(X - Y)
    Problemp {
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        x: List,
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        y: List,
        #[arg(long, value_enum)]
        f: ShapeArg,
        #[arg(long = "p-row", value_parser = parse_list, allow_hyphen_values = true)]
        p_row: List,
        #[arg(long = "p-col", value_parser = parse_list, allow_hyphen_values = true)]
        p_col: List,
    },
    /// c_ij = |i - j|
    Survey {
        rows: usize,
        cols: usize,
        #[command(flatten)]
        marginals: MarginalArgs,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Output {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output::ok(text)
            };
        }
    };
    match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::CheckMonge { file, mode } => cmd_check_monge(&file, mode),
        Command::Generate { kind } => cmd_generate(kind),
    }
}

fn load(path: &PathBuf) -> Result<TransportInstance, Output> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Output::fail(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))?;
    format::parse_instance(&text)
        .map_err(|e| Output::fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn precondition(e: Error) -> Output {
    Output::fail(EXIT_PRECONDITION, e)
}

/// Runs the chosen method and collects everything the renderers need.
pub fn solve(instance: TransportInstance, args: &SolveArgs) -> Result<SolveOutcome, Error> {
    let want_trace = args.trace && args.method == Method::Hungarian;
    let (plan, certificate, trace) = match args.method {
        Method::Nw => {
            let (plan, hints) = nwcorner::north_west_corner_basis(&instance);
            let cert = if args.certificate {
                Some(instance.compute_duals_from_plan(&plan, &hints)?)
            } else {
                None
            };
            (plan, cert, None)
        }
        Method::Hungarian => {
            let options = SolveOptions {
                pinned_covers: args.pin_cover.clone(),
            };
            let sol = hungarian::solve_weighted_hungarian_with(&instance, &options)?;
            (
                sol.plan,
                Some(sol.certificate),
                want_trace.then_some(sol.trace),
            )
        }
        Method::Oracle => {
            let result = oracle::enumerate_optimum(&instance)?;
            // any optimal dual certifies every optimal plan
            let cert = if args.certificate {
                Some(hungarian::solve_weighted_hungarian(&instance)?.certificate)
            } else {
                None
            };
            (result.plan, cert, None)
        }
    };
    let certificate = match certificate {
        Some(cert) if args.certificate => {
            let report = instance.verify_optimal(&plan, &cert)?;
            Some((cert, report))
        }
        _ => None,
    };
    let cost = instance.plan_cost(&plan)?;
    Ok(SolveOutcome {
        method: args.method,
        instance,
        plan,
        cost,
        certificate,
        trace,
    })
}

fn cmd_solve(args: &SolveArgs) -> Output {
    let instance = match load(&args.file) {
        Ok(i) => i,
        Err(out) => return out,
    };
    let outcome = match solve(instance, args) {
        Ok(o) => o,
        Err(e) => return precondition(e),
    };
    let mut out = Output::ok(if args.json {
        report::render_json(&outcome)
    } else {
        report::render_text(&outcome)
    });
    if args.trace && args.method != Method::Hungarian {
        out.stderr = format!(
            "note: --trace has no effect with --method {}\n",
            args.method.name()
        );
    }
    out
}

fn cmd_check_monge(file: &PathBuf, mode: ModeArg) -> Output {
    let instance = match load(file) {
        Ok(i) => i,
        Err(out) => return out,
    };
    let mode = match mode {
        ModeArg::Adjacent => MongeMode::Adjacent,
        ModeArg::Exhaustive => MongeMode::Exhaustive,
    };
    let report = nwcorner::check_monge(instance.cost(), mode);
    match report.witness {
        None => Output::ok("HOLDS\n".to_string()),
        Some(w) => Output {
            code: EXIT_VIOLATED,
            stdout: format!("VIOLATED at {w}\n"),
            stderr: String::new(),
        },
    }
}

fn cmd_generate(kind: GenerateKind) -> Output {
    let mut warnings = Vec::new();
    let built = match kind {
        GenerateKind::Factored { x, y, marginals } => {
            generate::factored(&x.0, &y.0, marginals.into()).map(|(inst, w)| {
                warnings = w.iter().map(ToString::to_string).collect();
                inst
            })
        }
        GenerateKind::Sum { x, y, marginals } => generate::sum(&x.0, &y.0, marginals.into()),
        GenerateKind::Convexdiff { x, y, f, marginals } => {
            generate::convex_diff(&x.0, &y.0, f.into(), marginals.into())
        }
        GenerateKind::Problemp {
            x,
            y,
            f,
            p_row,
            p_col,
        } => generate::problem_p(x.0, y.0, f.into(), p_row.0, p_col.0),
        GenerateKind::Survey {
            rows,
            cols,
            marginals,
        } => {
            if rows == 0 || cols == 0 {
                return Output::fail(EXIT_INPUT, "survey dimensions must be positive");
            }
            generate::survey(rows, cols, marginals.into())
        }
    };
    match built {
        Ok(inst) => Output {
            code: EXIT_OK,
            stdout: format::serialize_instance(&inst),
            stderr: warnings.iter().map(|w| format!("warning: {w}\n")).collect(),
        },
        Err(e) => Output::fail(EXIT_INPUT, format!("invalid parameters: {e}")),
    }
}
