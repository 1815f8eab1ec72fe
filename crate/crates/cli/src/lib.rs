//! Command-line front end: `solve`, `verify`, `generate`, `compare`, `bench`.
//!
//! Exit codes: 0 success, 1 failed verdict or disagreement, 2 input or
//! parse error, 3 infeasible, 4 algorithm constraint violated, 5 cap exceeded.

pub mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use auction_ot::bench::{compare, records_to_csv, run_suite_with, BenchError, Suite};
use auction_ot::generate::{Family, GenSpec, WeightMode, WeightStyle};
use auction_ot::io::{parse_problem, write_problem, ParseOptions};
use auction_ot::oracle::{verify_report_with, OracleBudget};
use auction_ot::solve::{solve, Algorithm, SolveError, SolveOptions};
use auction_ot::transport::TransportProblem;
use auction_ot::BidderStrategy;

pub use report::{FlowJson, ReportJson, VerdictJson, SCHEMA};

#[derive(Debug, Parser)]
#[command(
    name = "auction-ot",
    version,
    about = "Auction solvers for discrete optimal transport"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem file and print a JSON report.
    Solve(SolveArgs),
    /// Check a stored report against its problem.
    Verify(VerifyArgs),
    /// Write a generated problem file.
    Generate(GenerateArgs),
    /// Run several algorithms on the same generated instances.
    Compare(CompareArgs),
    /// Run a scaling suite.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolverFlags {
    #[arg(long, short, default_value_t = 0.01)]
    pub epsilon: f64,
    /// First step size of a scaled run.
    #[arg(long)]
    pub epsilon_initial: Option<f64>,
    #[arg(long, default_value_t = 4.0)]
    pub theta: f64,
    /// Run the classic auctions through the same step-size schedule.
    #[arg(long)]
    pub scale_classic: bool,
    /// Turn off the hungry-cannibal rule.
    #[arg(long)]
    pub no_hc: bool,
    /// Let only one unsatisfied sink bid per iteration.
    #[arg(long)]
    pub single: bool,
    #[arg(long, default_value_t = 1_000_000_000)]
    pub max_bids: u64,
    /// Byte limit for the transport-to-assignment expansion.
    #[arg(long)]
    pub expansion_cap: Option<u64>,
}

impl SolverFlags {
    pub fn options(&self) -> SolveOptions {
        let mut o = SolveOptions::new(self.epsilon);
        o.epsilon_initial = self.epsilon_initial;
        o.theta = self.theta;
        o.scale_classic = self.scale_classic;
        o.hc_rule = !self.no_hc;
        o.strategy = if self.single {
            BidderStrategy::Single
        } else {
            BidderStrategy::AllUnsatisfied
        };
        o.max_bids = self.max_bids;
        if let Some(cap) = self.expansion_cap {
            o.expansion_cap = cap;
        }
        o.oracle_budget = OracleBudget::from_env();
        o
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub problem: PathBuf,
    #[arg(long, short, default_value = "ga", value_parser = parse_algorithm)]
    pub algorithm: Algorithm,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Costs in the file are positive minimization costs.
    #[arg(long)]
    pub negate: bool,
    /// Include the transport plan in the report.
    #[arg(long)]
    pub plan: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub problem: PathBuf,
    pub report: PathBuf,
    /// Step size to check against; the report's own when absent.
    #[arg(long, short)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub negate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Assignment,
    Asymmetric,
    WeightScaled,
    RealValued,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct GenFlags {
    /// Full spec in `key=value` form, as written in file headers.
    #[arg(long, conflicts_with = "family")]
    pub spec: Option<String>,
    #[arg(long, value_enum, default_value = "random")]
    pub family: FamilyName,
    #[arg(long, short)]
    pub n: Option<usize>,
    #[arg(long, short)]
    pub m: Option<usize>,
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long)]
    pub cost_range: Option<u32>,
    /// `unit` or `range` for asymmetric; `real:<max>` or `integer:<max>` for random.
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub arcs: Option<usize>,
    #[arg(long)]
    pub total_weight: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

impl GenFlags {
    pub fn spec(&self) -> Result<GenSpec, CliError> {
        if let Some(text) = &self.spec {
            return text
                .parse()
                .map_err(|e| CliError::Input(format!("bad spec: {e}")));
        }
        let bad = |msg: String| CliError::Input(msg);
        let family = match self.family {
            FamilyName::Assignment => Family::Assignment {
                n: self.n.unwrap_or(100),
                density: self.density.unwrap_or(0.125),
                cost_range: self.cost_range.unwrap_or(100),
            },
            FamilyName::Asymmetric => {
                let m = self.m.unwrap_or(40);
                Family::Asymmetric {
                    m,
                    n: self.n.unwrap_or(10 * m),
                    weights: match self.weights.as_deref() {
                        None | Some("unit") => WeightMode::Unit,
                        Some("range") => WeightMode::Range1To19,
                        Some(w) => {
                            return Err(bad(format!(
                                "asymmetric weights must be unit or range, got {w}"
                            )))
                        }
                    },
                    density: self.density.unwrap_or(0.14),
                    cost_range: self.cost_range.unwrap_or(100),
                }
            }
            FamilyName::WeightScaled => {
                let n = self.n.unwrap_or(100);
                let m = self.m.unwrap_or(n);
                Family::WeightScaled {
                    m,
                    n,
                    arcs: self.arcs.unwrap_or(m * n * 9 / 10),
                    total_weight: self.total_weight.unwrap_or(m.max(n) as u64 * 5),
                    cost_range: self.cost_range.unwrap_or(100),
                }
            }
            FamilyName::RealValued => Family::RealValued {
                n: self.n.unwrap_or(50),
            },
            FamilyName::Random => {
                let weights = match self.weights.as_deref().unwrap_or("real:5").split_once(':') {
                    Some(("real", max)) => WeightStyle::Real {
                        max: max
                            .parse()
                            .map_err(|_| bad(format!("bad weight bound {max}")))?,
                    },
                    Some(("integer", max)) => WeightStyle::Integer {
                        max: max
                            .parse()
                            .map_err(|_| bad(format!("bad weight bound {max}")))?,
                    },
                    _ => {
                        return Err(bad(
                            "random weights must be real:<max> or integer:<max>".into()
                        ))
                    }
                };
                let n = self.n.unwrap_or(10);
                Family::RandomFeasible {
                    m: self.m.unwrap_or(n),
                    n,
                    density: self.density.unwrap_or(0.5),
                    weights,
                    cost_range: self.cost_range.unwrap_or(100),
                }
            }
        };
        Ok(GenSpec::new(family, self.seed))
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub gen: GenFlags,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub gen: GenFlags,
    /// Comma-separated algorithm names.
    #[arg(long, short, value_delimiter = ',', default_value = "ga,exact", value_parser = parse_algorithm)]
    pub algorithms: Vec<Algorithm>,
    /// Instances, with seeds counting up from `--seed`.
    #[arg(long, default_value_t = 1)]
    pub instances: u64,
    #[arg(long, default_value_t = 1)]
    pub repetitions: u32,
    #[command(flatten)]
    pub solver: SolverFlags,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// assignment-scale, asymmetric, weight-scale, fixed-ratio or real-valued.
    pub suite: String,
    /// Values of the scaling variable.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long, short, value_delimiter = ',', value_parser = parse_algorithm)]
    pub algorithms: Option<Vec<Algorithm>>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Distinct instances per size.
    #[arg(long)]
    pub instances: Option<u64>,
    #[arg(long, short)]
    pub epsilon: Option<f64>,
    /// Run the classic auctions at the final step size only.
    #[arg(long)]
    pub no_scale_classic: bool,
    /// Minimum accumulated seconds per timing point.
    #[arg(long)]
    pub min_time: Option<f64>,
    #[arg(long)]
    pub max_runs: Option<u32>,
    /// Check every run against the exact optimum.
    #[arg(long)]
    pub verify: bool,
    /// Sinks in the asymmetric suite.
    #[arg(long)]
    pub sinks: Option<usize>,
    /// Sinks and sources in the weight-scale suite.
    #[arg(long)]
    pub sides: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Bench(#[from] BenchError),
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    schema: u32,
    error: &'a str,
    message: String,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Solve(e) | CliError::Bench(BenchError::Solve { source: e, .. }) => {
                solve_code(e)
            }
            CliError::Bench(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            3 => "infeasible",
            4 => "constraint",
            5 => "cap_exceeded",
            2 => "input",
            _ => "failure",
        }
    }

    pub fn to_json(&self) -> String {
        let e = ErrorJson {
            schema: SCHEMA,
            error: self.kind(),
            message: self.to_string(),
        };
        serde_json::to_string(&e).expect("error JSON serializes")
    }
}

fn solve_code(e: &SolveError) -> u8 {
    if e.is_infeasible() {
        3
    } else if e.is_constraint() {
        4
    } else if e.is_cap() {
        5
    } else {
        1
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_problem(path: &Path, negate: bool) -> Result<TransportProblem, CliError> {
    let text = read(path)?;
    parse_problem(
        &text,
        ParseOptions {
            negate_costs: negate,
        },
    )
    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io {
                    path: "<stdout>".into(),
                    message: e.to_string(),
                })
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report JSON serializes");
    s.push('\n');
    s
}

/// Runs one command and returns the process exit code on completion.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn check_epsilon(eps: f64) -> Result<(), CliError> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "epsilon must be positive, got {eps}"
        )))
    }
}

pub fn cmd_solve(a: &SolveArgs) -> Result<u8, CliError> {
    check_epsilon(a.solver.epsilon)?;
    let problem = load_problem(&a.problem, a.negate)?;
    let report = solve(&problem, a.algorithm, &a.solver.options())?;
    let json = ReportJson::new(&problem, a.algorithm.name(), &report, a.plan);
    emit(a.output.as_deref(), &to_json(&json))?;
    Ok(0)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<u8, CliError> {
    let problem = load_problem(&a.problem, a.negate)?;
    let stored: ReportJson = serde_json::from_str(&read(&a.report)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", a.report.display())))?;
    let report = stored.to_solve_report().map_err(CliError::Input)?;
    let epsilon = a.epsilon.unwrap_or(stored.epsilon);
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(CliError::Input(format!(
            "epsilon must be nonnegative, got {epsilon}"
        )));
    }
    let verdict = verify_report_with(&problem, &report, epsilon, OracleBudget::from_env());
    if let Some(note) = &verdict.oracle_skipped {
        eprintln!("oracle skipped: {note}");
    }
    emit(None, &to_json(&VerdictJson::new(&verdict, epsilon)))?;
    Ok(if verdict.passed() { 0 } else { 1 })
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<u8, CliError> {
    let spec = a.gen.spec()?;
    let problem = spec
        .generate()
        .map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
    emit(
        a.output.as_deref(),
        &write_problem(&problem, &[spec.to_string()]),
    )?;
    Ok(0)
}

pub fn cmd_compare(a: &CompareArgs) -> Result<u8, CliError> {
    check_epsilon(a.solver.epsilon)?;
    let first = a.gen.spec()?;
    let specs: Vec<GenSpec> = (0..a.instances.max(1))
        .map(|k| GenSpec::new(first.family, first.seed.wrapping_add(k)))
        .collect();
    let result = compare(&specs, &a.algorithms, &a.solver.options(), a.repetitions)?;
    let text = match a.format {
        Format::Json => to_json(&serde_json::json!({
            "schema": SCHEMA,
            "agree": result.agree,
            "worst_excess": result.worst_excess,
            "records": result.records,
        })),
        Format::Csv => records_to_csv(&result.records),
    };
    emit(a.output.as_deref(), &text)?;
    if !result.agree {
        eprintln!(
            "costs disagree beyond L*epsilon (worst excess {})",
            result.worst_excess
        );
    }
    Ok(if result.agree { 0 } else { 1 })
}

pub fn cmd_bench(a: &BenchArgs) -> Result<u8, CliError> {
    let suite: Suite = a.suite.parse()?;
    let mut config = suite.default_config();
    if let Some(s) = &a.sizes {
        config.sizes = s.clone();
    }
    if let Some(algs) = &a.algorithms {
        config.algorithms = algs.clone();
    }
    if let Some(seed) = a.seed {
        config.seed = seed;
    }
    if let Some(k) = a.instances {
        config.instances = k;
    }
    config.scale_classic &= !a.no_scale_classic;
    if let Some(eps) = a.epsilon {
        check_epsilon(eps)?;
        config.epsilon = Some(eps);
    }
    if let Some(t) = a.min_time {
        config.min_time = Duration::try_from_secs_f64(t)
            .map_err(|e| CliError::Input(format!("bad --min-time: {e}")))?;
    }
    if let Some(r) = a.max_runs {
        config.max_runs = r;
    }
    config.verify |= a.verify;
    if let Some(m) = a.sinks {
        config.sinks = m;
    }
    if let Some(side) = a.sides {
        config.weight_sides = side;
    }
    let result = run_suite_with(suite, &config, &mut |r| {
        eprintln!("{} {} n={} {:.6}s", r.suite, r.algorithm, r.n, r.elapsed);
    })?;
    for (alg, fit) in &result.fits {
        match fit {
            Some(f) => eprintln!("fit {alg}: a={:.6e} b={:.4} r2={:.4}", f.a, f.b, f.r2),
            None => eprintln!("fit {alg}: not enough points"),
        }
    }
    let text = match a.format {
        Format::Json => to_json(&serde_json::json!({
            "schema": SCHEMA,
            "suite": result.suite,
            "records": result.records,
            "fits": result.fits,
        })),
        Format::Csv => records_to_csv(&result.records),
    };
    emit(a.output.as_deref(), &text)?;
    let all_verified = result.records.iter().all(|r| r.verified != Some(false));
    Ok(if all_verified { 0 } else { 1 })
}
