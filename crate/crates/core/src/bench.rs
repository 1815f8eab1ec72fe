//! Scaling experiments: timed solver runs over generated families and a
//! power-law summary `t ≈ a N^b`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::generate::{Family, GenError, GenSpec, WeightMode};
use crate::oracle::solve_exact_with;
use crate::solve::{solve, Algorithm, SolveError, SolveOptions};
use crate::transport::{SolveReport, TransportProblem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("a power fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("point ({0}, {1}) is not strictly positive")]
    Nonpositive(f64, f64),
    #[error("all points share one abscissa")]
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerFit {
    pub a: f64,
    pub b: f64,
    pub r2: f64,
}

impl PowerFit {
    pub fn predict(&self, n: f64) -> f64 {
        self.a * n.powf(self.b)
    }
}

/// Least squares on `ln t = ln a + b ln N`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerFit, FitError> {
    if points.len() < 3 {
        return Err(FitError::TooFewPoints(points.len()));
    }
    if let Some(&(n, t)) = points
        .iter()
        .find(|&&(n, t)| !(n > 0.0 && t > 0.0 && n.is_finite() && t.is_finite()))
    {
        return Err(FitError::Nonpositive(n, t));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx <= f64::EPSILON * xs.iter().map(|x| x * x).sum::<f64>() {
        return Err(FitError::Degenerate);
    }
    let b = sxy / sxx;
    let ln_a = my - b * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - ln_a - b * x).powi(2))
        .sum();
    let r2 = if syy <= f64::EPSILON * ys.iter().map(|y| y * y).sum::<f64>().max(f64::MIN_POSITIVE) {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(PowerFit {
        a: ln_a.exp(),
        b,
        r2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timing {
    pub runs: u32,
    pub total: f64,
    /// `total / runs`.
    pub average: f64,
}

/// Runs `f` until the accumulated time reaches `min_total` or `max_runs`
/// runs are done, and returns the last result with the averaged time.
pub fn time_repeated<T, E>(
    min_total: Duration,
    max_runs: u32,
    mut f: impl FnMut() -> Result<T, E>,
) -> Result<(T, Timing), E> {
    let mut total = Duration::ZERO;
    let mut runs = 0;
    loop {
        let started = Instant::now();
        let out = f()?;
        total += started.elapsed();
        runs += 1;
        if total >= min_total || runs >= max_runs.max(1) {
            let secs = total.as_secs_f64().max(1e-9);
            return Ok((
                out,
                Timing {
                    runs,
                    total: secs,
                    average: secs / runs as f64,
                },
            ));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub suite: String,
    pub spec: String,
    /// The scaling variable: N for most suites, L for weight scaling.
    pub n: f64,
    pub algorithm: String,
    /// Averaged seconds per run.
    pub elapsed: f64,
    pub runs: u32,
    pub storage_bytes: u64,
    pub iterations: u64,
    pub bids: u64,
    pub gap: f64,
    /// Minimization cost, i.e. the negated internal objective.
    pub cost: f64,
    pub total_weight: f64,
    pub epsilon: f64,
    /// `Some(true)` when the exact optimum lies within `L ε` of `cost`.
    pub verified: Option<bool>,
    pub worker: usize,
}

impl BenchRecord {
    fn new(
        suite: &str,
        spec: &GenSpec,
        n: f64,
        algorithm: Algorithm,
        problem: &TransportProblem,
        report: &SolveReport,
        timing: Timing,
        epsilon: f64,
    ) -> Self {
        Self {
            suite: suite.to_string(),
            spec: spec.to_string(),
            n,
            algorithm: algorithm.name().to_string(),
            elapsed: timing.average,
            runs: timing.runs,
            storage_bytes: report.storage_bytes,
            iterations: report.iterations,
            bids: report.bids,
            gap: report.gap,
            cost: -report.primal_cost,
            total_weight: problem.demand_total(),
            epsilon: if algorithm == Algorithm::Exact {
                0.0
            } else {
                epsilon
            },
            verified: None,
            worker: 0,
        }
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("{spec}: {source}")]
    Generate { spec: String, source: GenError },
    #[error("{algorithm} on {spec}: {source}")]
    Solve {
        spec: String,
        algorithm: Algorithm,
        source: SolveError,
    },
    #[error("no algorithms given")]
    NoAlgorithms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    AssignmentScale,
    Asymmetric,
    WeightScale,
    FixedRatio,
    RealValued,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::AssignmentScale,
        Suite::Asymmetric,
        Suite::WeightScale,
        Suite::FixedRatio,
        Suite::RealValued,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::AssignmentScale => "assignment-scale",
            Suite::Asymmetric => "asymmetric",
            Suite::WeightScale => "weight-scale",
            Suite::FixedRatio => "fixed-ratio",
            Suite::RealValued => "real-valued",
        }
    }

    /// Desk-sized defaults.
    pub fn default_config(self) -> SuiteConfig {
        use Algorithm::*;
        let (sizes, algorithms): (Vec<usize>, Vec<Algorithm>) = match self {
            Suite::AssignmentScale => (vec![100, 200, 300, 400], vec![Ga, Assignment, Sop]),
            Suite::Asymmetric => (vec![200, 400, 600, 800], vec![Ga, Sop, So, Assignment]),
            Suite::WeightScale => ((1..=10).map(|k| 100 * k).collect(), vec![Ga, Sop]),
            Suite::FixedRatio => (vec![20, 30, 40, 50, 60], vec![Ga, Sop]),
            Suite::RealValued => (vec![100, 200, 300, 400, 500], vec![Ga]),
        };
        SuiteConfig {
            sizes,
            algorithms,
            seed: 1,
            instances: 1,
            epsilon: None,
            scale_classic: true,
            min_time: Duration::from_millis(200),
            max_runs: 50,
            verify: self == Suite::RealValued,
            sinks: 40,
            weight_sides: 100,
        }
    }

    /// Instance for one size point; `n` is the scaling variable.
    pub fn spec(self, n: usize, config: &SuiteConfig, seed: u64) -> GenSpec {
        let family = match self {
            Suite::AssignmentScale => Family::Assignment {
                n,
                density: 0.125,
                cost_range: 100,
            },
            Suite::Asymmetric => Family::Asymmetric {
                m: config.sinks,
                n,
                weights: WeightMode::Unit,
                density: 0.14,
                cost_range: 100,
            },
            Suite::WeightScale => {
                let side = config.weight_sides;
                Family::WeightScaled {
                    m: side,
                    n: side,
                    arcs: side * side * 9 / 10,
                    total_weight: n as u64,
                    cost_range: 100,
                }
            }
            Suite::FixedRatio => Family::WeightScaled {
                m: n,
                n,
                arcs: n * n * 9 / 10,
                total_weight: 2 * n as u64,
                cost_range: 100,
            },
            Suite::RealValued => Family::RealValued { n },
        };
        GenSpec::new(family, seed)
    }

    /// Step size used when the config leaves it open.
    pub fn epsilon_for(self, problem: &TransportProblem) -> f64 {
        match self {
            Suite::RealValued => 0.75,
            _ => 1.0 / (problem.demand_total() + 1.0),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| BenchError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub sizes: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    /// Distinct instances per size, seeded `seed, seed + 1, ...`.
    pub instances: u64,
    pub epsilon: Option<f64>,
    pub scale_classic: bool,
    pub min_time: Duration,
    pub max_runs: u32,
    /// Check every run against the exact optimum.
    pub verify: bool,
    /// Sink count of the asymmetric suite.
    pub sinks: usize,
    /// Sinks and sources in the weight-scale suite.
    pub weight_sides: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub records: Vec<BenchRecord>,
    /// Fit of averaged time against the scaling variable, per algorithm.
    pub fits: Vec<(String, Option<PowerFit>)>,
}

fn timed_solve(
    spec: &GenSpec,
    problem: &TransportProblem,
    algorithm: Algorithm,
    options: &SolveOptions,
    min_time: Duration,
    max_runs: u32,
) -> Result<(SolveReport, Timing), BenchError> {
    time_repeated(min_time, max_runs, || solve(problem, algorithm, options)).map_err(|source| {
        BenchError::Solve {
            spec: spec.to_string(),
            algorithm,
            source,
        }
    })
}

fn within_bound(optimum: f64, cost: f64, bound: f64) -> bool {
    let slack = 1e-9 * bound.max(1.0) + 1e-9 * optimum.abs().max(1.0);
    let diff = optimum - cost;
    diff >= -slack && diff <= bound + slack
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteResult, BenchError> {
    run_suite_with(suite, config, &mut |_| {})
}

/// Like [`run_suite`], calling `progress` after each record.
pub fn run_suite_with(
    suite: Suite,
    config: &SuiteConfig,
    progress: &mut dyn FnMut(&BenchRecord),
) -> Result<SuiteResult, BenchError> {
    if config.algorithms.is_empty() {
        return Err(BenchError::NoAlgorithms);
    }
    let mut records = Vec::new();
    for &n in &config.sizes {
        for k in 0..config.instances.max(1) {
            let spec = suite.spec(n, config, config.seed.wrapping_add(k));
            let problem = spec.generate().map_err(|source| BenchError::Generate {
                spec: spec.to_string(),
                source,
            })?;
            let epsilon = config
                .epsilon
                .unwrap_or_else(|| suite.epsilon_for(&problem));
            let mut options = SolveOptions::new(epsilon);
            options.scale_classic = config.scale_classic;
            let optimum = if config.verify {
                let exact =
                    solve_exact_with(&problem, options.oracle_budget.clone()).map_err(|e| {
                        BenchError::Solve {
                            spec: spec.to_string(),
                            algorithm: Algorithm::Exact,
                            source: e.into(),
                        }
                    })?;
                Some(exact.optimal_cost)
            } else {
                None
            };
            for &algorithm in &config.algorithms {
                let (report, timing) = timed_solve(
                    &spec,
                    &problem,
                    algorithm,
                    &options,
                    config.min_time,
                    config.max_runs,
                )?;
                let mut record = BenchRecord::new(
                    suite.name(),
                    &spec,
                    n as f64,
                    algorithm,
                    &problem,
                    &report,
                    timing,
                    epsilon,
                );
                if let Some(opt) = optimum {
                    record.verified = Some(within_bound(
                        opt,
                        report.primal_cost,
                        record.total_weight * record.epsilon,
                    ));
                }
                progress(&record);
                records.push(record);
            }
        }
    }
    let fits = config
        .algorithms
        .iter()
        .map(|a| {
            let points: Vec<(f64, f64)> = config
                .sizes
                .iter()
                .filter_map(|&n| mean_over(&records, *a, n as f64, |r| r.elapsed))
                .collect();
            (a.name().to_string(), fit_power_law(&points).ok())
        })
        .collect();
    Ok(SuiteResult {
        suite: suite.name().to_string(),
        records,
        fits,
    })
}

/// Mean of `field` over the records of one algorithm at one size.
pub fn mean_over(
    records: &[BenchRecord],
    algorithm: Algorithm,
    n: f64,
    field: impl Fn(&BenchRecord) -> f64,
) -> Option<(f64, f64)> {
    let vals: Vec<f64> = records
        .iter()
        .filter(|r| r.algorithm == algorithm.name() && r.n == n)
        .map(field)
        .collect();
    (!vals.is_empty()).then(|| (n, vals.iter().sum::<f64>() / vals.len() as f64))
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub records: Vec<BenchRecord>,
    /// Largest `best - cost - L ε` over all runs; nonpositive when every
    /// algorithm lands inside its own bound of the best cost found.
    pub worst_excess: f64,
    pub agree: bool,
}

/// Runs every algorithm on the same instances and checks that all costs lie
/// within `L ε` of the best one. Timing uses `repetitions` runs per pair.
pub fn compare(
    specs: &[GenSpec],
    algorithms: &[Algorithm],
    options: &SolveOptions,
    repetitions: u32,
) -> Result<Comparison, BenchError> {
    if algorithms.is_empty() {
        return Err(BenchError::NoAlgorithms);
    }
    let reps = repetitions.max(1);
    let mut records = Vec::new();
    let mut worst_excess = f64::NEG_INFINITY;
    let mut agree = true;
    for spec in specs {
        let problem = spec.generate().map_err(|source| BenchError::Generate {
            spec: spec.to_string(),
            source,
        })?;
        let start = records.len();
        for &algorithm in algorithms {
            let (report, timing) =
                timed_solve(spec, &problem, algorithm, options, Duration::MAX, reps)?;
            let n = problem.num_sources() as f64;
            records.push(BenchRecord::new(
                "compare",
                spec,
                n,
                algorithm,
                &problem,
                &report,
                timing,
                options.epsilon,
            ));
        }
        let batch = &mut records[start..];
        let best = batch.iter().map(|r| r.cost).fold(f64::INFINITY, f64::min);
        for r in batch.iter() {
            let bound = r.total_weight * r.epsilon;
            let excess = r.cost - best - bound;
            worst_excess = worst_excess.max(excess);
            agree &= within_bound(-best, -r.cost, bound);
        }
    }
    Ok(Comparison {
        records,
        worst_excess,
        agree,
    })
}

/// CSV with a header row; `verified` is empty when not checked.
pub fn records_to_csv(records: &[BenchRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).expect("in-memory CSV write");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV is UTF-8")
}
