//! One entry point over every solver, returning a uniform [`SolveReport`].

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::auction::{
    run_auction, run_scaled, AuctionConfig, AuctionError, BidderStrategy, ScalingSchedule,
};
use crate::classic::{
    collapse_assignment, expand_to_assignment, solve_classic, ClassicAlgorithm, ClassicConfig,
    ClassicError, DEFAULT_EXPANSION_CAP,
};
use crate::oracle::{solve_exact_with, OracleBudget, OracleError};
use crate::transport::{PriceVector, SolveReport, TransportProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// General auction at a fixed step size.
    Ga,
    /// General auction with ε-scaling.
    GaScaled,
    /// Assignment auction on the expanded problem.
    Assignment,
    /// Auction for similar objects on the expanded problem.
    So,
    /// Auction for similar objects and persons on the expanded problem.
    Sop,
    /// Successive shortest paths.
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Ga,
        Algorithm::GaScaled,
        Algorithm::Assignment,
        Algorithm::So,
        Algorithm::Sop,
        Algorithm::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ga => "ga",
            Algorithm::GaScaled => "ga-scaled",
            Algorithm::Assignment => "assignment",
            Algorithm::So => "so",
            Algorithm::Sop => "sop",
            Algorithm::Exact => "exact",
        }
    }

    pub fn is_classic(self) -> bool {
        matches!(self, Algorithm::Assignment | Algorithm::So | Algorithm::Sop)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Final step size.
    pub epsilon: f64,
    /// Scaling runs start here; `|c|max / 2` when absent.
    pub epsilon_initial: Option<f64>,
    pub theta: f64,
    /// Also scale the classic auctions; otherwise they run at `epsilon` only.
    pub scale_classic: bool,
    pub hc_rule: bool,
    pub strategy: BidderStrategy,
    pub max_bids: u64,
    pub expansion_cap: u64,
    pub oracle_budget: OracleBudget,
}

impl SolveOptions {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            epsilon_initial: None,
            theta: 4.0,
            scale_classic: false,
            hc_rule: true,
            strategy: BidderStrategy::AllUnsatisfied,
            max_bids: 1_000_000_000,
            expansion_cap: DEFAULT_EXPANSION_CAP,
            oracle_budget: OracleBudget::default(),
        }
    }

    fn schedule(&self, problem: &TransportProblem) -> Result<ScalingSchedule, AuctionError> {
        match self.epsilon_initial {
            Some(e) => ScalingSchedule::new(e, self.theta, self.epsilon),
            None => {
                let s = ScalingSchedule::for_problem(problem, self.epsilon);
                ScalingSchedule::new(s.epsilon_initial, self.theta, self.epsilon)
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error(transparent)]
    Auction(#[from] AuctionError),
    #[error(transparent)]
    Classic(#[from] ClassicError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl SolveError {
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            SolveError::Auction(AuctionError::Infeasible)
                | SolveError::Classic(ClassicError::Infeasible)
                | SolveError::Oracle(OracleError::Infeasible)
        )
    }

    /// The algorithm cannot take this input (e.g. real weights for a classic auction).
    pub fn is_constraint(&self) -> bool {
        matches!(
            self,
            SolveError::Classic(ClassicError::NonIntegerWeights | ClassicError::NonIntegerCosts)
        )
    }

    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            SolveError::Auction(AuctionError::BidCapExceeded { .. })
                | SolveError::Classic(
                    ClassicError::CapExceeded { .. } | ClassicError::BidCapExceeded { .. }
                )
                | SolveError::Oracle(OracleError::OverBudget(_))
        )
    }
}

pub fn solve(
    problem: &TransportProblem,
    algorithm: Algorithm,
    options: &SolveOptions,
) -> Result<SolveReport, SolveError> {
    let config = AuctionConfig::new(options.epsilon)
        .with_hc_rule(options.hc_rule)
        .with_strategy(options.strategy)
        .with_max_bids(options.max_bids);
    match algorithm {
        Algorithm::Ga => Ok(run_auction(problem, &config)?),
        Algorithm::GaScaled => Ok(run_scaled(problem, &config, &options.schedule(problem)?)?),
        Algorithm::Exact => solve_exact_report(problem, options.oracle_budget),
        Algorithm::Assignment => classic_report(problem, ClassicAlgorithm::Assignment, options),
        Algorithm::So => classic_report(problem, ClassicAlgorithm::SimilarObjects, options),
        Algorithm::Sop => classic_report(problem, ClassicAlgorithm::SimilarPersons, options),
    }
}

fn finish(
    problem: &TransportProblem,
    plan: crate::transport::SimplifiedPlan,
    prices: Vec<f64>,
    counters: (u64, u64),
    epsilon_final: f64,
    storage_bytes: u64,
    started: Instant,
) -> Result<SolveReport, SolveError> {
    let primal_cost = problem
        .primal_cost(&plan)
        .map_err(|e| AuctionError::Gap(e.into()))?;
    let gap = problem
        .duality_gap(&plan, &prices)
        .map_err(AuctionError::Gap)?;
    Ok(SolveReport {
        primal_cost,
        dual_profit: problem.dual_profit(&prices),
        gap,
        prices: PriceVector::new(prices).map_err(AuctionError::Price)?,
        plan,
        iterations: counters.0,
        bids: counters.1,
        elapsed: started.elapsed().as_secs_f64(),
        epsilon_final,
        storage_bytes,
    })
}

fn solve_exact_report(
    problem: &TransportProblem,
    budget: OracleBudget,
) -> Result<SolveReport, SolveError> {
    let started = Instant::now();
    let sol = solve_exact_with(problem, budget)?;
    let prices = sol.prices.expect("flow solver yields prices");
    let storage =
        problem.num_arcs() as u64 * 64 + (problem.num_sinks() + problem.num_sources()) as u64 * 48;
    finish(problem, sol.plan, prices, (0, 0), 0.0, storage, started)
}

fn classic_report(
    problem: &TransportProblem,
    algorithm: ClassicAlgorithm,
    options: &SolveOptions,
) -> Result<SolveReport, SolveError> {
    let started = Instant::now();
    let (ap, map) = expand_to_assignment(problem, options.expansion_cap)?;
    let steps = if options.scale_classic {
        options.schedule(problem)?.steps()
    } else {
        vec![options.epsilon]
    };
    let mut config = ClassicConfig::new(steps[0]);
    config.max_bids = options.max_bids;
    let (mut iterations, mut bids) = (0, 0);
    let mut last = None;
    for &eps in &steps {
        config.epsilon = eps;
        let sol = solve_classic(&ap, algorithm, &config)?;
        iterations += sol.iterations;
        bids += sol.bids;
        config.initial_prices = Some(sol.prices.clone());
        last = Some(sol);
    }
    let sol = last.expect("at least one phase");
    let plan = collapse_assignment(&sol.assignment, &map)?;
    let prices = map.lot_prices(&sol.prices);
    finish(
        problem,
        plan,
        prices,
        (iterations, bids),
        options.epsilon,
        sol.storage_bytes,
        started,
    )
}
