//! Ground truth: feasibility, an exact flow solver, exhaustive enumeration
//! for tiny instances, and report verification.

mod enumerate;
mod maxflow;
mod ssp;
mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::transport::{ProblemError, SimplifiedPlan, TransportProblem};

pub use enumerate::{enumerate_tiny, ENUMERATION_MAX_UNIT, ENUMERATION_MAX_WEIGHT};
pub use maxflow::{feasibility_check, max_shippable};
pub use ssp::REDUCED_COST_TOLERANCE;
pub use verify::{verify_report, verify_report_with, OracleComparison, Verdict};

/// Environment variable overriding the default oracle budget (`M·N` limit).
pub const ORACLE_BUDGET_ENV: &str = "AUCTION_OT_ORACLE_BUDGET";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Problem(ProblemError),
    #[error("no complete transport plan exists")]
    Infeasible,
    #[error("over oracle budget: {0}")]
    OverBudget(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    Enumeration,
    ExactFlow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub plan: SimplifiedPlan,
    pub optimal_cost: f64,
    pub method: OracleMethod,
    /// Optimal dual prices, when the method produces them.
    pub prices: Option<Vec<f64>>,
}

/// Largest `M·N` the exact solver accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_cells: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_cells: 1_000_000,
        }
    }
}

impl OracleBudget {
    /// The default budget, or the value of [`ORACLE_BUDGET_ENV`] when set.
    pub fn from_env() -> Self {
        std::env::var(ORACLE_BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(|max_cells| Self { max_cells })
            .unwrap_or_default()
    }

    pub fn admits(&self, problem: &TransportProblem) -> bool {
        (problem.num_sinks() as u64).saturating_mul(problem.num_sources() as u64) <= self.max_cells
    }
}

/// Exact optimum within the default budget.
pub fn solve_exact(problem: &TransportProblem) -> Result<OracleSolution, OracleError> {
    solve_exact_with(problem, OracleBudget::default())
}

pub fn solve_exact_with(
    problem: &TransportProblem,
    budget: OracleBudget,
) -> Result<OracleSolution, OracleError> {
    problem.ensure_valid().map_err(OracleError::Problem)?;
    if !budget.admits(problem) {
        return Err(OracleError::OverBudget(format!(
            "{}x{} exceeds {} cells",
            problem.num_sinks(),
            problem.num_sources(),
            budget.max_cells
        )));
    }
    if !feasibility_check(problem) {
        return Err(OracleError::Infeasible);
    }
    ssp::solve_ssp(problem)
}
