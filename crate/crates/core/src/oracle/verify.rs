use serde::{Deserialize, Serialize};

use super::{solve_exact_with, OracleBudget};
use crate::transport::{SolveReport, TransportProblem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub oracle_cost: f64,
    /// `oracle_cost - report cost`; lies in `[0, Lε]` for a correct report.
    pub difference: f64,
    pub within_bound: bool,
}

/// Independent checks of a [`SolveReport`]; nothing is taken from the
/// report's own gap or cost fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub plan_valid: bool,
    pub complete: bool,
    pub epsilon_cs: bool,
    /// Recomputed gap, absent when the plan is not complete.
    pub gap: Option<f64>,
    pub bound: f64,
    pub gap_within_bound: bool,
    pub oracle: Option<OracleComparison>,
    pub oracle_skipped: Option<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.plan_valid
            && self.complete
            && self.epsilon_cs
            && self.gap_within_bound
            && self.oracle.as_ref().map_or(true, |o| o.within_bound)
    }
}

pub fn verify_report(problem: &TransportProblem, report: &SolveReport, epsilon: f64) -> Verdict {
    verify_report_with(problem, report, epsilon, OracleBudget::from_env())
}

pub fn verify_report_with(
    problem: &TransportProblem,
    report: &SolveReport,
    epsilon: f64,
    budget: OracleBudget,
) -> Verdict {
    let check = problem.check_plan(&report.plan);
    let prices = report.prices.as_slice();
    let prices_fit = prices.len() == problem.num_sources();
    let epsilon_cs = prices_fit
        && problem
            .check_epsilon_cs(&report.plan, prices, epsilon)
            .holds();
    let total = problem.demand_total();
    let bound = total * epsilon;
    let cost = problem.primal_cost(&report.plan).unwrap_or(f64::NAN);
    let slack = 1e-9 * bound + 1e-9 * cost.abs().max(1.0);
    let gap = if prices_fit && check.is_complete() {
        problem.duality_gap(&report.plan, prices).ok()
    } else {
        None
    };
    let gap_within_bound = gap.is_some_and(|g| g <= bound + slack);

    let (oracle, oracle_skipped) = if !check.is_valid() {
        (None, Some("plan is not valid for the problem".to_string()))
    } else if !budget.admits(problem) {
        (
            None,
            Some(format!(
                "problem exceeds oracle budget of {} cells",
                budget.max_cells
            )),
        )
    } else {
        match solve_exact_with(problem, budget) {
            Ok(sol) => {
                let difference = sol.optimal_cost - cost;
                let within_bound =
                    check.is_complete() && difference >= -slack && difference <= bound + slack;
                (
                    Some(OracleComparison {
                        oracle_cost: sol.optimal_cost,
                        difference,
                        within_bound,
                    }),
                    None,
                )
            }
            Err(e) => (None, Some(e.to_string())),
        }
    };
    Verdict {
        plan_valid: check.is_valid(),
        complete: check.is_complete(),
        epsilon_cs,
        gap,
        bound,
        gap_within_bound,
        oracle,
        oracle_skipped,
    }
}
