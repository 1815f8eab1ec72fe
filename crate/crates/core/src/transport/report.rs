use serde::{Deserialize, Serialize};

use super::dual::PriceVector;
use super::plan::SimplifiedPlan;

/// Outcome of any solver run, in the internal (negative-cost, maximization)
/// convention.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub plan: SimplifiedPlan,
    pub primal_cost: f64,
    pub prices: PriceVector,
    pub dual_profit: f64,
    /// `dual_profit - primal_cost`, clamped at zero within rounding.
    pub gap: f64,
    pub iterations: u64,
    pub bids: u64,
    /// Wall-clock seconds spent inside the solver.
    pub elapsed: f64,
    pub epsilon_final: f64,
    /// Estimated bytes held by the solver's working structures at their peak.
    pub storage_bytes: u64,
}
