//! JSON shapes written and read by the CLI. Costs are minimization values
//! (the negated internal objective); prices are the solver's lot prices.

use serde::{Deserialize, Serialize};

use auction_ot::oracle::Verdict;
use auction_ot::transport::{PriceVector, SimplifiedPlan, SolveReport, TransportProblem};

pub const SCHEMA: u32 = 1;

/// One plan entry with 1-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowJson {
    pub sink: usize,
    pub source: usize,
    pub quantity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub schema: u32,
    pub algorithm: String,
    pub epsilon: f64,
    pub cost: f64,
    /// Lower bound on the optimal cost certified by the prices.
    pub dual_bound: f64,
    pub gap: f64,
    pub total_weight: f64,
    pub iterations: u64,
    pub bids: u64,
    pub elapsed: f64,
    pub storage_bytes: u64,
    pub prices: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<Vec<FlowJson>>,
}

impl ReportJson {
    pub fn new(
        problem: &TransportProblem,
        algorithm: &str,
        report: &SolveReport,
        with_plan: bool,
    ) -> Self {
        Self {
            schema: SCHEMA,
            algorithm: algorithm.to_string(),
            epsilon: report.epsilon_final,
            cost: -report.primal_cost,
            dual_bound: -report.dual_profit,
            gap: report.gap,
            total_weight: problem.demand_total(),
            iterations: report.iterations,
            bids: report.bids,
            elapsed: report.elapsed,
            storage_bytes: report.storage_bytes,
            prices: report.prices.as_slice().to_vec(),
            plan: with_plan.then(|| {
                report
                    .plan
                    .iter()
                    .map(|s| FlowJson {
                        sink: s.sink + 1,
                        source: s.source + 1,
                        quantity: s.quantity,
                    })
                    .collect()
            }),
        }
    }

    /// Rebuilds the solver view of a stored report. Index 0 in the plan is
    /// mapped to `usize::MAX`, which no problem accepts as an arc.
    pub fn to_solve_report(&self) -> Result<SolveReport, String> {
        let flows = self
            .plan
            .as_ref()
            .ok_or("report has no plan; solve with --plan")?;
        let plan: SimplifiedPlan = flows
            .iter()
            .map(|f| {
                auction_ot::transport::Shipment::new(
                    f.sink.wrapping_sub(1),
                    f.source.wrapping_sub(1),
                    f.quantity,
                )
            })
            .collect();
        let prices = PriceVector::new(self.prices.clone()).map_err(|e| e.to_string())?;
        Ok(SolveReport {
            plan,
            primal_cost: -self.cost,
            prices,
            dual_profit: -self.dual_bound,
            gap: self.gap,
            iterations: self.iterations,
            bids: self.bids,
            elapsed: self.elapsed,
            epsilon_final: self.epsilon,
            storage_bytes: self.storage_bytes,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictJson {
    pub schema: u32,
    pub passed: bool,
    pub plan_valid: bool,
    pub complete: bool,
    pub epsilon_cs: bool,
    pub epsilon: f64,
    pub gap: Option<f64>,
    pub bound: f64,
    pub gap_within_bound: bool,
    pub oracle_cost: Option<f64>,
    pub oracle_within_bound: Option<bool>,
    pub oracle_skipped: Option<String>,
}

impl VerdictJson {
    pub fn new(verdict: &Verdict, epsilon: f64) -> Self {
        Self {
            schema: SCHEMA,
            passed: verdict.passed(),
            plan_valid: verdict.plan_valid,
            complete: verdict.complete,
            epsilon_cs: verdict.epsilon_cs,
            epsilon,
            gap: verdict.gap,
            bound: verdict.bound,
            gap_within_bound: verdict.gap_within_bound,
            oracle_cost: verdict.oracle.as_ref().map(|o| -o.oracle_cost),
            oracle_within_bound: verdict.oracle.as_ref().map(|o| o.within_bound),
            oracle_skipped: verdict.oracle_skipped.clone(),
        }
    }
}
