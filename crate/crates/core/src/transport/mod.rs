//! The transport problem model shared by every solver: problems, plans,
//! prices, and the primal/dual quantities used to certify a solution.

mod dual;
mod plan;
mod problem;
mod report;

pub use dual::{CsCheck, CsViolation, GapError, PriceError, PriceVector, EPS_CS_SLACK, GAP_CLAMP};
pub use plan::{
    quantity_slack, Flows, PlanCheck, PlanError, Shipment, SimplifiedPlan, TransportPlan,
};
pub(crate) use problem::is_integer;
pub use problem::{
    Arc, ProblemError, TransportProblem, ValidationReport, Violation, BALANCE_TOLERANCE,
};
pub use report::SolveReport;
