use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::plan::{PlanError, SimplifiedPlan};
use super::problem::TransportProblem;

/// Relative slack for the ε-CS inequality: `1e-12 * max(1, |c|max)`.
pub const EPS_CS_SLACK: f64 = 1e-12;
/// Relative slack under which a negative duality gap is clamped to zero.
pub const GAP_CLAMP: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PriceError {
    #[error("price {value} at source {lot} is negative or non-finite")]
    Invalid { lot: usize, value: f64 },
}

/// One nonnegative price per source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PriceVector(Vec<f64>);

impl PriceVector {
    pub fn new(prices: Vec<f64>) -> Result<Self, PriceError> {
        for (j, &p) in prices.iter().enumerate() {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(PriceError::Invalid { lot: j, value: p });
            }
        }
        Ok(Self(prices))
    }

    pub fn zeros(num_sources: usize) -> Self {
        Self(vec![0.0; num_sources])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, source: usize) -> f64 {
        self.0[source]
    }
}

impl TryFrom<Vec<f64>> for PriceVector {
    type Error = PriceError;

    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<PriceVector> for Vec<f64> {
    fn from(p: PriceVector) -> Self {
        p.0
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GapError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("duality gap {gap} is negative beyond rounding; primal {primal}, dual {dual}")]
    Negative { gap: f64, primal: f64, dual: f64 },
}

/// A plan arc that misses the ε-CS inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsViolation {
    pub sink: usize,
    pub source: usize,
    pub flow: f64,
    /// `max_k (c_ik - p_k) - (c_ij - p_j)`; exceeds ε for a violation.
    pub shortfall: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsCheck {
    pub violations: Vec<CsViolation>,
}

impl CsCheck {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

impl TransportProblem {
    /// Best expense `x_i = max_{j in A(i)} (c_ij - p_j)` for one sink.
    pub fn sink_expense(&self, prices: &[f64], sink: usize) -> f64 {
        self.adjacent(sink)
            .iter()
            .map(|&(j, c)| c - prices[j])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Dual profit `sum_i d_i x_i + sum_j s_j p_j`, an upper bound on the
    /// optimal primal cost for any price vector.
    pub fn dual_profit(&self, prices: &[f64]) -> f64 {
        let sinks: f64 = (0..self.num_sinks())
            .map(|i| self.demand(i) * self.sink_expense(prices, i))
            .sum();
        let sources: f64 = self.supplies().iter().zip(prices).map(|(s, p)| s * p).sum();
        sinks + sources
    }

    /// Checks `x_i - ε <= c_ij - p_j` for every flow in the plan.
    pub fn check_epsilon_cs(&self, plan: &SimplifiedPlan, prices: &[f64], epsilon: f64) -> CsCheck {
        let slack = EPS_CS_SLACK * self.max_abs_cost().max(1.0);
        let mut violations = Vec::new();
        for s in plan.iter() {
            let Some(c) = self.cost(s.sink, s.source) else {
                continue;
            };
            let shortfall = self.sink_expense(prices, s.sink) - (c - prices[s.source]);
            if shortfall > epsilon + slack {
                violations.push(CsViolation {
                    sink: s.sink,
                    source: s.source,
                    flow: s.quantity,
                    shortfall,
                });
            }
        }
        CsCheck { violations }
    }

    /// `dual_profit - primal_cost` for a complete plan: the optimum lies in
    /// `[primal, primal + gap]`.
    pub fn duality_gap(&self, plan: &SimplifiedPlan, prices: &[f64]) -> Result<f64, GapError> {
        self.require_complete(plan)?;
        let primal = self.primal_cost(plan)?;
        let dual = self.dual_profit(prices);
        let gap = dual - primal;
        if gap >= 0.0 {
            return Ok(gap);
        }
        if -gap <= GAP_CLAMP * primal.abs().max(1.0) {
            Ok(0.0)
        } else {
            Err(GapError::Negative { gap, primal, dual })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::plan::Shipment;
    use crate::transport::problem::Arc;

    fn two_by_two() -> TransportProblem {
        TransportProblem::new(
            vec![1.0, 1.0],
            vec![1.0, 1.0],
            vec![
                Arc::new(0, 0, -1.0),
                Arc::new(0, 1, -2.0),
                Arc::new(1, 0, -2.0),
                Arc::new(1, 1, -1.0),
            ],
        )
        .unwrap()
    }

    fn plan(items: &[(usize, usize, f64)]) -> SimplifiedPlan {
        items
            .iter()
            .map(|&(i, j, q)| Shipment::new(i, j, q))
            .collect()
    }

    #[test]
    fn price_vector_rejects_negative() {
        assert!(PriceVector::new(vec![0.0, 1.5]).is_ok());
        assert_eq!(
            PriceVector::new(vec![0.0, -1.0]),
            Err(PriceError::Invalid {
                lot: 1,
                value: -1.0
            })
        );
        assert!(PriceVector::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn sink_expense_examples() {
        let single =
            TransportProblem::new(vec![1.0], vec![1.0], vec![Arc::new(0, 0, -2.0)]).unwrap();
        assert_eq!(single.sink_expense(&[0.0], 0), -2.0);

        let p = TransportProblem::new(
            vec![2.0],
            vec![1.0, 1.0],
            vec![Arc::new(0, 0, -1.0), Arc::new(0, 1, -2.0)],
        )
        .unwrap();
        assert_eq!(p.sink_expense(&[0.0, 0.0], 0), -1.0);
        // -1 - 5 = -6 against -2 - 0 = -2.
        assert_eq!(p.sink_expense(&[5.0, 0.0], 0), -2.0);
    }

    #[test]
    fn dual_profit_examples() {
        let single =
            TransportProblem::new(vec![1.0], vec![1.0], vec![Arc::new(0, 0, -3.0)]).unwrap();
        assert_eq!(single.dual_profit(&[0.0]), -3.0);

        let p = two_by_two();
        assert_eq!(p.dual_profit(&[0.0, 0.0]), -2.0);
        // x_1 = max(-2, -2) = -2, x_2 = max(-3, -1) = -1, plus 1*1.
        assert_eq!(p.dual_profit(&[1.0, 0.0]), -2.0);
    }

    #[test]
    fn epsilon_cs_examples() {
        let p = two_by_two();
        assert!(p
            .check_epsilon_cs(&SimplifiedPlan::new(), &[0.0, 0.0], 0.5)
            .holds());
        assert!(p
            .check_epsilon_cs(&plan(&[(0, 0, 1.0), (1, 1, 1.0)]), &[0.0, 0.0], 0.5)
            .holds());
        let anti = p.check_epsilon_cs(&plan(&[(0, 1, 1.0), (1, 0, 1.0)]), &[0.0, 0.0], 0.5);
        assert_eq!(anti.violations.len(), 2);
        assert_eq!(anti.violations[0].shortfall, 1.0);
    }

    #[test]
    fn duality_gap_examples() {
        let single =
            TransportProblem::new(vec![1.0], vec![1.0], vec![Arc::new(0, 0, -3.0)]).unwrap();
        assert_eq!(
            single.duality_gap(&plan(&[(0, 0, 1.0)]), &[0.0]).unwrap(),
            0.0
        );

        let p = two_by_two();
        assert_eq!(
            p.duality_gap(&plan(&[(0, 0, 1.0), (1, 1, 1.0)]), &[0.0, 0.0])
                .unwrap(),
            0.0
        );
        assert_eq!(
            p.duality_gap(&plan(&[(0, 1, 1.0), (1, 0, 1.0)]), &[0.0, 0.0])
                .unwrap(),
            2.0
        );
    }

    #[test]
    fn duality_gap_requires_complete_plan() {
        let p = two_by_two();
        let err = p
            .duality_gap(&plan(&[(0, 0, 1.0)]), &[0.0, 0.0])
            .unwrap_err();
        assert!(matches!(
            err,
            GapError::Plan(PlanError::Incomplete { sink: 1, .. })
        ));
    }

    #[test]
    fn clearly_negative_gap_is_an_error() {
        let p = TransportProblem::new(
            vec![1.0, 1.0],
            vec![1.0, 1.0],
            vec![
                Arc::new(0, 0, -1.0),
                Arc::new(0, 1, -2.0),
                Arc::new(1, 0, -0.5),
                Arc::new(1, 1, -5.0),
            ],
        )
        .unwrap();
        // Overdraws source 0, so weak duality no longer applies:
        // primal -1.5, dual (-2) + (-1.5) + 1 = -2.5.
        let cheat = plan(&[(0, 0, 1.0), (1, 0, 1.0)]);
        let err = p.duality_gap(&cheat, &[1.0, 0.0]).unwrap_err();
        assert!(matches!(err, GapError::Negative { .. }));
    }
}
