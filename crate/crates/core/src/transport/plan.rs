use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::problem::TransportProblem;

/// One `(sink, source, quantity)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shipment {
    pub sink: usize,
    pub source: usize,
    pub quantity: f64,
}

impl Shipment {
    pub fn new(sink: usize, source: usize, quantity: f64) -> Self {
        Self {
            sink,
            source,
            quantity,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("plan references ({sink},{lot}), which is not an arc of the problem")]
    UnknownArc { sink: usize, lot: usize },
    #[error("plan is incomplete: sink {sink} receives {delivered} of {demand}")]
    Incomplete {
        sink: usize,
        delivered: f64,
        demand: f64,
    },
}

/// Anything that can be read as a sequence of shipments.
pub trait Flows {
    fn shipments(&self) -> Box<dyn Iterator<Item = Shipment> + '_>;
}

/// A multiset of shipments; the same arc may appear more than once.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TransportPlan {
    pub shipments: Vec<Shipment>,
}

impl TransportPlan {
    pub fn new(shipments: Vec<Shipment>) -> Self {
        Self { shipments }
    }

    /// Merges repeated arcs by summing their quantities and drops zero entries.
    pub fn simplify(&self) -> SimplifiedPlan {
        let mut flows = BTreeMap::new();
        for s in &self.shipments {
            *flows.entry((s.sink, s.source)).or_insert(0.0) += s.quantity;
        }
        flows.retain(|_, q| *q > 0.0);
        SimplifiedPlan { flows }
    }
}

impl Flows for TransportPlan {
    fn shipments(&self) -> Box<dyn Iterator<Item = Shipment> + '_> {
        Box::new(self.shipments.iter().copied())
    }
}

/// A plan in which each arc appears at most once with strictly positive flow.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimplifiedPlan {
    flows: BTreeMap<(usize, usize), f64>,
}

impl SimplifiedPlan {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `quantity` to the flow on `(sink, source)`. Nonpositive amounts are ignored.
    pub fn add(&mut self, sink: usize, source: usize, quantity: f64) {
        if quantity > 0.0 {
            *self.flows.entry((sink, source)).or_insert(0.0) += quantity;
        }
    }

    pub fn flow(&self, sink: usize, source: usize) -> f64 {
        self.flows.get(&(sink, source)).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.flows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flows.is_empty()
    }

    /// Flows in ascending `(sink, source)` order.
    pub fn iter(&self) -> impl Iterator<Item = Shipment> + '_ {
        self.flows
            .iter()
            .map(|(&(i, j), &q)| Shipment::new(i, j, q))
    }

    pub fn flows_mut(&mut self) -> impl Iterator<Item = (&(usize, usize), &mut f64)> {
        self.flows.iter_mut()
    }

    /// Total quantity delivered to each sink.
    pub fn delivered(&self, num_sinks: usize) -> Vec<f64> {
        let mut out = vec![0.0; num_sinks];
        for s in self.iter() {
            if s.sink < num_sinks {
                out[s.sink] += s.quantity;
            }
        }
        out
    }

    /// Total quantity shipped from each source.
    pub fn shipped(&self, num_sources: usize) -> Vec<f64> {
        let mut out = vec![0.0; num_sources];
        for s in self.iter() {
            if s.source < num_sources {
                out[s.source] += s.quantity;
            }
        }
        out
    }
}

impl Flows for SimplifiedPlan {
    fn shipments(&self) -> Box<dyn Iterator<Item = Shipment> + '_> {
        Box::new(self.iter())
    }
}

impl FromIterator<Shipment> for SimplifiedPlan {
    fn from_iter<T: IntoIterator<Item = Shipment>>(iter: T) -> Self {
        let mut plan = SimplifiedPlan::new();
        for s in iter {
            plan.add(s.sink, s.source, s.quantity);
        }
        plan
    }
}

impl Serialize for SimplifiedPlan {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for SimplifiedPlan {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let shipments = Vec::<Shipment>::deserialize(deserializer)?;
        Ok(shipments.into_iter().collect())
    }
}

/// Result of checking a plan against a problem's capacity and completeness rules.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlanCheck {
    pub unknown_arcs: Vec<(usize, usize)>,
    pub negative: Vec<(usize, usize)>,
    /// Sinks receiving more than their demand.
    pub oversupplied_sinks: Vec<usize>,
    /// Sources shipping more than their supply.
    pub overdrawn_sources: Vec<usize>,
    /// Sinks receiving less than their demand.
    pub unsatisfied_sinks: Vec<usize>,
}

impl PlanCheck {
    pub fn is_valid(&self) -> bool {
        self.unknown_arcs.is_empty()
            && self.negative.is_empty()
            && self.oversupplied_sinks.is_empty()
            && self.overdrawn_sources.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.is_valid() && self.unsatisfied_sinks.is_empty()
    }
}

/// Tolerance on delivered totals: `1e-9 * max(1, L)`.
pub fn quantity_slack(problem: &TransportProblem) -> f64 {
    1e-9 * problem.demand_total().abs().max(1.0)
}

impl TransportProblem {
    /// `sum c_ij * f_ij` over the plan's aggregated flows.
    pub fn primal_cost(&self, plan: &dyn Flows) -> Result<f64, PlanError> {
        let mut total = 0.0;
        for s in plan.shipments() {
            let c = self.cost(s.sink, s.source).ok_or(PlanError::UnknownArc {
                sink: s.sink,
                lot: s.source,
            })?;
            total += c * s.quantity;
        }
        Ok(total)
    }

    pub fn check_plan(&self, plan: &SimplifiedPlan) -> PlanCheck {
        let slack = quantity_slack(self);
        let mut check = PlanCheck::default();
        for s in plan.iter() {
            if self.cost(s.sink, s.source).is_none() {
                check.unknown_arcs.push((s.sink, s.source));
            }
            if s.quantity < 0.0 {
                check.negative.push((s.sink, s.source));
            }
        }
        let delivered = plan.delivered(self.num_sinks());
        for (i, (&got, &want)) in delivered.iter().zip(self.demands()).enumerate() {
            if got > want + slack {
                check.oversupplied_sinks.push(i);
            } else if got < want - slack {
                check.unsatisfied_sinks.push(i);
            }
        }
        let shipped = plan.shipped(self.num_sources());
        for (j, (&out, &cap)) in shipped.iter().zip(self.supplies()).enumerate() {
            if out > cap + slack {
                check.overdrawn_sources.push(j);
            }
        }
        check
    }

    /// Errors with the first sink whose delivered total misses its demand.
    pub fn require_complete(&self, plan: &SimplifiedPlan) -> Result<(), PlanError> {
        let slack = quantity_slack(self);
        let delivered = plan.delivered(self.num_sinks());
        for (i, (&got, &want)) in delivered.iter().zip(self.demands()).enumerate() {
            if (got - want).abs() > slack {
                return Err(PlanError::Incomplete {
                    sink: i,
                    delivered: got,
                    demand: want,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
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

    #[test]
    fn simplify_merges_and_drops_zeros() {
        let merged =
            TransportPlan::new(vec![Shipment::new(0, 0, 0.5), Shipment::new(0, 0, 0.5)]).simplify();
        assert_eq!(
            merged.iter().collect::<Vec<_>>(),
            vec![Shipment::new(0, 0, 1.0)]
        );

        assert!(TransportPlan::new(vec![Shipment::new(0, 0, 0.0)])
            .simplify()
            .is_empty());

        let mixed = TransportPlan::new(vec![
            Shipment::new(0, 0, 0.25),
            Shipment::new(0, 1, 0.75),
            Shipment::new(0, 0, 0.75),
        ])
        .simplify();
        assert_eq!(mixed.flow(0, 0), 1.0);
        assert_eq!(mixed.flow(0, 1), 0.75);
        assert_eq!(mixed.len(), 2);
    }

    #[test]
    fn primal_cost_examples() {
        let p = TransportProblem::new(vec![1.0], vec![1.0], vec![Arc::new(0, 0, -3.0)]).unwrap();
        let plan: SimplifiedPlan = [Shipment::new(0, 0, 1.0)].into_iter().collect();
        assert_eq!(p.primal_cost(&plan).unwrap(), -3.0);
        assert_eq!(p.primal_cost(&SimplifiedPlan::new()).unwrap(), 0.0);

        let q = two_by_two();
        let diag: SimplifiedPlan = [Shipment::new(0, 0, 1.0), Shipment::new(1, 1, 1.0)]
            .into_iter()
            .collect();
        assert_eq!(q.primal_cost(&diag).unwrap(), -2.0);
    }

    #[test]
    fn primal_cost_rejects_unknown_arc() {
        let p = TransportProblem::new(vec![1.0], vec![1.0], vec![Arc::new(0, 0, -3.0)]).unwrap();
        let plan = TransportPlan::new(vec![Shipment::new(0, 1, 1.0)]);
        assert_eq!(
            p.primal_cost(&plan),
            Err(PlanError::UnknownArc { sink: 0, lot: 1 })
        );
    }

    #[test]
    fn plan_check_flags_capacity_and_completeness() {
        let p = two_by_two();
        let partial: SimplifiedPlan = [Shipment::new(0, 0, 1.0)].into_iter().collect();
        let check = p.check_plan(&partial);
        assert!(check.is_valid());
        assert_eq!(check.unsatisfied_sinks, vec![1]);
        assert!(p.require_complete(&partial).is_err());

        let over: SimplifiedPlan = [Shipment::new(0, 0, 1.0), Shipment::new(1, 0, 1.0)]
            .into_iter()
            .collect();
        let check = p.check_plan(&over);
        assert_eq!(check.overdrawn_sources, vec![0]);
        assert!(!check.is_valid());
    }
}
