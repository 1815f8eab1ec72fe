use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance used when comparing total demand against total supply.
pub const BALANCE_TOLERANCE: f64 = 1e-9;

/// One arc of the bipartite transport graph. Indices are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub sink: usize,
    pub source: usize,
    pub cost: f64,
}

impl Arc {
    pub fn new(sink: usize, source: usize, cost: f64) -> Self {
        Self { sink, source, cost }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("arc ({sink}, {lot}) references a vertex outside {sinks}x{sources}")]
    IndexOutOfRange {
        sink: usize,
        lot: usize,
        sinks: usize,
        sources: usize,
    },
    #[error("invalid transport problem: {0}")]
    Invalid(ValidationReport),
    #[error("unbalanced: L_demand={demand}, L_supply={supply}")]
    Unbalanced { demand: f64, supply: f64 },
}

/// A single failed invariant. Indices are zero-based internally and shown one-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonPositiveDemand {
        sink: usize,
        value: f64,
    },
    NonPositiveSupply {
        source: usize,
        value: f64,
    },
    NonNegativeCost {
        sink: usize,
        source: usize,
        cost: f64,
    },
    NonFiniteCost {
        sink: usize,
        source: usize,
    },
    Unbalanced {
        demand: f64,
        supply: f64,
    },
    EmptyAdjacency {
        sink: usize,
    },
    DuplicateArc {
        sink: usize,
        source: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NonPositiveDemand { sink, value } => {
                write!(f, "nonpositive demand at sink {}: {}", sink + 1, value)
            }
            Violation::NonPositiveSupply { source, value } => {
                write!(f, "nonpositive supply at source {}: {}", source + 1, value)
            }
            Violation::NonNegativeCost { sink, source, cost } => {
                write!(
                    f,
                    "nonnegative cost at ({},{}): {}",
                    sink + 1,
                    source + 1,
                    cost
                )
            }
            Violation::NonFiniteCost { sink, source } => {
                write!(f, "non-finite cost at ({},{})", sink + 1, source + 1)
            }
            Violation::Unbalanced { demand, supply } => {
                write!(f, "unbalanced: L_demand={demand}, L_supply={supply}")
            }
            Violation::EmptyAdjacency { sink } => {
                write!(f, "sink {} has no adjacent source", sink + 1)
            }
            Violation::DuplicateArc { sink, source } => {
                write!(f, "duplicate arc ({},{})", sink + 1, source + 1)
            }
        }
    }
}

/// Every invariant violation found in a problem; empty means valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A discrete transport problem in the maximization convention: sinks carry
/// demands, sources carry supplies, and every arc has a strictly negative cost.
///
/// Adjacency is stored per sink, sorted by source index, so the arc order is
/// canonical regardless of how the arcs were supplied.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportProblem {
    demands: Vec<f64>,
    supplies: Vec<f64>,
    adjacency: Vec<Vec<(usize, f64)>>,
    num_arcs: usize,
}

impl TransportProblem {
    /// Builds and validates a problem. Fails if any invariant is violated.
    pub fn new(
        demands: Vec<f64>,
        supplies: Vec<f64>,
        arcs: Vec<Arc>,
    ) -> Result<Self, ProblemError> {
        let problem = Self::from_parts(demands, supplies, arcs)?;
        let report = problem.validate();
        if report.is_valid() {
            Ok(problem)
        } else {
            Err(ProblemError::Invalid(report))
        }
    }

    /// Builds a problem without checking its invariants; only index ranges are
    /// checked, since adjacency cannot be formed otherwise. Use
    /// [`TransportProblem::validate`] to inspect the result.
    pub fn from_parts(
        demands: Vec<f64>,
        supplies: Vec<f64>,
        arcs: Vec<Arc>,
    ) -> Result<Self, ProblemError> {
        let (m, n) = (demands.len(), supplies.len());
        let mut adjacency = vec![Vec::new(); m];
        let num_arcs = arcs.len();
        for arc in arcs {
            if arc.sink >= m || arc.source >= n {
                return Err(ProblemError::IndexOutOfRange {
                    sink: arc.sink,
                    lot: arc.source,
                    sinks: m,
                    sources: n,
                });
            }
            adjacency[arc.sink].push((arc.source, arc.cost));
        }
        for row in &mut adjacency {
            // Stable: duplicates keep their input order.
            row.sort_by_key(|&(j, _)| j);
        }
        Ok(Self {
            demands,
            supplies,
            adjacency,
            num_arcs,
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (i, &d) in self.demands.iter().enumerate() {
            if !(d > 0.0 && d.is_finite()) {
                violations.push(Violation::NonPositiveDemand { sink: i, value: d });
            }
        }
        for (j, &s) in self.supplies.iter().enumerate() {
            if !(s > 0.0 && s.is_finite()) {
                violations.push(Violation::NonPositiveSupply {
                    source: j,
                    value: s,
                });
            }
        }
        for (i, row) in self.adjacency.iter().enumerate() {
            if row.is_empty() {
                violations.push(Violation::EmptyAdjacency { sink: i });
            }
            for (k, &(j, c)) in row.iter().enumerate() {
                if !c.is_finite() {
                    violations.push(Violation::NonFiniteCost { sink: i, source: j });
                } else if c >= 0.0 {
                    violations.push(Violation::NonNegativeCost {
                        sink: i,
                        source: j,
                        cost: c,
                    });
                }
                if k > 0 && row[k - 1].0 == j {
                    violations.push(Violation::DuplicateArc { sink: i, source: j });
                }
            }
        }
        let (demand, supply) = (self.demand_total(), self.supply_total());
        if !is_balanced(demand, supply) {
            violations.push(Violation::Unbalanced { demand, supply });
        }
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<(), ProblemError> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(ProblemError::Invalid(report))
        }
    }

    pub fn num_sinks(&self) -> usize {
        self.demands.len()
    }

    pub fn num_sources(&self) -> usize {
        self.supplies.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.num_arcs
    }

    pub fn demands(&self) -> &[f64] {
        &self.demands
    }

    pub fn supplies(&self) -> &[f64] {
        &self.supplies
    }

    pub fn demand(&self, sink: usize) -> f64 {
        self.demands[sink]
    }

    pub fn supply(&self, source: usize) -> f64 {
        self.supplies[source]
    }

    /// Sources adjacent to `sink` with their arc costs, ascending by source.
    pub fn adjacent(&self, sink: usize) -> &[(usize, f64)] {
        &self.adjacency[sink]
    }

    pub fn cost(&self, sink: usize, source: usize) -> Option<f64> {
        let row = self.adjacency.get(sink)?;
        row.binary_search_by_key(&source, |&(j, _)| j)
            .ok()
            .map(|k| row[k].1)
    }

    /// All arcs in canonical (sink, source) order.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&(j, c)| Arc::new(i, j, c)))
    }

    pub fn demand_total(&self) -> f64 {
        self.demands.iter().sum()
    }

    pub fn supply_total(&self) -> f64 {
        self.supplies.iter().sum()
    }

    /// Total weight `L`, the common sum of demands and supplies.
    pub fn total_weight(&self) -> Result<f64, ProblemError> {
        let (demand, supply) = (self.demand_total(), self.supply_total());
        if is_balanced(demand, supply) {
            Ok(demand)
        } else {
            Err(ProblemError::Unbalanced { demand, supply })
        }
    }

    /// Largest `|c_ij|` over all arcs (0 for an arcless problem).
    pub fn max_abs_cost(&self) -> f64 {
        self.arcs().map(|a| a.cost.abs()).fold(0.0, f64::max)
    }

    /// True when every weight and cost is an integer (within 1e-9).
    pub fn is_integral(&self) -> bool {
        self.weights_integral() && self.arcs().all(|a| is_integer(a.cost))
    }

    pub fn weights_integral(&self) -> bool {
        self.demands
            .iter()
            .chain(&self.supplies)
            .all(|&w| is_integer(w))
    }

    /// Same problem with every cost negated. Used to load positive-cost
    /// minimization data into the negative-cost convention.
    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        for row in &mut out.adjacency {
            for entry in row.iter_mut() {
                entry.1 = -entry.1;
            }
        }
        out
    }
}

pub(crate) fn is_integer(x: f64) -> bool {
    x.is_finite() && (x - x.round()).abs() <= 1e-9
}

fn is_balanced(demand: f64, supply: f64) -> bool {
    let scale = demand.abs().max(supply.abs()).max(1.0);
    (demand - supply).abs() <= BALANCE_TOLERANCE * scale
}
