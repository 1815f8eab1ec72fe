//! The assignment auction and its extensions for similar objects and similar
//! persons, run on the assignment problem a transport problem expands to.

mod auctions;
mod expand;

use thiserror::Error;

use crate::transport::{is_integer, Arc, ProblemError, TransportProblem};

pub use auctions::{
    assignment_auction, auction_so, auction_sop, solve_classic, AssignmentSolution,
    ClassicAlgorithm, ClassicConfig,
};
pub use expand::{
    collapse_assignment, expand_to_assignment, predict_expansion, ExpansionMap, ExpansionSize,
    ARC_BYTES, DEFAULT_EXPANSION_CAP,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("integer weights required: the problem is not rationally expandable as given")]
    NonIntegerWeights,
    #[error("integer costs required")]
    NonIntegerCosts,
    #[error(
        "expansion needs {} vertices and {} arcs ({} bytes), over the cap of {cap} bytes",
        size.vertices, size.arcs, size.bytes
    )]
    CapExceeded { size: ExpansionSize, cap: u64 },
    #[error("invalid assignment problem: {0}")]
    Invalid(String),
    #[error("no complete assignment exists")]
    Infeasible,
    #[error("step size must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("bid cap of {cap} exceeded")]
    BidCapExceeded { cap: u64 },
    #[error("person {person} is unassigned")]
    Incomplete { person: usize },
}

/// `n` persons and `n` objects with sparse integer costs. Persons (objects)
/// sharing a class id are interchangeable.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentProblem {
    adjacency: Vec<Vec<(usize, f64)>>,
    person_class: Vec<usize>,
    object_class: Vec<usize>,
}

impl AssignmentProblem {
    /// Every person and object in its own class.
    pub fn new(adjacency: Vec<Vec<(usize, f64)>>) -> Result<Self, ClassicError> {
        let n = adjacency.len();
        Self::with_classes(adjacency, (0..n).collect(), (0..n).collect())
    }

    pub fn with_classes(
        mut adjacency: Vec<Vec<(usize, f64)>>,
        person_class: Vec<usize>,
        object_class: Vec<usize>,
    ) -> Result<Self, ClassicError> {
        let n = adjacency.len();
        let bad = |m: String| Err(ClassicError::Invalid(m));
        if object_class.len() != n || person_class.len() != n {
            return bad(format!(
                "{n} persons need {n} objects and one class id each"
            ));
        }
        for (p, row) in adjacency.iter_mut().enumerate() {
            row.sort_by_key(|&(o, _)| o);
            if row.is_empty() {
                return bad(format!("person {p} has no adjacent object"));
            }
            for (k, &(o, c)) in row.iter().enumerate() {
                if o >= n {
                    return bad(format!("person {p} references object {o}"));
                }
                if k > 0 && row[k - 1].0 == o {
                    return bad(format!("duplicate arc ({p}, {o})"));
                }
                if !is_integer(c) || c >= 0.0 {
                    return bad(format!("cost {c} at ({p}, {o}) is not a negative integer"));
                }
            }
        }
        Ok(Self {
            adjacency,
            person_class,
            object_class,
        })
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn adjacent(&self, person: usize) -> &[(usize, f64)] {
        &self.adjacency[person]
    }

    pub fn num_arcs(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn person_class(&self, person: usize) -> usize {
        self.person_class[person]
    }

    pub fn object_class(&self, object: usize) -> usize {
        self.object_class[object]
    }

    pub fn max_abs_cost(&self) -> f64 {
        self.adjacency
            .iter()
            .flatten()
            .map(|&(_, c)| c.abs())
            .fold(0.0, f64::max)
    }

    pub fn cost(&self, person: usize, object: usize) -> Option<f64> {
        let row = &self.adjacency[person];
        row.binary_search_by_key(&object, |&(o, _)| o)
            .ok()
            .map(|k| row[k].1)
    }

    /// The same problem as a unit-weight transport problem.
    pub fn to_transport(&self) -> Result<TransportProblem, ClassicError> {
        let n = self.len();
        let arcs = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(p, row)| row.iter().map(move |&(o, c)| Arc::new(p, o, c)))
            .collect();
        Ok(TransportProblem::new(vec![1.0; n], vec![1.0; n], arcs)?)
    }
}

#[cfg(test)]
mod tests;
