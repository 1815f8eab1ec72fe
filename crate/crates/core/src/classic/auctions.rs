use std::collections::BTreeSet;
use std::time::Instant;

use super::{AssignmentProblem, ClassicError};
use crate::oracle::feasibility_check;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicAlgorithm {
    /// One person bids at a time; the increment uses the second-best object.
    Assignment,
    /// The increment uses the best object outside the winning object's class.
    SimilarObjects,
    /// Unassigned persons of one class bid together for distinct objects.
    SimilarPersons,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicConfig {
    pub epsilon: f64,
    pub max_bids: u64,
    /// Object prices to start from; all zeros when absent.
    pub initial_prices: Option<Vec<f64>>,
}

impl ClassicConfig {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            max_bids: 1_000_000_000,
            initial_prices: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentSolution {
    /// Object held by each person.
    pub assignment: Vec<Option<usize>>,
    pub prices: Vec<f64>,
    pub bids: u64,
    pub iterations: u64,
    pub elapsed: f64,
    pub storage_bytes: u64,
}

impl AssignmentSolution {
    pub fn cost(&self, ap: &AssignmentProblem) -> f64 {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(p, o)| o.and_then(|o| ap.cost(p, o)))
            .sum()
    }
}

struct Market<'a> {
    ap: &'a AssignmentProblem,
    epsilon: f64,
    sentinel: f64,
    prices: Vec<f64>,
    owner: Vec<Option<usize>>,
    assignment: Vec<Option<usize>>,
    unassigned: BTreeSet<usize>,
    bids: u64,
}

impl<'a> Market<'a> {
    fn new(ap: &'a AssignmentProblem, epsilon: f64, prices: Vec<f64>) -> Self {
        let n = ap.len();
        Self {
            ap,
            epsilon,
            sentinel: 2.0 * (ap.max_abs_cost() + n as f64 * epsilon + 1.0),
            prices,
            owner: vec![None; n],
            assignment: vec![None; n],
            unassigned: (0..n).collect(),
            bids: 0,
        }
    }

    fn value(&self, o: usize, c: f64) -> f64 {
        c - self.prices[o]
    }

    /// Best object (lowest index on ties) and its cost and value.
    fn best(&self, person: usize) -> (usize, f64, f64) {
        let mut best = (usize::MAX, 0.0, f64::NEG_INFINITY);
        for &(o, c) in self.ap.adjacent(person) {
            let v = self.value(o, c);
            if v > best.2 {
                best = (o, c, v);
            }
        }
        best
    }

    fn award(&mut self, person: usize, object: usize, price: f64) {
        if let Some(prev) = self.owner[object] {
            self.assignment[prev] = None;
            self.unassigned.insert(prev);
        }
        self.unassigned.remove(&person);
        self.owner[object] = Some(person);
        self.assignment[person] = Some(object);
        self.prices[object] = price;
        self.bids += 1;
    }

    /// A single person's bid; `exclude_class` takes the second-best value
    /// from outside the best object's class.
    fn single_bid(&mut self, person: usize, exclude_class: bool) {
        let (target, cost, x) = self.best(person);
        let class = self.ap.object_class(target);
        let mut second = f64::NEG_INFINITY;
        let mut others = false;
        for &(o, c) in self.ap.adjacent(person) {
            let skip = if exclude_class {
                self.ap.object_class(o) == class
            } else {
                o == target
            };
            if !skip {
                others = true;
                second = second.max(self.value(o, c));
            }
        }
        let w = if others { second } else { x - self.sentinel };
        self.award(person, target, cost - w + self.epsilon);
    }

    /// Collective bid by the class of `person`: its `k` unassigned members
    /// take the best objects the class does not hold, each priced from one
    /// shared threshold.
    fn class_bid(&mut self, person: usize) {
        let class = self.ap.person_class(person);
        let members: Vec<usize> = self
            .unassigned
            .iter()
            .copied()
            .filter(|&p| self.ap.person_class(p) == class)
            .collect();
        let mut held_best = f64::NEG_INFINITY;
        let mut open: Vec<(f64, usize, f64)> = Vec::new();
        for &(o, c) in self.ap.adjacent(person) {
            let v = self.value(o, c);
            match self.owner[o] {
                Some(q) if self.ap.person_class(q) == class => held_best = held_best.max(v),
                _ => open.push((v, o, c)),
            }
        }
        open.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let take = open
            .iter()
            .take(members.len())
            .take_while(|e| e.0 >= held_best)
            .count();
        if take == 0 {
            self.single_bid(person, false);
            return;
        }
        let w = match open.get(take) {
            Some(next) => next.0.max(held_best),
            None if held_best > f64::NEG_INFINITY => held_best,
            None => open[take - 1].0 - self.sentinel,
        };
        for (&p, &(_, o, c)) in members.iter().zip(&open[..take]) {
            self.award(p, o, c - w + self.epsilon);
        }
    }
}

pub fn solve_classic(
    ap: &AssignmentProblem,
    algorithm: ClassicAlgorithm,
    config: &ClassicConfig,
) -> Result<AssignmentSolution, ClassicError> {
    let started = Instant::now();
    if !(config.epsilon > 0.0 && config.epsilon.is_finite()) {
        return Err(ClassicError::InvalidEpsilon(config.epsilon));
    }
    if !feasibility_check(&ap.to_transport()?) {
        return Err(ClassicError::Infeasible);
    }
    let prices = match &config.initial_prices {
        Some(p) if p.len() != ap.len() => {
            return Err(ClassicError::Invalid(format!(
                "{} initial prices for {} objects",
                p.len(),
                ap.len()
            )))
        }
        Some(p) => p.clone(),
        None => vec![0.0; ap.len()],
    };
    let mut market = Market::new(ap, config.epsilon, prices);
    let mut iterations = 0;
    while let Some(&person) = market.unassigned.first() {
        match algorithm {
            ClassicAlgorithm::Assignment => market.single_bid(person, false),
            ClassicAlgorithm::SimilarObjects => market.single_bid(person, true),
            ClassicAlgorithm::SimilarPersons => market.class_bid(person),
        }
        iterations += 1;
        if market.bids > config.max_bids {
            return Err(ClassicError::BidCapExceeded {
                cap: config.max_bids,
            });
        }
    }
    let n = ap.len() as u64;
    Ok(AssignmentSolution {
        storage_bytes: ap.num_arcs() as u64 * super::ARC_BYTES + n * 32,
        assignment: market.assignment,
        prices: market.prices,
        bids: market.bids,
        iterations,
        elapsed: started.elapsed().as_secs_f64(),
    })
}

pub fn assignment_auction(
    ap: &AssignmentProblem,
    epsilon: f64,
) -> Result<AssignmentSolution, ClassicError> {
    solve_classic(
        ap,
        ClassicAlgorithm::Assignment,
        &ClassicConfig::new(epsilon),
    )
}

pub fn auction_so(
    ap: &AssignmentProblem,
    epsilon: f64,
) -> Result<AssignmentSolution, ClassicError> {
    solve_classic(
        ap,
        ClassicAlgorithm::SimilarObjects,
        &ClassicConfig::new(epsilon),
    )
}

pub fn auction_sop(
    ap: &AssignmentProblem,
    epsilon: f64,
) -> Result<AssignmentSolution, ClassicError> {
    solve_classic(
        ap,
        ClassicAlgorithm::SimilarPersons,
        &ClassicConfig::new(epsilon),
    )
}
