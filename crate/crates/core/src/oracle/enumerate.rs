//! Exhaustive search over integer flows, independent of the flow solver.

use std::collections::HashMap;

use super::{OracleError, OracleMethod, OracleSolution};
use crate::transport::{is_integer, SimplifiedPlan, TransportProblem};

/// Largest total weight accepted for integer-weight enumeration.
pub const ENUMERATION_MAX_WEIGHT: f64 = 12.0;
/// Largest unit-weight square problem accepted.
pub const ENUMERATION_MAX_UNIT: usize = 8;

struct Search<'a> {
    problem: &'a TransportProblem,
    demands: Vec<u32>,
    memo: HashMap<(usize, Vec<u32>), Option<f64>>,
}

impl Search<'_> {
    /// Every way to split `amount` over sink `i`'s arcs within `rem`.
    fn splits(&self, i: usize, rem: &[u32]) -> Vec<Vec<u32>> {
        fn go(
            arcs: &[(usize, f64)],
            rem: &[u32],
            k: usize,
            left: u32,
            cur: &mut Vec<u32>,
            out: &mut Vec<Vec<u32>>,
        ) {
            if k == arcs.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let top = left.min(rem[arcs[k].0]);
            for q in (0..=top).rev() {
                cur.push(q);
                go(arcs, rem, k + 1, left - q, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(
            self.problem.adjacent(i),
            rem,
            0,
            self.demands[i],
            &mut Vec::new(),
            &mut out,
        );
        out
    }

    fn best(&mut self, i: usize, rem: Vec<u32>) -> Option<f64> {
        if i == self.demands.len() {
            return Some(0.0);
        }
        if let Some(&v) = self.memo.get(&(i, rem.clone())) {
            return v;
        }
        let mut best: Option<f64> = None;
        for split in self.splits(i, &rem) {
            let (here, next) = self.apply(i, &rem, &split);
            if let Some(rest) = self.best(i + 1, next) {
                let total = here + rest;
                if best.map_or(true, |b| total > b) {
                    best = Some(total);
                }
            }
        }
        self.memo.insert((i, rem), best);
        best
    }

    fn apply(&self, i: usize, rem: &[u32], split: &[u32]) -> (f64, Vec<u32>) {
        let mut next = rem.to_vec();
        let mut cost = 0.0;
        for (&(j, c), &q) in self.problem.adjacent(i).iter().zip(split) {
            next[j] -= q;
            cost += c * q as f64;
        }
        (cost, next)
    }
}

/// Exact optimum of a tiny integer-weight problem by exhaustive search over
/// all integer flows, memoized on the remaining supplies.
pub fn enumerate_tiny(problem: &TransportProblem) -> Result<OracleSolution, OracleError> {
    problem.ensure_valid().map_err(OracleError::Problem)?;
    if !problem.weights_integral() {
        return Err(OracleError::OverBudget(
            "enumeration needs integer weights".into(),
        ));
    }
    let (m, n) = (problem.num_sinks(), problem.num_sources());
    let unit = problem
        .demands()
        .iter()
        .chain(problem.supplies())
        .all(|&w| w == 1.0);
    let total = problem.demand_total();
    let small_unit = unit && m == n && m <= ENUMERATION_MAX_UNIT;
    if !small_unit && total > ENUMERATION_MAX_WEIGHT + 1e-9 {
        return Err(OracleError::OverBudget(format!(
            "enumeration limited to total weight {ENUMERATION_MAX_WEIGHT} or unit square problems up to {ENUMERATION_MAX_UNIT}"
        )));
    }
    let round = |w: &f64| {
        debug_assert!(is_integer(*w));
        w.round() as u32
    };
    let mut search = Search {
        problem,
        demands: problem.demands().iter().map(round).collect(),
        memo: HashMap::new(),
    };
    let supplies: Vec<u32> = problem.supplies().iter().map(round).collect();
    if search.best(0, supplies.clone()).is_none() {
        return Err(OracleError::Infeasible);
    }

    let mut plan = SimplifiedPlan::new();
    let mut rem = supplies;
    for i in 0..m {
        let target = search.best(i, rem.clone()).expect("reachable state");
        let mut chosen = None;
        for split in search.splits(i, &rem) {
            let (here, next) = search.apply(i, &rem, &split);
            if let Some(rest) = search.best(i + 1, next.clone()) {
                if here + rest == target {
                    chosen = Some((split, next));
                    break;
                }
            }
        }
        let (split, next) = chosen.expect("optimal split exists");
        for (&(j, _), &q) in problem.adjacent(i).iter().zip(&split) {
            plan.add(i, j, q as f64);
        }
        rem = next;
    }
    let optimal_cost = problem
        .primal_cost(&plan)
        .expect("enumerated flows lie on arcs");
    Ok(OracleSolution {
        plan,
        optimal_cost,
        method: OracleMethod::Enumeration,
        prices: None,
    })
}
