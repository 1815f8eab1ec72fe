use std::time::Instant;

use super::state::{init_state, AuctionConfig, AuctionError, AuctionState, IterationSummary};
use crate::oracle::feasibility_check;
use crate::transport::{SolveReport, TransportProblem};

/// Decreasing step sizes `ε_init, ε_init/θ, ...` ending at `ε_final`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingSchedule {
    pub epsilon_initial: f64,
    pub theta: f64,
    pub epsilon_final: f64,
}

impl ScalingSchedule {
    pub fn new(epsilon_initial: f64, theta: f64, epsilon_final: f64) -> Result<Self, AuctionError> {
        let schedule = Self {
            epsilon_initial,
            theta,
            epsilon_final,
        };
        schedule.check()?;
        Ok(schedule)
    }

    /// `θ = 4` and `ε_init = |c|max / 2`, never below `ε_final`.
    pub fn for_problem(problem: &TransportProblem, epsilon_final: f64) -> Self {
        Self {
            epsilon_initial: (problem.max_abs_cost() / 2.0).max(epsilon_final),
            theta: 4.0,
            epsilon_final,
        }
    }

    fn check(&self) -> Result<(), AuctionError> {
        if !(self.epsilon_final > 0.0 && self.epsilon_final.is_finite()) {
            return Err(AuctionError::InvalidSchedule(format!(
                "final step {} must be positive",
                self.epsilon_final
            )));
        }
        if !(self.epsilon_initial >= self.epsilon_final && self.epsilon_initial.is_finite()) {
            return Err(AuctionError::InvalidSchedule(format!(
                "initial step {} is below final step {}",
                self.epsilon_initial, self.epsilon_final
            )));
        }
        if !(self.theta > 1.0 && self.theta.is_finite()) {
            return Err(AuctionError::InvalidSchedule(format!(
                "decay factor {} must exceed 1",
                self.theta
            )));
        }
        Ok(())
    }

    /// The step size of every phase, in order.
    pub fn steps(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut eps = self.epsilon_initial;
        loop {
            if eps <= self.epsilon_final * (1.0 + 1e-12) {
                out.push(self.epsilon_final);
                return out;
            }
            out.push(eps);
            eps /= self.theta;
        }
    }
}

fn precheck(problem: &TransportProblem) -> Result<(), AuctionError> {
    problem.ensure_valid()?;
    if !feasibility_check(problem) {
        return Err(AuctionError::Infeasible);
    }
    Ok(())
}

fn drive(
    state: &mut AuctionState<'_>,
    config: &AuctionConfig,
    observer: &mut dyn FnMut(&AuctionState<'_>, &IterationSummary),
) -> Result<(), AuctionError> {
    while !state.all_satisfied() {
        let summary = state.run_iteration(config)?;
        observer(state, &summary);
        if state.bids > config.max_bids {
            return Err(AuctionError::BidCapExceeded {
                cap: config.max_bids,
                bids: state.bids,
            });
        }
    }
    Ok(())
}

fn report(state: &AuctionState<'_>, started: Instant) -> Result<SolveReport, AuctionError> {
    let problem = state.problem();
    let (plan, primal_cost) = state.extract_plan()?;
    let gap = problem.duality_gap(&plan, state.prices())?;
    Ok(SolveReport {
        primal_cost,
        dual_profit: problem.dual_profit(state.prices()),
        gap,
        prices: state.price_vector(),
        plan,
        iterations: state.iterations,
        bids: state.bids,
        elapsed: started.elapsed().as_secs_f64(),
        epsilon_final: state.epsilon(),
        storage_bytes: state.storage_bytes(),
    })
}

/// Runs the general auction at a fixed step size until every sink is satisfied.
pub fn run_auction(
    problem: &TransportProblem,
    config: &AuctionConfig,
) -> Result<SolveReport, AuctionError> {
    run_auction_with(problem, config, &mut |_, _| {})
}

/// As [`run_auction`], calling `observer` after every iteration.
pub fn run_auction_with(
    problem: &TransportProblem,
    config: &AuctionConfig,
    observer: &mut dyn FnMut(&AuctionState<'_>, &IterationSummary),
) -> Result<SolveReport, AuctionError> {
    let started = Instant::now();
    precheck(problem)?;
    let mut state = init_state(problem, config)?;
    drive(&mut state, config, observer)?;
    report(&state, started)
}

/// ε-scaling: one auction per step of `schedule`, each starting from the
/// previous phase's prices with empty claim lists. Counters accumulate.
pub fn run_scaled(
    problem: &TransportProblem,
    config: &AuctionConfig,
    schedule: &ScalingSchedule,
) -> Result<SolveReport, AuctionError> {
    run_scaled_with(problem, config, schedule, &mut |_, _| {})
}

pub fn run_scaled_with(
    problem: &TransportProblem,
    config: &AuctionConfig,
    schedule: &ScalingSchedule,
    observer: &mut dyn FnMut(&AuctionState<'_>, &IterationSummary),
) -> Result<SolveReport, AuctionError> {
    let started = Instant::now();
    schedule.check()?;
    precheck(problem)?;
    let steps = schedule.steps();
    let first = AuctionConfig {
        epsilon: steps[0],
        ..config.clone()
    };
    let mut state = init_state(problem, &first)?;
    for (k, &eps) in steps.iter().enumerate() {
        if k > 0 {
            state.restart(eps);
        }
        drive(&mut state, config, observer)?;
    }
    report(&state, started)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_steps() {
        let s = ScalingSchedule::new(2.0, 4.0, 0.125).unwrap();
        assert_eq!(s.steps(), vec![2.0, 0.5, 0.125]);
        let flat = ScalingSchedule::new(0.5, 4.0, 0.5).unwrap();
        assert_eq!(flat.steps(), vec![0.5]);
        let uneven = ScalingSchedule::new(1.0, 4.0, 0.1).unwrap();
        assert_eq!(uneven.steps(), vec![1.0, 0.25, 0.1]);
        assert!(ScalingSchedule::new(0.1, 4.0, 1.0).is_err());
        assert!(ScalingSchedule::new(1.0, 1.0, 0.1).is_err());
    }
}
