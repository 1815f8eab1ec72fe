use thiserror::Error;

use super::claims::ClaimList;
use crate::transport::{
    GapError, PriceError, PriceVector, ProblemError, SimplifiedPlan, TransportProblem,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AuctionError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Price(#[from] PriceError),
    #[error("step size must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("expected {expected} initial prices, got {got}")]
    PriceLength { expected: usize, got: usize },
    #[error("no complete transport plan exists")]
    Infeasible,
    #[error("sink {0} is already satisfied")]
    Satisfied(usize),
    #[error("every sink is satisfied")]
    AllSatisfied,
    #[error("bid cap of {cap} exceeded after {bids} bids")]
    BidCapExceeded { cap: u64, bids: u64 },
    #[error("auction has not terminated: {unsatisfied} sinks unsatisfied")]
    NotTerminated { unsatisfied: usize },
    #[error("invalid scaling schedule: {0}")]
    InvalidSchedule(String),
    #[error(
        "conservation violated: claimed by sinks {by_sinks}, claimed from sources {from_sources}"
    )]
    Conservation { by_sinks: f64, from_sources: f64 },
    #[error(transparent)]
    Gap(#[from] GapError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BidderStrategy {
    /// Every unsatisfied sink bids against the same pre-phase prices.
    #[default]
    AllUnsatisfied,
    /// Only the lowest-indexed unsatisfied sink bids.
    Single,
}

/// How a lot that still has unclaimed supply is priced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LotPricing {
    /// Unclaimed supply sells at the lot's initial price, so the lot price is
    /// the initial price until the lot is fully claimed, then the lowest claim.
    #[default]
    Unit,
    /// The lowest claim price whenever the claim list is nonempty.
    LowestClaim,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuctionConfig {
    pub epsilon: f64,
    /// All zeros when absent.
    pub initial_prices: Option<PriceVector>,
    pub hc_rule: bool,
    pub strategy: BidderStrategy,
    pub lot_pricing: LotPricing,
    pub max_bids: u64,
    /// A sink with `D_i <= satisfied_tolerance * max(1, d_i)` counts as
    /// satisfied; the same relative tolerance applies to lot supply.
    pub satisfied_tolerance: f64,
}

impl AuctionConfig {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            initial_prices: None,
            hc_rule: true,
            strategy: BidderStrategy::AllUnsatisfied,
            lot_pricing: LotPricing::Unit,
            max_bids: 1_000_000_000,
            satisfied_tolerance: 1e-12,
        }
    }

    pub fn with_strategy(mut self, strategy: BidderStrategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_hc_rule(mut self, on: bool) -> Self {
        self.hc_rule = on;
        self
    }

    pub fn with_initial_prices(mut self, prices: PriceVector) -> Self {
        self.initial_prices = Some(prices);
        self
    }

    pub fn with_lot_pricing(mut self, pricing: LotPricing) -> Self {
        self.lot_pricing = pricing;
        self
    }

    pub fn with_max_bids(mut self, cap: u64) -> Self {
        self.max_bids = cap;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bid {
    pub bidder: usize,
    pub lot: usize,
    pub price: f64,
    pub quantity: f64,
    /// Best expense `x_i` and second-best expense `w_i` the bid was priced from.
    pub best: f64,
    pub second_best: f64,
}

/// What one claims phase did.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResolveSummary {
    pub evictions: u64,
    pub max_price_delta: f64,
    /// Bids on lots whose price the phase left unchanged that did not
    /// acquire their full quantity.
    pub steady_unsatisfied: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IterationSummary {
    pub iteration: u64,
    pub bids: u64,
    pub evictions: u64,
    pub satisfied: usize,
    pub unsatisfied_demand: f64,
    pub max_price_delta: f64,
    pub steady_unsatisfied: u64,
}

#[derive(Debug, Clone)]
pub struct AuctionState<'a> {
    problem: &'a TransportProblem,
    claims: Vec<ClaimList>,
    prices: Vec<f64>,
    base_prices: Vec<f64>,
    unsatisfied: Vec<f64>,
    available: Vec<f64>,
    epsilon: f64,
    sentinel: f64,
    lot_pricing: LotPricing,
    tolerance: f64,
    pub(crate) bids: u64,
    pub(crate) iterations: u64,
    pub(crate) peak_claims: usize,
}

/// Fresh state: no claims, `D = d`, `S = s`, `p = p^0`.
pub fn init_state<'a>(
    problem: &'a TransportProblem,
    config: &AuctionConfig,
) -> Result<AuctionState<'a>, AuctionError> {
    problem.ensure_valid()?;
    if !(config.epsilon > 0.0 && config.epsilon.is_finite()) {
        return Err(AuctionError::InvalidEpsilon(config.epsilon));
    }
    let n = problem.num_sources();
    let base = match &config.initial_prices {
        Some(p) if p.len() != n => {
            return Err(AuctionError::PriceLength {
                expected: n,
                got: p.len(),
            })
        }
        Some(p) => p.as_slice().to_vec(),
        None => vec![0.0; n],
    };
    let total = problem.demand_total();
    Ok(AuctionState {
        problem,
        claims: vec![ClaimList::new(); n],
        prices: base.clone(),
        base_prices: base,
        unsatisfied: problem.demands().to_vec(),
        available: problem.supplies().to_vec(),
        epsilon: config.epsilon,
        sentinel: 2.0 * (problem.max_abs_cost() + total * config.epsilon + 1.0),
        lot_pricing: config.lot_pricing,
        tolerance: config.satisfied_tolerance,
        bids: 0,
        iterations: 0,
        peak_claims: 0,
    })
}

impl<'a> AuctionState<'a> {
    pub fn problem(&self) -> &'a TransportProblem {
        self.problem
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn claim_list(&self, lot: usize) -> &ClaimList {
        &self.claims[lot]
    }

    /// `D_i` for every sink.
    pub fn unsatisfied(&self) -> &[f64] {
        &self.unsatisfied
    }

    /// `S_j` for every source.
    pub fn available(&self) -> &[f64] {
        &self.available
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn bids(&self) -> u64 {
        self.bids
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn num_claims(&self) -> usize {
        self.claims.iter().map(ClaimList::len).sum()
    }

    fn demand_slack(&self, i: usize) -> f64 {
        self.tolerance * self.problem.demand(i).max(1.0)
    }

    fn supply_slack(&self, j: usize) -> f64 {
        self.tolerance * self.problem.supply(j).max(1.0)
    }

    pub fn is_satisfied(&self, i: usize) -> bool {
        self.unsatisfied[i] <= self.demand_slack(i)
    }

    pub fn all_satisfied(&self) -> bool {
        (0..self.unsatisfied.len()).all(|i| self.is_satisfied(i))
    }

    pub fn satisfied_count(&self) -> usize {
        (0..self.unsatisfied.len())
            .filter(|&i| self.is_satisfied(i))
            .count()
    }

    fn lot_price(&self, j: usize) -> f64 {
        let list = &self.claims[j];
        match self.lot_pricing {
            LotPricing::Unit if self.available[j] > self.supply_slack(j) => self.base_prices[j],
            _ => list.min_price().unwrap_or(self.base_prices[j]),
        }
    }

    /// `Σ(d_i - D_i)` and `Σ(s_j - S_j)`, which must agree.
    pub fn claimed_totals(&self) -> (f64, f64) {
        let by_sinks = self
            .problem
            .demands()
            .iter()
            .zip(&self.unsatisfied)
            .map(|(d, u)| d - u)
            .sum();
        let from_sources = self
            .problem
            .supplies()
            .iter()
            .zip(&self.available)
            .map(|(s, a)| s - a)
            .sum();
        (by_sinks, from_sources)
    }

    pub fn check_conservation(&self) -> Result<(), AuctionError> {
        let (by_sinks, from_sources) = self.claimed_totals();
        if (by_sinks - from_sources).abs() > 1e-9 * self.problem.demand_total().max(1.0) {
            return Err(AuctionError::Conservation {
                by_sinks,
                from_sources,
            });
        }
        Ok(())
    }

    /// The bid sink `i` would place against the current prices.
    pub fn compute_bid(&self, i: usize) -> Result<Bid, AuctionError> {
        if self.is_satisfied(i) {
            return Err(AuctionError::Satisfied(i));
        }
        let mut best = (usize::MAX, 0.0, f64::NEG_INFINITY);
        let mut second = f64::NEG_INFINITY;
        for &(j, c) in self.problem.adjacent(i) {
            let value = c - self.prices[j];
            if value > best.2 {
                second = best.2;
                best = (j, c, value);
            } else if value > second {
                second = value;
            }
        }
        let (lot, cost, x) = best;
        let w = if self.problem.adjacent(i).len() == 1 {
            x - self.sentinel
        } else {
            second
        };
        Ok(Bid {
            bidder: i,
            lot,
            price: cost - w + self.epsilon,
            quantity: self.unsatisfied[i].min(self.problem.supply(lot)),
            best: x,
            second_best: w,
        })
    }

    /// Bids from the subset of unsatisfied sinks chosen by `strategy`, all
    /// priced against the current prices.
    pub fn bidding_phase(&self, strategy: BidderStrategy) -> Result<Vec<Bid>, AuctionError> {
        let mut open = (0..self.unsatisfied.len()).filter(|&i| !self.is_satisfied(i));
        let bidders: Vec<usize> = match strategy {
            BidderStrategy::AllUnsatisfied => open.collect(),
            BidderStrategy::Single => open.next().into_iter().collect(),
        };
        if bidders.is_empty() {
            return Err(AuctionError::AllSatisfied);
        }
        bidders.into_iter().map(|i| self.compute_bid(i)).collect()
    }

    /// Claims phase. Bids on the same lot are handled by descending price,
    /// then ascending bidder.
    pub fn resolve_bids(
        &mut self,
        mut bids: Vec<Bid>,
        hc_rule: bool,
    ) -> Result<ResolveSummary, AuctionError> {
        bids.sort_by(|a, b| {
            a.lot
                .cmp(&b.lot)
                .then(b.price.total_cmp(&a.price))
                .then(a.bidder.cmp(&b.bidder))
        });
        self.bids += bids.len() as u64;
        let mut summary = ResolveSummary::default();
        let before = self.prices.clone();
        let acquired: Vec<f64> = bids
            .iter()
            .map(|bid| self.resolve_one(bid, hc_rule, &mut summary))
            .collect();
        for (bid, got) in bids.iter().zip(acquired) {
            let (old, new) = (before[bid.lot], self.prices[bid.lot]);
            summary.max_price_delta = summary.max_price_delta.max(new - old);
            if hc_rule && new == old && bid.quantity - got > self.supply_slack(bid.lot) {
                summary.steady_unsatisfied += 1;
            }
        }
        self.peak_claims = self.peak_claims.max(self.num_claims());
        self.check_conservation()?;
        Ok(summary)
    }

    /// Returns the quantity the bid newly acquired.
    fn resolve_one(&mut self, bid: &Bid, hc_rule: bool, summary: &mut ResolveSummary) -> f64 {
        let (i, j) = (bid.bidder, bid.lot);
        let dust = self.supply_slack(j);
        let mut want = bid.quantity;
        let mut slot = None;
        while want - self.available[j] > dust {
            let Some(low) = self.claims[j].lowest().copied() else {
                break;
            };
            if low.price > bid.price {
                break;
            }
            if hc_rule && low.bidder == i {
                want += low.quantity;
            }
            let need = want - self.available[j];
            let (claim, taken) = self.claims[j]
                .take_from_lowest(need, dust)
                .expect("nonempty list");
            self.available[j] += taken;
            self.unsatisfied[claim.bidder] += taken;
            slot.get_or_insert(claim.slot);
            if claim.bidder != i {
                summary.evictions += 1;
            }
        }
        let quantity = want.min(self.available[j]);
        if quantity > dust {
            let slot = slot.unwrap_or_else(|| self.claims[j].fresh_slot());
            self.claims[j].insert(i, bid.price, quantity, slot);
            self.unsatisfied[i] -= quantity;
            self.available[j] -= quantity;
        }
        self.prices[j] = self.lot_price(j);
        (quantity - (want - bid.quantity)).max(0.0)
    }

    /// One bidding phase followed by one claims phase. A no-op when every
    /// sink is already satisfied.
    pub fn run_iteration(
        &mut self,
        config: &AuctionConfig,
    ) -> Result<IterationSummary, AuctionError> {
        if self.all_satisfied() {
            return Ok(self.summary(0, ResolveSummary::default()));
        }
        let bids = self.bidding_phase(config.strategy)?;
        let count = bids.len() as u64;
        let resolved = self.resolve_bids(bids, config.hc_rule)?;
        self.iterations += 1;
        Ok(self.summary(count, resolved))
    }

    fn summary(&self, bids: u64, resolved: ResolveSummary) -> IterationSummary {
        IterationSummary {
            iteration: self.iterations,
            bids,
            evictions: resolved.evictions,
            satisfied: self.satisfied_count(),
            unsatisfied_demand: self.unsatisfied.iter().sum(),
            max_price_delta: resolved.max_price_delta,
            steady_unsatisfied: resolved.steady_unsatisfied,
        }
    }

    /// The plan held by the claim lists so far, complete or not.
    pub fn current_plan(&self) -> SimplifiedPlan {
        self.claims
            .iter()
            .enumerate()
            .flat_map(|(j, list)| {
                list.iter()
                    .map(move |c| crate::transport::Shipment::new(c.bidder, j, c.quantity))
            })
            .collect()
    }

    /// Final plan and its cost `Σ c_ij q_ij` summed over claims.
    pub fn extract_plan(&self) -> Result<(SimplifiedPlan, f64), AuctionError> {
        if !self.all_satisfied() {
            return Err(AuctionError::NotTerminated {
                unsatisfied: self.unsatisfied.len() - self.satisfied_count(),
            });
        }
        let plan = self.current_plan();
        let cost = self
            .claims
            .iter()
            .enumerate()
            .flat_map(|(j, list)| list.iter().map(move |c| (c.bidder, j, c.quantity)))
            .map(|(i, j, q)| self.problem.cost(i, j).expect("claims lie on arcs") * q)
            .sum();
        Ok((plan, cost))
    }

    /// Drops every claim and restores `D = d`, `S = s`, keeping current prices
    /// as the new initial prices.
    pub(crate) fn restart(&mut self, epsilon: f64) {
        for list in &mut self.claims {
            list.clear();
        }
        self.base_prices = self.prices.clone();
        self.unsatisfied = self.problem.demands().to_vec();
        self.available = self.problem.supplies().to_vec();
        self.epsilon = epsilon;
        self.sentinel =
            2.0 * (self.problem.max_abs_cost() + self.problem.demand_total() * epsilon + 1.0);
    }

    pub(crate) fn price_vector(&self) -> PriceVector {
        PriceVector::new(self.prices.clone()).expect("lot prices stay nonnegative")
    }

    /// Counted bytes of the arc table, per-vertex arrays, and peak claims.
    pub fn storage_bytes(&self) -> u64 {
        use std::mem::size_of;
        let (m, n) = (
            self.problem.num_sinks() as u64,
            self.problem.num_sources() as u64,
        );
        let arcs = self.problem.num_arcs() as u64 * size_of::<(usize, f64)>() as u64
            + m * size_of::<Vec<(usize, f64)>>() as u64;
        // Weights, D, S, p, p^0 and one claim list header per lot.
        let vertices = m * 16 + n * (32 + size_of::<ClaimList>() as u64);
        let claims = self.peak_claims as u64 * (size_of::<super::claims::Claim>() as u64 + 48);
        arcs + vertices + claims
    }
}
