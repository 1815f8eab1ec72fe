use super::*;
use crate::transport::{Arc, PriceVector, TransportProblem};

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

fn single(cost: f64) -> TransportProblem {
    TransportProblem::new(vec![1.0], vec![1.0], vec![Arc::new(0, 0, cost)]).unwrap()
}

fn bid(bidder: usize, lot: usize, price: f64, quantity: f64) -> Bid {
    Bid {
        bidder,
        lot,
        price,
        quantity,
        best: 0.0,
        second_best: 0.0,
    }
}

#[test]
fn init_state_examples() {
    let p = single(-1.0);
    let state = init_state(&p, &AuctionConfig::new(1.0)).unwrap();
    assert_eq!(state.unsatisfied(), &[1.0]);
    assert_eq!(state.available(), &[1.0]);
    assert_eq!(state.prices(), &[0.0]);
    assert_eq!(state.num_claims(), 0);
    assert_eq!(state.claimed_totals(), (0.0, 0.0));

    let q = two_by_two();
    let cfg =
        AuctionConfig::new(0.5).with_initial_prices(PriceVector::new(vec![5.0, 5.0]).unwrap());
    assert_eq!(init_state(&q, &cfg).unwrap().prices(), &[5.0, 5.0]);

    assert_eq!(
        init_state(&q, &AuctionConfig::new(0.0)).unwrap_err(),
        AuctionError::InvalidEpsilon(0.0)
    );
}

#[test]
fn compute_bid_examples() {
    let p = single(-2.0);
    let state = init_state(&p, &AuctionConfig::new(1.0)).unwrap();
    let b = state.compute_bid(0).unwrap();
    assert_eq!((b.lot, b.quantity), (0, 1.0));
    assert!(b.price >= 1.0 + 2.0 * p.max_abs_cost());

    let q = TransportProblem::new(
        vec![1.0],
        vec![0.5, 0.5],
        vec![Arc::new(0, 0, -1.0), Arc::new(0, 1, -2.0)],
    )
    .unwrap();
    let b = init_state(&q, &AuctionConfig::new(0.5))
        .unwrap()
        .compute_bid(0)
        .unwrap();
    assert_eq!(
        (b.lot, b.second_best, b.price, b.quantity),
        (0, -2.0, 1.5, 0.5)
    );

    let tie = TransportProblem::new(
        vec![1.0],
        vec![0.5, 0.5],
        vec![Arc::new(0, 0, -1.0), Arc::new(0, 1, -1.0)],
    )
    .unwrap();
    let b = init_state(&tie, &AuctionConfig::new(0.5))
        .unwrap()
        .compute_bid(0)
        .unwrap();
    assert_eq!((b.lot, b.second_best, b.price), (0, -1.0, 0.5));
}

#[test]
fn bidding_phase_examples() {
    let p = two_by_two();
    let mut state = init_state(&p, &AuctionConfig::new(0.5)).unwrap();
    let bids = state.bidding_phase(BidderStrategy::AllUnsatisfied).unwrap();
    assert_eq!(bids.len(), 2);
    assert_eq!((bids[0].lot, bids[0].price), (0, 1.5));
    assert_eq!((bids[1].lot, bids[1].price), (1, 1.5));
    assert_eq!(
        state.bidding_phase(BidderStrategy::Single).unwrap().len(),
        1
    );

    state.resolve_bids(bids, true).unwrap();
    assert!(state.all_satisfied());
    assert_eq!(
        state.bidding_phase(BidderStrategy::AllUnsatisfied),
        Err(AuctionError::AllSatisfied)
    );
}

#[test]
fn resolve_into_empty_lot() {
    let p = single(-1.0);
    let mut state = init_state(&p, &AuctionConfig::new(1.0)).unwrap();
    state.resolve_bids(vec![bid(0, 0, 1.5, 1.0)], true).unwrap();
    assert_eq!(state.unsatisfied(), &[0.0]);
    assert_eq!(state.available(), &[0.0]);
    assert_eq!(state.prices(), &[1.5]);
}

#[test]
fn higher_bid_evicts_lower_claim() {
    let p = TransportProblem::new(
        vec![1.0, 1.0],
        vec![1.0, 1.0],
        vec![
            Arc::new(0, 0, -1.0),
            Arc::new(1, 0, -1.0),
            Arc::new(1, 1, -1.0),
        ],
    )
    .unwrap();
    let mut state = init_state(&p, &AuctionConfig::new(0.5)).unwrap();
    state.resolve_bids(vec![bid(0, 0, 1.0, 1.0)], true).unwrap();
    let summary = state.resolve_bids(vec![bid(1, 0, 1.5, 1.0)], true).unwrap();
    assert_eq!(summary.evictions, 1);
    assert_eq!(state.unsatisfied(), &[1.0, 0.0]);
    assert_eq!(state.prices()[0], 1.5);
    assert_eq!(state.claim_list(0).lowest().unwrap().bidder, 1);
}

/// Lot 0 (s = 1) holds (0; 1.0, 0.4) and (1; 1.2, 0.6) when sink 0 bids
/// (2.0, 0.4) on it again.
fn cannibal_setup(p: &TransportProblem) -> AuctionState<'_> {
    let mut state = init_state(p, &AuctionConfig::new(0.1)).unwrap();
    state.resolve_bids(vec![bid(0, 0, 1.0, 0.4)], true).unwrap();
    state.resolve_bids(vec![bid(1, 0, 1.2, 0.6)], true).unwrap();
    assert_eq!(state.prices()[0], 1.0);
    state
}

fn cannibal_problem() -> TransportProblem {
    TransportProblem::new(
        vec![0.8, 0.6],
        vec![1.0, 0.4],
        vec![
            Arc::new(0, 0, -1.0),
            Arc::new(0, 1, -1.0),
            Arc::new(1, 0, -1.0),
            Arc::new(1, 1, -1.0),
        ],
    )
    .unwrap()
}

#[test]
fn hungry_cannibal_absorbs_own_claim() {
    let p = cannibal_problem();
    let mut state = cannibal_setup(&p);
    state.resolve_bids(vec![bid(0, 0, 2.0, 0.4)], true).unwrap();
    let list = state.claim_list(0);
    assert!((list.quantity_held_by(0) - 0.8).abs() < 1e-12);
    assert!((list.quantity_held_by(1) - 0.2).abs() < 1e-12);
    assert_eq!(list.claims_by(0).next().unwrap().price, 2.0);
    assert_eq!(state.prices()[0], 1.2);
    assert!(state.is_satisfied(0));
    assert!((state.unsatisfied()[1] - 0.4).abs() < 1e-12);
}

#[test]
fn without_hungry_cannibal_the_old_claim_is_lost() {
    let p = cannibal_problem();
    let mut state = cannibal_setup(&p);
    state
        .resolve_bids(vec![bid(0, 0, 2.0, 0.4)], false)
        .unwrap();
    let list = state.claim_list(0);
    assert!((list.quantity_held_by(0) - 0.4).abs() < 1e-12);
    assert!((list.quantity_held_by(1) - 0.6).abs() < 1e-12);
    assert_eq!(state.prices()[0], 1.2);
    assert!((state.unsatisfied()[0] - 0.4).abs() < 1e-12);
}

#[test]
fn same_lot_bids_resolve_highest_first() {
    let p = TransportProblem::new(
        vec![1.0, 1.0],
        vec![1.0, 1.0],
        vec![
            Arc::new(0, 0, -1.0),
            Arc::new(0, 1, -1.0),
            Arc::new(1, 0, -1.0),
            Arc::new(1, 1, -1.0),
        ],
    )
    .unwrap();
    let mut state = init_state(&p, &AuctionConfig::new(0.5)).unwrap();
    state
        .resolve_bids(vec![bid(0, 0, 1.0, 1.0), bid(1, 0, 2.0, 1.0)], true)
        .unwrap();
    assert_eq!(state.claim_list(0).lowest().unwrap().bidder, 1);
    assert_eq!(state.unsatisfied(), &[1.0, 0.0]);
}

#[test]
fn run_iteration_examples() {
    let p = single(-1.0);
    let cfg = AuctionConfig::new(1.0);
    let mut state = init_state(&p, &cfg).unwrap();
    let s = state.run_iteration(&cfg).unwrap();
    assert_eq!((s.bids, s.satisfied), (1, 1));
    assert_eq!(state.extract_plan().unwrap().0.flow(0, 0), 1.0);

    let idle = state.run_iteration(&cfg).unwrap();
    assert_eq!(idle.bids, 0);
    assert_eq!(state.iterations(), 1);
}

#[test]
fn run_auction_examples() {
    let r = run_auction(&single(-3.0), &AuctionConfig::new(1.0)).unwrap();
    assert_eq!(r.primal_cost, -3.0);
    assert_eq!(r.plan.flow(0, 0), 1.0);
    assert_eq!(r.gap, 0.0);

    let p = two_by_two();
    let r = run_auction(&p, &AuctionConfig::new(0.25)).unwrap();
    assert_eq!(r.primal_cost, -2.0);
    assert!(r.gap <= 0.5);
    assert!(p
        .check_epsilon_cs(&r.plan, r.prices.as_slice(), 0.25)
        .holds());

    let r = run_auction(&p, &AuctionConfig::new(0.5)).unwrap();
    assert_eq!(r.primal_cost, -2.0);
}

#[test]
fn run_auction_rejects_infeasible() {
    let p = TransportProblem::new(
        vec![1.0, 1.0],
        vec![1.0, 1.0],
        vec![Arc::new(0, 0, -1.0), Arc::new(1, 0, -1.0)],
    )
    .unwrap();
    assert_eq!(
        run_auction(&p, &AuctionConfig::new(1.0)).unwrap_err(),
        AuctionError::Infeasible
    );
}

#[test]
fn bid_cap_is_reported() {
    let p = two_by_two();
    let err = run_auction(&p, &AuctionConfig::new(1e-6).with_max_bids(1)).unwrap_err();
    assert!(matches!(err, AuctionError::BidCapExceeded { cap: 1, .. }));
}

#[test]
fn extract_plan_merges_claims_of_one_bidder() {
    let p = single(-1.0);
    let mut state = init_state(&p, &AuctionConfig::new(1.0)).unwrap();
    assert!(matches!(
        state.extract_plan(),
        Err(AuctionError::NotTerminated { .. })
    ));
    state
        .resolve_bids(vec![bid(0, 0, 1.0, 0.4)], false)
        .unwrap();
    state
        .resolve_bids(vec![bid(0, 0, 1.5, 0.6)], false)
        .unwrap();
    assert_eq!(state.claim_list(0).len(), 2);
    let (plan, cost) = state.extract_plan().unwrap();
    assert_eq!(plan.len(), 1);
    assert_eq!(plan.flow(0, 0), 1.0);
    assert_eq!(cost, -1.0);
}

#[test]
fn scaled_examples() {
    let p = two_by_two();
    let flat = ScalingSchedule::new(0.25, 4.0, 0.25).unwrap();
    let a = run_scaled(&p, &AuctionConfig::new(0.25), &flat).unwrap();
    let b = run_auction(&p, &AuctionConfig::new(0.25)).unwrap();
    assert_eq!(
        (a.primal_cost, a.bids, a.prices.clone()),
        (b.primal_cost, b.bids, b.prices.clone())
    );

    let s = ScalingSchedule::new(2.0, 4.0, 0.125).unwrap();
    let r = run_scaled(&p, &AuctionConfig::new(0.125), &s).unwrap();
    assert!(r.gap <= 2.0 * 0.125);
    assert_eq!(r.epsilon_final, 0.125);
}
