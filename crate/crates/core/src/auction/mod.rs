//! The general auction for real-valued transport problems.
//!
//! Each iteration has a bidding phase, in which unsatisfied sinks bid on the
//! lot offering the best expense, and a claims phase, in which each lot
//! evicts its cheapest claims to make room for higher bids.

mod claims;
mod run;
mod state;

pub use claims::{Claim, ClaimList};
pub use run::{run_auction, run_auction_with, run_scaled, run_scaled_with, ScalingSchedule};
pub use state::{
    init_state, AuctionConfig, AuctionError, AuctionState, Bid, BidderStrategy, IterationSummary,
    LotPricing, ResolveSummary,
};

#[cfg(test)]
mod tests;
