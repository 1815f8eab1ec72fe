//! Discrete optimal transport by auction.
//!
//! The [`auction`] module holds the general auction for real-valued weights
//! and costs. [`classic`] has the assignment auction and its extensions for
//! integer data, [`oracle`] an exact solver used as ground truth, and
//! [`generate`] seeded problem families.

pub mod auction;
pub mod bench;
pub mod classic;
pub mod generate;
pub mod io;
pub mod oracle;
pub mod solve;
pub mod transport;

pub use auction::{
    run_auction, run_scaled, AuctionConfig, AuctionError, BidderStrategy, ScalingSchedule,
};
pub use transport::{
    Arc, PriceVector, SimplifiedPlan, SolveReport, TransportPlan, TransportProblem,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/problems.md")]
    mod problems {}
    #[doc = include_str!("../../../book/src/general-auction.md")]
    mod general_auction {}
    #[doc = include_str!("../../../book/src/scaling.md")]
    mod scaling {}
    #[doc = include_str!("../../../book/src/classic.md")]
    mod classic {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/generators.md")]
    mod generators {}
    #[doc = include_str!("../../../book/src/file-format.md")]
    mod file_format {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
}
