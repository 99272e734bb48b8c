//! Query-efficient multi-item auctions with estimated bidder types.
//!
//! The pipeline has three stages:
//!
//! 1. [`estimation`]: a Gaussian KDE per bidder-item pair is fitted to
//!    historical bids and sampled by rejection to obtain a confidence interval
//!    for the bidder's type.
//! 2. [`winnowing`]: per item, bidders whose interval cannot reach the
//!    interval with the highest upper bound are dropped.
//! 3. [`mechanism`]: short intervals are priced at their lower bound, long
//!    ones by querying the bidder, and each item is sold by second price.
//!
//! [`simulation`] reproduces the synthetic experiment protocol on top of this,
//! and [`theory`] counts the allocations that bundling would have to search.

pub mod error;
pub mod estimation;
pub mod grid;
pub mod mechanism;
pub mod rng;
pub mod simulation;
pub mod theory;
pub mod winnowing;

pub use error::{AuctionError, Result};
pub use estimation::{
    estimate_all_intervals, EstimationParams, HistoricalDataset, Interval, IntervalMatrix, ItemBounds,
};
pub use grid::Grid;
pub use mechanism::{
    allocate_vcg, classify_and_estimate, compute_n_star, compute_regret, run_mechanism, tune_threshold, AuctionOutcome,
    EstimatedTypes, MechanismParams, Provenance,
};
pub use simulation::{Method, ScenarioConfig, SweepRecord, TrueWorld};
pub use winnowing::{winnow, WinnowResult};
