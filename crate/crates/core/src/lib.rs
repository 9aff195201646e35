//! Budget-constrained bidding in repeated first-price auctions.
//!
//! A bidder with a fixed budget `B` faces `T` first-price auctions. Its
//! value in period `t` is drawn from `F_t` (possibly nonstationary) and the
//! highest competing bid from a fixed but unknown `G`. The crate provides
//!
//! * [`policy::DualBidder`], a dual-gradient-descent bidder that shades
//!   values by `1 + mu`, best-responds to the empirical CDF of past
//!   competing bids, and paces spend towards a per-period plan;
//! * offline benchmarks in [`benchmarks`]: the Lagrangian bound
//!   `V^LR(mu*)`, the ideal allocation, plan-constrained optima and an exact
//!   small-instance oracle;
//! * deviation measures in [`nonstationarity`];
//! * a seeded Monte-Carlo harness with the three experiments and the
//!   lower-bound families in [`sim`].
//!
//! ```
//! use fpa_bidding::model::{AuctionParams, BudgetPlan, CompetitorModel, Instance, ValueDistribution};
//! use fpa_bidding::policy::DualConfig;
//! use fpa_bidding::sim::run_episode;
//!
//! let params = AuctionParams::new(1.0, 2.0, 100, 20.0).unwrap();
//! let instance = Instance::stationary(
//!     params,
//!     ValueDistribution::uniform(1.0, 2.0),
//!     CompetitorModel::uniform(1.0, 2.0),
//! )
//! .unwrap();
//! let plan = BudgetPlan::uniform(&params);
//! let episode = run_episode(&instance, &plan, DualConfig::default_for(&params), 7).unwrap();
//! assert!(episode.total_spend <= 20.0 + 1e-9);
//! ```

pub mod benchmarks;
pub mod ecdf;
pub mod error;
pub mod model;
pub mod nonstationarity;
pub mod optimizer;
pub mod policy;
pub mod sim;

pub use error::{Error, Result};
