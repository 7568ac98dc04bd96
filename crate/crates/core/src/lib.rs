//! Core engine for supermarket-style load balancing across heterogeneous servers.
//!
//! The model: `M` exponential servers with individual service rates and
//! preference weights, fed by one Poisson arrival stream. Each arrival samples
//! `d` servers uniformly at random and joins the sampled server with the
//! lowest selection utility (a normalized score combining queue length,
//! service rate, and preference). The crate computes performance numbers for
//! this model along three independent routes:
//!
//! - [`sim`] — discrete-event Monte Carlo of the untruncated model, producing
//!   per-server mean queue lengths with confidence intervals.
//! - [`reward`] — exact series evaluation of finite-horizon and discounted
//!   cumulative rewards over the uniformized jump chain, with a Monte Carlo
//!   fallback past a configurable exact depth.
//! - [`oracle`] — brute-force ground truth on a buffer-truncated state space:
//!   explicit generator, transient integration, resolvent solves, and
//!   stationary distributions.
//!
//! The three routes are kept algorithmically independent so they can
//! cross-validate each other; the test suites lean on that heavily.

pub mod error;
pub mod model;
pub mod oracle;
pub mod reward;
pub mod rng;
pub mod sim;

pub use error::Error;
pub use model::{
    jump_distribution, rank_selection_probability, route_arrival, EventTag, IdleEventPolicy,
    ModelConfig, SelectionKind, SelectionProfile, SystemState, TransitionDistribution,
};
pub use reward::{
    discount_weight, expected_reward_discounted, expected_reward_finite, DiscountParams,
    EstimateMethod, HorizonParams, RewardEstimate, RewardSpec,
};
pub use rng::RandomStream;
pub use sim::{mc_reward_estimate, simulate, SimPlan, SimStats};
