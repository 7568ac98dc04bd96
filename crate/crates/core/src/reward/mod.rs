//! Reward specifications and the series evaluators for finite-horizon and
//! discounted cumulative rewards.

mod design;
mod discount;
mod discounted;
mod event_tree;
mod finite;
mod poisson;

pub use design::{evaluate_design_criteria, DesignEvaluation, DesignOptions, DesignReport};
pub use discount::{discount_weight, discount_weight_tail};
pub use discounted::expected_reward_discounted;
pub use event_tree::{
    expected_reward_at_jump, jump_reward_sequence, JumpRewardSequence, TreeOptions,
};
pub use finite::expected_reward_finite;
pub use poisson::PoissonWeights;

use crate::error::Error;
use crate::model::{IdleEventPolicy, ModelConfig, SelectionProfile, SystemState};
use serde::{Deserialize, Serialize};

/// A scalar reward attached to each state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RewardSpec {
    /// Smallest selection utility at the state; low when some server is very
    /// attractive.
    MinUtility,
    /// Largest selection utility at the state; the gap to [`MinUtility`]
    /// measures load imbalance.
    MaxUtility,
    /// Queue length of one server (0-based index).
    QueueLength(usize),
    /// Total number of jobs in the system.
    TotalQueueLength,
    Constant(f64),
}

impl RewardSpec {
    pub fn evaluate(&self, cfg: &ModelConfig, state: &SystemState) -> Result<f64, Error> {
        match *self {
            RewardSpec::MinUtility => Ok(SelectionProfile::compute(cfg, state)?.min_utility()),
            RewardSpec::MaxUtility => Ok(SelectionProfile::compute(cfg, state)?.max_utility()),
            RewardSpec::QueueLength(server) => {
                if server >= cfg.server_count {
                    return Err(Error::validation(format!(
                        "reward queue index {server} out of range for {} servers",
                        cfg.server_count
                    )));
                }
                cfg.check_state(state)?;
                Ok(f64::from(state.queue(server)))
            }
            RewardSpec::TotalQueueLength => {
                cfg.check_state(state)?;
                Ok(state.total() as f64)
            }
            RewardSpec::Constant(c) => Ok(c),
        }
    }

    /// Uniform bound on `|r|` over the whole state space, when one exists.
    /// Utilities live in `[0, 1]`; queue lengths are unbounded.
    pub fn bound(&self) -> Option<f64> {
        match *self {
            RewardSpec::MinUtility | RewardSpec::MaxUtility => Some(1.0),
            RewardSpec::Constant(c) => Some(c.abs()),
            RewardSpec::QueueLength(_) | RewardSpec::TotalQueueLength => None,
        }
    }
}

impl std::fmt::Display for RewardSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            RewardSpec::MinUtility => write!(f, "rmin"),
            RewardSpec::MaxUtility => write!(f, "rmax"),
            RewardSpec::QueueLength(i) => write!(f, "queue:{i}"),
            RewardSpec::TotalQueueLength => write!(f, "total"),
            RewardSpec::Constant(c) => write!(f, "constant:{c}"),
        }
    }
}

/// How a [`RewardEstimate`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimateMethod {
    /// Fully exact series over the event tree.
    ExactTree,
    /// Exact tree to some depth, Monte Carlo paths beyond.
    HybridTreeMc,
    /// Monte Carlo only.
    MonteCarlo,
}

/// A computed expected reward with its error accounting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RewardEstimate {
    pub value: f64,
    /// Deterministic truncation bound plus one Monte Carlo standard error.
    /// For unbounded rewards no a-priori truncation bound exists; the field
    /// then carries only the standard error and `bound_is_heuristic` is set.
    pub truncation_error_bound: f64,
    pub bound_is_heuristic: bool,
    /// Standard error of the Monte Carlo portion (zero when fully exact).
    pub mc_standard_error: f64,
    pub method: EstimateMethod,
    pub samples_used: u64,
}

/// Truncation controls for the finite-horizon evaluator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HorizonParams {
    /// Horizon `t`, time units.
    pub horizon: f64,
    /// Number of Poisson terms kept in the outer series (`n_max`).
    pub poisson_terms: usize,
    /// Depth to which jump rewards are computed exactly (`k_max`).
    pub exact_depth: usize,
    /// Bound required of the Poisson tail mass beyond `poisson_terms`.
    pub tail_epsilon: f64,
    /// Paths for the Monte Carlo fallback past the exact depth.
    pub mc_fallback_samples: u64,
    /// Cap on event-tree expansions before falling back.
    pub node_budget: usize,
    pub seed: u64,
    pub idle_policy: IdleEventPolicy,
}

impl HorizonParams {
    pub const DEFAULT_TAIL_EPSILON: f64 = 1e-10;
    pub const DEFAULT_NODE_BUDGET: usize = 5_000_000;
    pub const DEFAULT_MC_SAMPLES: u64 = 10_000;

    /// Consistent parameters for the given model and horizon: the Poisson
    /// series is truncated where its tail falls below the default epsilon,
    /// and the exact depth covers the whole series (the node budget decides
    /// at run time how deep the tree actually gets).
    pub fn for_model(cfg: &ModelConfig, horizon: f64) -> Result<Self, Error> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::validation(format!(
                "horizon: must be positive and finite, got {horizon}"
            )));
        }
        let weights = PoissonWeights::with_tail(
            cfg.total_event_rate() * horizon,
            Self::DEFAULT_TAIL_EPSILON,
        )?;
        let terms = (weights.len() - 1).max(1);
        Ok(HorizonParams {
            horizon,
            poisson_terms: terms,
            exact_depth: terms,
            tail_epsilon: Self::DEFAULT_TAIL_EPSILON,
            mc_fallback_samples: Self::DEFAULT_MC_SAMPLES,
            node_budget: Self::DEFAULT_NODE_BUDGET,
            seed: 0,
            idle_policy: IdleEventPolicy::SelfLoop,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Verify the declared invariants against a model.
    pub fn check(&self, cfg: &ModelConfig) -> Result<(), Error> {
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::validation("horizon must be positive and finite"));
        }
        if self.poisson_terms == 0 {
            return Err(Error::validation("poisson_terms must be at least 1"));
        }
        if self.exact_depth > self.poisson_terms {
            return Err(Error::validation(format!(
                "exact_depth {} exceeds poisson_terms {}",
                self.exact_depth, self.poisson_terms
            )));
        }
        if !(self.tail_epsilon >= 1e-13) {
            return Err(Error::validation(
                "tail_epsilon below 1e-13 is not resolvable in double precision",
            ));
        }
        let weights =
            PoissonWeights::terms(cfg.total_event_rate() * self.horizon, self.poisson_terms);
        if weights.tail() > self.tail_epsilon {
            return Err(Error::validation(format!(
                "poisson tail {} beyond {} terms exceeds tail_epsilon {}",
                weights.tail(),
                self.poisson_terms,
                self.tail_epsilon
            )));
        }
        Ok(())
    }
}

/// Truncation controls for the discounted evaluator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscountParams {
    /// Discount rate `beta`, per unit time.
    pub discount_rate: f64,
    /// Number of jump terms kept (`k_max`).
    pub exact_depth: usize,
    /// Bound required of the geometric tail beyond `exact_depth` (scaled by
    /// the reward bound, for bounded rewards).
    pub tail_epsilon: f64,
    pub mc_fallback_samples: u64,
    pub node_budget: usize,
    pub seed: u64,
    pub idle_policy: IdleEventPolicy,
}

impl DiscountParams {
    pub const DEFAULT_TAIL_EPSILON: f64 = 1e-10;

    /// Parameters whose geometric tail for a unit-bounded reward falls below
    /// the default epsilon.
    pub fn for_model(cfg: &ModelConfig, discount_rate: f64) -> Result<Self, Error> {
        if !(discount_rate > 0.0) || !discount_rate.is_finite() {
            return Err(Error::validation(format!(
                "discount rate: must be positive and finite, got {discount_rate}"
            )));
        }
        let omega = cfg.total_event_rate();
        let ratio = omega / (omega + discount_rate);
        // smallest K with ratio^(K+1) / beta <= epsilon
        let target = Self::DEFAULT_TAIL_EPSILON * discount_rate;
        let depth = (target.ln() / ratio.ln()).ceil().max(1.0) as usize;
        Ok(DiscountParams {
            discount_rate,
            exact_depth: depth,
            tail_epsilon: Self::DEFAULT_TAIL_EPSILON,
            mc_fallback_samples: HorizonParams::DEFAULT_MC_SAMPLES,
            node_budget: HorizonParams::DEFAULT_NODE_BUDGET,
            seed: 0,
            idle_policy: IdleEventPolicy::SelfLoop,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Parameters sized for a specific reward at a specific tail target:
    /// bounded rewards get a depth whose absolute tail (scaled by the reward
    /// bound) meets the target; unbounded rewards keep the unit-bound depth,
    /// since their error reporting is heuristic anyway.
    pub fn for_spec(
        cfg: &ModelConfig,
        discount_rate: f64,
        spec: &RewardSpec,
        tail_epsilon: f64,
    ) -> Result<Self, Error> {
        if !(tail_epsilon > 0.0) {
            return Err(Error::validation("tail_epsilon must be positive"));
        }
        let mut params = Self::for_model(cfg, discount_rate)?;
        params.tail_epsilon = tail_epsilon;
        let bound = spec.bound().unwrap_or(1.0);
        if bound > 0.0 {
            let omega = cfg.total_event_rate();
            let ratio = omega / (omega + discount_rate);
            let target = tail_epsilon * discount_rate / bound;
            params.exact_depth = (target.ln() / ratio.ln()).ceil().max(1.0) as usize;
        } else {
            params.exact_depth = 1;
        }
        Ok(params)
    }

    /// Verify the declared invariants against a model and reward. The tail
    /// check only applies to bounded rewards; queue-length rewards have no
    /// a-priori bound and get heuristic error reporting instead.
    pub fn check(&self, cfg: &ModelConfig, spec: &RewardSpec) -> Result<(), Error> {
        if !(self.discount_rate > 0.0) || !self.discount_rate.is_finite() {
            return Err(Error::validation("discount rate must be positive"));
        }
        if self.exact_depth == 0 {
            return Err(Error::validation("exact_depth must be at least 1"));
        }
        if let Some(bound) = spec.bound() {
            let tail = bound
                * discount_weight_tail(
                    cfg.total_event_rate(),
                    self.discount_rate,
                    self.exact_depth,
                );
            if tail > self.tail_epsilon {
                return Err(Error::validation(format!(
                    "geometric tail {tail} beyond depth {} exceeds tail_epsilon {}; raise exact_depth",
                    self.exact_depth, self.tail_epsilon
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SelectionKind;

    fn cfg2() -> ModelConfig {
        ModelConfig {
            server_count: 2,
            arrival_rate: 1.0,
            service_rates: vec![1.0, 1.0],
            preference: vec![0.5, 0.5],
            choice_count: 2,
            selection: SelectionKind::Tandem,
        }
    }

    #[test]
    fn min_utility_of_empty_state_is_inverse_server_count() {
        let cfg = cfg2();
        let r = RewardSpec::MinUtility
            .evaluate(&cfg, &SystemState::zeros(2))
            .unwrap();
        assert!((r - 0.5).abs() < 1e-15);
    }

    #[test]
    fn max_utility_hand_case() {
        let cfg = cfg2();
        let r = RewardSpec::MaxUtility
            .evaluate(&cfg, &SystemState::from(vec![1, 0]))
            .unwrap();
        assert!((r - 0.75).abs() < 1e-15);
    }

    #[test]
    fn constant_and_queue_rewards() {
        let cfg = cfg2();
        let x = SystemState::from(vec![3, 1]);
        assert_eq!(RewardSpec::Constant(3.5).evaluate(&cfg, &x).unwrap(), 3.5);
        assert_eq!(RewardSpec::QueueLength(0).evaluate(&cfg, &x).unwrap(), 3.0);
        assert_eq!(
            RewardSpec::TotalQueueLength.evaluate(&cfg, &x).unwrap(),
            4.0
        );
        assert!(RewardSpec::QueueLength(2).evaluate(&cfg, &x).is_err());
    }

    #[test]
    fn bounds() {
        assert_eq!(RewardSpec::MinUtility.bound(), Some(1.0));
        assert_eq!(RewardSpec::Constant(-2.0).bound(), Some(2.0));
        assert_eq!(RewardSpec::TotalQueueLength.bound(), None);
    }

    #[test]
    fn horizon_params_meet_their_own_invariants() {
        let cfg = cfg2();
        let params = HorizonParams::for_model(&cfg, 2.5).unwrap();
        params.check(&cfg).unwrap();
        assert!(params.exact_depth <= params.poisson_terms);
    }

    #[test]
    fn horizon_params_reject_insufficient_terms() {
        let cfg = cfg2();
        let mut params = HorizonParams::for_model(&cfg, 2.5).unwrap();
        params.poisson_terms = 2;
        params.exact_depth = 2;
        assert!(params.check(&cfg).is_err());
    }

    #[test]
    fn discount_params_meet_tail_bound() {
        let cfg = cfg2();
        let params = DiscountParams::for_model(&cfg, 1.0).unwrap();
        params.check(&cfg, &RewardSpec::MinUtility).unwrap();
        let tail = discount_weight_tail(cfg.total_event_rate(), 1.0, params.exact_depth);
        assert!(tail <= DiscountParams::DEFAULT_TAIL_EPSILON);
    }
}
