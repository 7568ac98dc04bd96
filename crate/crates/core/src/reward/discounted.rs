//! Expected discounted reward over an infinite horizon.
//!
//! The integral splits at the jump epochs: segment `k` contributes its
//! discount weight times the expected reward at jump `k`. The weights decay
//! geometrically, so truncating at a depth `K` leaves a tail of at most
//! `sup|r| * (omega/(omega+beta))^(K+1) / beta` for bounded rewards.

use super::discount::{discount_weight, discount_weight_tail};
use super::event_tree::{jump_reward_sequence, mc_jump_tail, TreeOptions};
use super::{DiscountParams, EstimateMethod, RewardEstimate, RewardSpec};
use crate::error::Error;
use crate::model::{IdleEventPolicy, ModelConfig, SystemState};

/// Expected value of `integral_0^inf e^(-beta t) r(X(t)) dt` starting from
/// `initial`.
pub fn expected_reward_discounted(
    cfg: &ModelConfig,
    initial: &SystemState,
    spec: &RewardSpec,
    params: &DiscountParams,
) -> Result<RewardEstimate, Error> {
    cfg.ensure_valid()?;
    cfg.check_state(initial)?;
    params.check(cfg, spec)?;

    let omega = cfg.total_event_rate();
    let beta = params.discount_rate;
    let depth = params.exact_depth;

    let tree = jump_reward_sequence(
        cfg,
        initial,
        spec,
        depth,
        TreeOptions {
            node_budget: params.node_budget,
            idle_policy: params.idle_policy,
        },
    )?;
    let exact_depth = tree.completed;

    let mut value = discount_weight(omega, beta, 0) * spec.evaluate(cfg, initial)?;
    for k in 1..=exact_depth {
        value += discount_weight(omega, beta, k) * tree.values[k - 1];
    }

    let mut mc_se = 0.0;
    let mut samples = 0u64;
    if exact_depth < depth {
        if params.idle_policy == IdleEventPolicy::Drop {
            return Err(Error::capacity(format!(
                "exact tree only reached depth {exact_depth} of {depth} and the \
                 sub-stochastic idle policy has no Monte Carlo fallback; raise the node budget"
            )));
        }
        let depth_weights: Vec<f64> = (exact_depth + 1..=depth)
            .map(|k| discount_weight(omega, beta, k))
            .collect();
        let (mc_value, se) = mc_jump_tail(
            cfg,
            initial,
            spec,
            exact_depth + 1,
            &depth_weights,
            params.mc_fallback_samples,
            params.seed,
        )?;
        value += mc_value;
        mc_se = se;
        samples = params.mc_fallback_samples;
    }

    let (bound, heuristic) = match spec.bound() {
        Some(sup) => (sup * discount_weight_tail(omega, beta, depth) + mc_se, false),
        None => (mc_se, true),
    };

    Ok(RewardEstimate {
        value,
        truncation_error_bound: bound,
        bound_is_heuristic: heuristic,
        mc_standard_error: mc_se,
        method: if samples == 0 {
            EstimateMethod::ExactTree
        } else {
            EstimateMethod::HybridTreeMc
        },
        samples_used: samples,
    })
}
