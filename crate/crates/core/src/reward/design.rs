//! Grid evaluation of design criteria over candidate configurations.
//!
//! For each candidate the discounted rewards under the min- and max-utility
//! specs are computed from a common initial state; the report carries the
//! three arg-optima (largest min-utility value, smallest max-utility value,
//! smallest gap) and whether the two threshold criteria hold.

use super::{expected_reward_discounted, DiscountParams, RewardSpec};
use crate::error::Error;
use crate::model::{IdleEventPolicy, ModelConfig, SystemState};
use serde::{Deserialize, Serialize};

/// Shared evaluation knobs for a design sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignOptions {
    pub tail_epsilon: f64,
    pub node_budget: usize,
    pub mc_fallback_samples: u64,
    pub seed: u64,
    pub idle_policy: IdleEventPolicy,
}

impl Default for DesignOptions {
    fn default() -> Self {
        DesignOptions {
            tail_epsilon: DiscountParams::DEFAULT_TAIL_EPSILON,
            node_budget: 5_000_000,
            mc_fallback_samples: 10_000,
            seed: 0,
            idle_policy: IdleEventPolicy::SelfLoop,
        }
    }
}

/// One candidate's discounted values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignEvaluation {
    pub index: usize,
    pub min_utility_value: f64,
    pub max_utility_value: f64,
    pub gap: f64,
    pub min_utility_bound: f64,
    pub max_utility_bound: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignReport {
    pub rows: Vec<DesignEvaluation>,
    /// Candidate maximizing the discounted min-utility reward.
    pub best_min_index: usize,
    /// Candidate minimizing the discounted max-utility reward.
    pub best_max_index: usize,
    /// Candidate minimizing the gap between the two.
    pub best_gap_index: usize,
    /// Whether the optimal values are within `delta_one` of each other.
    pub criterion_one_met: bool,
    /// Whether the smallest gap is below `delta_two`.
    pub criterion_two_met: bool,
    pub delta_one: f64,
    pub delta_two: f64,
    pub discount_rate: f64,
}

/// Evaluate the design criteria over a finite candidate grid.
pub fn evaluate_design_criteria(
    candidates: &[ModelConfig],
    initial: &SystemState,
    discount_rate: f64,
    delta_one: f64,
    delta_two: f64,
    opts: &DesignOptions,
) -> Result<DesignReport, Error> {
    if candidates.is_empty() {
        return Err(Error::validation("candidate grid is empty"));
    }
    let mut rows = Vec::with_capacity(candidates.len());
    for (index, cfg) in candidates.iter().enumerate() {
        cfg.check_state(initial)
            .map_err(|e| Error::validation(format!("candidate {index}: {e}")))?;
        let mut params = DiscountParams::for_spec(
            cfg,
            discount_rate,
            &RewardSpec::MinUtility,
            opts.tail_epsilon,
        )?;
        params.node_budget = opts.node_budget;
        params.mc_fallback_samples = opts.mc_fallback_samples;
        params.seed = opts.seed;
        params.idle_policy = opts.idle_policy;

        let lo = expected_reward_discounted(cfg, initial, &RewardSpec::MinUtility, &params)?;
        let hi = expected_reward_discounted(cfg, initial, &RewardSpec::MaxUtility, &params)?;
        rows.push(DesignEvaluation {
            index,
            min_utility_value: lo.value,
            max_utility_value: hi.value,
            gap: hi.value - lo.value,
            min_utility_bound: lo.truncation_error_bound,
            max_utility_bound: hi.truncation_error_bound,
        });
    }

    let best_min_index = argbest(&rows, |r| r.min_utility_value, true);
    let best_max_index = argbest(&rows, |r| r.max_utility_value, false);
    let best_gap_index = argbest(&rows, |r| r.gap, false);

    let spread = (rows[best_max_index].max_utility_value
        - rows[best_min_index].min_utility_value)
        .abs();
    Ok(DesignReport {
        criterion_one_met: spread < delta_one,
        criterion_two_met: rows[best_gap_index].gap < delta_two,
        best_min_index,
        best_max_index,
        best_gap_index,
        rows,
        delta_one,
        delta_two,
        discount_rate,
    })
}

fn argbest(rows: &[DesignEvaluation], key: impl Fn(&DesignEvaluation) -> f64, max: bool) -> usize {
    let mut best = 0;
    for i in 1..rows.len() {
        let better = if max {
            key(&rows[i]) > key(&rows[best])
        } else {
            key(&rows[i]) < key(&rows[best])
        };
        if better {
            best = i;
        }
    }
    best
}
