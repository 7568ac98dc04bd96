//! Exact expected rewards at the jump epochs of the uniformized chain.
//!
//! The value at depth `k` is the expectation of the reward one state-jump
//! tree level `k` below the initial state. Because the embedded chain is
//! Markov and the successor law is recomputed at every node from that node's
//! own state, probability mass reaching the same state through different
//! event histories can be pooled; each level is kept as an ordered
//! state-to-mass map rather than a literal tree, which is exact and keeps
//! the level size polynomial instead of `(2M+1)^k`. Under the default idle
//! policy every level is a full probability distribution (self-loops carry
//! the idle-server mass); under [`IdleEventPolicy::Drop`] levels lose mass
//! at states with idle servers and the shortfall propagates, reproducing the
//! sub-stochastic reading of the transition law.

use super::RewardSpec;
use crate::error::Error;
use crate::model::{
    jump_distribution, IdleEventPolicy, ModelConfig, SelectionProfile, SystemState,
};
use crate::rng::RandomStream;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Budget and policy knobs for the exact tree.
#[derive(Debug, Clone, Copy)]
pub struct TreeOptions {
    /// Maximum number of node expansions across all levels.
    pub node_budget: usize,
    pub idle_policy: IdleEventPolicy,
}

impl Default for TreeOptions {
    fn default() -> Self {
        TreeOptions {
            node_budget: 5_000_000,
            idle_policy: IdleEventPolicy::SelfLoop,
        }
    }
}

/// Expected rewards at jump epochs `1..=completed`, possibly fewer than
/// requested if the node budget ran out.
#[derive(Debug, Clone)]
pub struct JumpRewardSequence {
    pub values: Vec<f64>,
    pub completed: usize,
    pub nodes_expanded: usize,
}

/// Compute expected rewards at the first `depth` jump epochs. Stops early
/// (without error) when the next level would exceed the node budget; the
/// caller decides whether to fall back to Monte Carlo.
pub fn jump_reward_sequence(
    cfg: &ModelConfig,
    initial: &SystemState,
    spec: &RewardSpec,
    depth: usize,
    opts: TreeOptions,
) -> Result<JumpRewardSequence, Error> {
    cfg.ensure_valid()?;
    cfg.check_state(initial)?;

    let mut level: BTreeMap<SystemState, f64> = BTreeMap::new();
    level.insert(initial.clone(), 1.0);
    let mut values = Vec::with_capacity(depth);
    let mut nodes_expanded = 0usize;

    for _ in 0..depth {
        if nodes_expanded + level.len() > opts.node_budget {
            break;
        }
        nodes_expanded += level.len();

        let mut next: BTreeMap<SystemState, f64> = BTreeMap::new();
        for (state, &mass) in &level {
            let profile = SelectionProfile::compute(cfg, state)?;
            let dist = jump_distribution(cfg, state, &profile, opts.idle_policy)?;
            for entry in dist.entries {
                *next.entry(entry.state).or_insert(0.0) += mass * entry.probability;
            }
            if dist.self_loop_probability > 0.0 {
                *next.entry(state.clone()).or_insert(0.0) +=
                    mass * dist.self_loop_probability;
            }
        }

        let mut expected = 0.0;
        for (state, &mass) in &next {
            expected += mass * spec.evaluate(cfg, state)?;
        }
        values.push(expected);
        level = next;
    }

    Ok(JumpRewardSequence {
        completed: values.len(),
        values,
        nodes_expanded,
    })
}

/// Exact expected reward at the k-th jump epoch (`k >= 1`). Errors with a
/// capacity message when the tree cannot reach depth `k` within the node
/// budget; the Monte Carlo fallback covers that regime.
pub fn expected_reward_at_jump(
    cfg: &ModelConfig,
    initial: &SystemState,
    spec: &RewardSpec,
    k: usize,
    opts: TreeOptions,
) -> Result<f64, Error> {
    if k == 0 {
        return Err(Error::validation("jump index k must be at least 1"));
    }
    let seq = jump_reward_sequence(cfg, initial, spec, k, opts)?;
    if seq.completed < k {
        return Err(Error::capacity(format!(
            "event tree hit the node budget of {} at depth {}; depth {k} needs the Monte Carlo fallback",
            opts.node_budget, seq.completed
        )));
    }
    Ok(seq.values[k - 1])
}

/// Monte Carlo estimate of `sum_j weights[j] * r(X_{first_k + j})` over
/// jump-chain paths, one substream per path so the result is independent of
/// thread count. All depths share the same paths, which is the common random
/// numbers scheme the series evaluators rely on. Returns `(mean, standard
/// error)`.
pub(crate) fn mc_jump_tail(
    cfg: &ModelConfig,
    initial: &SystemState,
    spec: &RewardSpec,
    first_k: usize,
    weights: &[f64],
    paths: u64,
    seed: u64,
) -> Result<(f64, f64), Error> {
    debug_assert!(first_k >= 1 && !weights.is_empty());
    if paths == 0 {
        return Err(Error::validation(
            "Monte Carlo fallback requested with zero paths",
        ));
    }
    let last_k = first_k + weights.len() - 1;
    let totals: Vec<f64> = (0..paths)
        .into_par_iter()
        .map(|path| -> Result<f64, Error> {
            let mut rng = RandomStream::substream(seed, path);
            let mut state = initial.clone();
            let mut acc = 0.0;
            for k in 1..=last_k {
                let profile = SelectionProfile::compute(cfg, &state)?;
                let dist =
                    jump_distribution(cfg, &state, &profile, IdleEventPolicy::SelfLoop)?;
                if let (Some(next), _) = dist.sample(&mut rng) {
                    state = next.clone();
                }
                if k >= first_k {
                    acc += weights[k - first_k] * spec.evaluate(cfg, &state)?;
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let n = totals.len() as f64;
    let mean = totals.iter().sum::<f64>() / n;
    let variance = if totals.len() > 1 {
        totals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok((mean, (variance / n).sqrt()))
}
