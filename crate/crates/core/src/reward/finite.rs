//! Expected cumulative reward over a finite horizon.
//!
//! Conditioning on the number of uniformized events in `[0, t]` splits the
//! integral into equal-mean segments: given `n` events, each of the `n + 1`
//! segments contributes `t/(n+1)` expected length, and the reward on the
//! k-th segment is the jump-epoch expectation at depth `k`. The outer
//! Poisson sum is truncated at a controlled tail; jump expectations are
//! exact up to the configured depth and estimated by common-random-number
//! Monte Carlo beyond it.

use super::event_tree::{jump_reward_sequence, mc_jump_tail, TreeOptions};
use super::poisson::PoissonWeights;
use super::{EstimateMethod, HorizonParams, RewardEstimate, RewardSpec};
use crate::error::Error;
use crate::model::{IdleEventPolicy, ModelConfig, SystemState};

/// Expected value of the cumulative reward over `[0, params.horizon]`
/// starting from `initial`.
pub fn expected_reward_finite(
    cfg: &ModelConfig,
    initial: &SystemState,
    spec: &RewardSpec,
    params: &HorizonParams,
) -> Result<RewardEstimate, Error> {
    cfg.ensure_valid()?;
    cfg.check_state(initial)?;
    params.check(cfg)?;

    let t = params.horizon;
    let n_max = params.poisson_terms;
    let weights = PoissonWeights::terms(cfg.total_event_rate() * t, n_max);
    let initial_reward = spec.evaluate(cfg, initial)?;

    let tree = jump_reward_sequence(
        cfg,
        initial,
        spec,
        params.exact_depth.min(n_max),
        TreeOptions {
            node_budget: params.node_budget,
            idle_policy: params.idle_policy,
        },
    )?;
    let exact_depth = tree.completed;

    // Exact part: value = r(x) t p_0 + sum_n p_n t/(n+1) (r(x) + sum_{k<=n} R_k),
    // with the inner sum capped at the exact depth.
    let mut running_prefix = initial_reward;
    let mut value = initial_reward * t * weights.weight(0);
    for n in 1..=n_max {
        if n <= exact_depth {
            running_prefix += tree.values[n - 1];
        }
        value += weights.weight(n) * t / (n + 1) as f64 * running_prefix;
    }

    // Monte Carlo part: the depths the tree did not reach, weighted by how
    // much segment length each depth contributes across the Poisson terms.
    let mut mc_se = 0.0;
    let mut samples = 0u64;
    if exact_depth < n_max {
        if params.idle_policy == IdleEventPolicy::Drop {
            return Err(Error::capacity(format!(
                "exact tree only reached depth {exact_depth} of {n_max} and the \
                 sub-stochastic idle policy has no Monte Carlo fallback; raise the node budget"
            )));
        }
        // depth_weight[k - (exact_depth+1)] = sum_{n >= k} p_n t/(n+1)
        let mut depth_weights = vec![0.0; n_max - exact_depth];
        let mut suffix = 0.0;
        for n in (exact_depth + 1..=n_max).rev() {
            suffix += weights.weight(n) * t / (n + 1) as f64;
            depth_weights[n - exact_depth - 1] = suffix;
        }
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
        Some(sup) => (weights.tail() * t * sup + mc_se, false),
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SelectionKind;

    fn tandem(m: usize, lambda: f64, mu: Vec<f64>, g: Vec<f64>, d: usize) -> ModelConfig {
        ModelConfig {
            server_count: m,
            arrival_rate: lambda,
            service_rates: mu,
            preference: g,
            choice_count: d,
            selection: SelectionKind::Tandem,
        }
    }

    #[test]
    fn constant_reward_integrates_to_ct() {
        let cfg = tandem(2, 1.0, vec![1.0, 2.0], vec![0.4, 0.6], 2);
        let t = 1.5;
        let params = HorizonParams::for_model(&cfg, t).unwrap();
        let est = expected_reward_finite(
            &cfg,
            &SystemState::zeros(2),
            &RewardSpec::Constant(3.0),
            &params,
        )
        .unwrap();
        assert!(
            (est.value - 3.0 * t).abs() / (3.0 * t) < 1e-9,
            "{}",
            est.value
        );
        assert_eq!(est.method, EstimateMethod::ExactTree);
        assert!(!est.bound_is_heuristic);
    }

    #[test]
    fn single_poisson_term_matches_hand_formula() {
        // With a loose tail target, one Poisson term is admissible and the
        // value reduces to r(x) t e^{-wt} + p_1 t/2 (r(x) + R_1).
        let cfg = tandem(1, 1.0, vec![2.0], vec![1.0], 1);
        let x = SystemState::from(vec![1]);
        let spec = RewardSpec::TotalQueueLength;
        let mut params = HorizonParams::for_model(&cfg, 0.5).unwrap();
        params.poisson_terms = 1;
        params.exact_depth = 1;
        params.tail_epsilon = 1.0;
        let est = expected_reward_finite(&cfg, &x, &spec, &params).unwrap();

        let omega = 3.0f64;
        let t = 0.5;
        let p0 = (-omega * t).exp();
        let p1 = p0 * omega * t;
        // R_1 from state (1): up with prob 1/3 to 2 jobs, down 2/3 to 0.
        let r1 = (1.0 / 3.0) * 2.0 + (2.0 / 3.0) * 0.0;
        let want = 1.0 * t * p0 + p1 * t / 2.0 * (1.0 + r1);
        assert!((est.value - want).abs() < 1e-12, "{} vs {want}", est.value);
    }

    #[test]
    fn short_horizon_value_approaches_initial_reward_rate() {
        let cfg = tandem(2, 1.0, vec![1.0, 1.0], vec![0.5, 0.5], 2);
        let x = SystemState::from(vec![1, 0]);
        let t = 1e-6;
        let params = HorizonParams::for_model(&cfg, t).unwrap();
        let est =
            expected_reward_finite(&cfg, &x, &RewardSpec::MaxUtility, &params).unwrap();
        // r(x) = 0.75 at this state; over a vanishing horizon value/t -> r(x)
        assert!((est.value / t - 0.75).abs() < 1e-5, "{}", est.value / t);
    }

    #[test]
    fn hybrid_fallback_stays_inside_exact_bounds() {
        // Force a tiny node budget so most depths go through Monte Carlo,
        // then compare against the fully exact value.
        let cfg = tandem(2, 1.0, vec![1.0, 2.0], vec![0.5, 0.5], 2);
        let x = SystemState::from(vec![1, 1]);
        let spec = RewardSpec::MinUtility;
        let exact_params = HorizonParams::for_model(&cfg, 1.0).unwrap();
        let exact = expected_reward_finite(&cfg, &x, &spec, &exact_params).unwrap();
        assert_eq!(exact.method, EstimateMethod::ExactTree);

        let mut hybrid_params = exact_params.clone();
        hybrid_params.node_budget = 200;
        hybrid_params.mc_fallback_samples = 60_000;
        hybrid_params.seed = 5;
        let hybrid = expected_reward_finite(&cfg, &x, &spec, &hybrid_params).unwrap();
        assert_eq!(hybrid.method, EstimateMethod::HybridTreeMc);
        assert!(hybrid.samples_used == 60_000);
        assert!(
            (hybrid.value - exact.value).abs()
                < 4.0 * hybrid.mc_standard_error.max(1e-5),
            "{} vs {} (se {})",
            hybrid.value,
            exact.value,
            hybrid.mc_standard_error
        );
    }

    #[test]
    fn unbounded_reward_flags_heuristic_bound() {
        let cfg = tandem(1, 1.0, vec![2.0], vec![1.0], 1);
        let params = HorizonParams::for_model(&cfg, 1.0).unwrap();
        let est = expected_reward_finite(
            &cfg,
            &SystemState::from(vec![1]),
            &RewardSpec::TotalQueueLength,
            &params,
        )
        .unwrap();
        assert!(est.bound_is_heuristic);
    }

    #[test]
    fn widening_truncation_stays_within_reported_bound() {
        let cfg = tandem(2, 2.0, vec![1.0, 2.0], vec![0.5, 0.5], 1);
        let x = SystemState::zeros(2);
        let spec = RewardSpec::MaxUtility;
        let mut narrow = HorizonParams::for_model(&cfg, 1.0).unwrap();
        narrow.tail_epsilon = 1e-4;
        let weights = PoissonWeights::with_tail(cfg.total_event_rate(), 1e-4).unwrap();
        narrow.poisson_terms = weights.len() - 1;
        narrow.exact_depth = narrow.poisson_terms;
        let coarse = expected_reward_finite(&cfg, &x, &spec, &narrow).unwrap();

        let fine_params = HorizonParams::for_model(&cfg, 1.0).unwrap();
        let fine = expected_reward_finite(&cfg, &x, &spec, &fine_params).unwrap();
        assert!(
            (fine.value - coarse.value).abs() <= coarse.truncation_error_bound,
            "drift {} exceeds bound {}",
            (fine.value - coarse.value).abs(),
            coarse.truncation_error_bound
        );
    }
}
