//! Direct Monte Carlo of the cumulative reward.
//!
//! Simulates the continuous-time chain itself (true exponential holding
//! times at the state-dependent total rate) and accumulates reward times
//! holding time along each path. This is a third, series-free route to
//! `E[integral_0^t r(X(s)) ds]`, used to cross-check the event-tree
//! evaluator and the truncated-generator oracle.

use crate::error::Error;
use crate::model::{route_among, sample_distinct, ModelConfig, SystemState};
use crate::reward::{EstimateMethod, RewardEstimate, RewardSpec};
use crate::rng::RandomStream;
use rayon::prelude::*;

/// Unbiased estimate of the expected cumulative reward over `[0, horizon]`.
pub fn mc_reward_estimate(
    cfg: &ModelConfig,
    initial: &SystemState,
    spec: &RewardSpec,
    horizon: f64,
    paths: u64,
    seed: u64,
) -> Result<RewardEstimate, Error> {
    cfg.ensure_valid()?;
    cfg.check_state(initial)?;
    if paths == 0 {
        return Err(Error::validation("paths must be at least 1"));
    }
    if !(horizon >= 0.0) || !horizon.is_finite() {
        return Err(Error::validation(format!(
            "horizon must be nonnegative and finite, got {horizon}"
        )));
    }

    let totals: Vec<f64> = (0..paths)
        .into_par_iter()
        .map(|path| -> Result<f64, Error> {
            let mut rng = RandomStream::substream(seed, path);
            let mut state = initial.clone();
            let mut candidates: Vec<usize> = (0..cfg.server_count).collect();
            let mut now = 0.0f64;
            let mut acc = 0.0f64;
            loop {
                let busy_rate: f64 = (0..cfg.server_count)
                    .filter(|&j| state.queue(j) > 0)
                    .map(|j| cfg.service_rates[j])
                    .sum();
                let total_rate = cfg.arrival_rate + busy_rate;
                let reward = spec.evaluate(cfg, &state)?;
                let dwell = rng.exponential(total_rate);
                if now + dwell >= horizon {
                    acc += reward * (horizon - now);
                    break;
                }
                acc += reward * dwell;
                now += dwell;

                if rng.uniform() * total_rate < cfg.arrival_rate {
                    for (slot, server) in candidates.iter_mut().enumerate() {
                        *server = slot;
                    }
                    sample_distinct(&mut candidates, cfg.choice_count, &mut rng);
                    let target =
                        route_among(cfg, &state, &candidates[..cfg.choice_count], &mut rng);
                    state.0[target] += 1;
                } else {
                    // pick the completing server proportionally to its rate
                    let mut u = rng.uniform() * busy_rate;
                    let mut chosen = None;
                    for j in 0..cfg.server_count {
                        if state.queue(j) > 0 {
                            u -= cfg.service_rates[j];
                            if u <= 0.0 {
                                chosen = Some(j);
                                break;
                            }
                        }
                    }
                    // rounding may leave u slightly positive; take the last busy server
                    let target = chosen.unwrap_or_else(|| {
                        (0..cfg.server_count)
                            .rev()
                            .find(|&j| state.queue(j) > 0)
                            .expect("busy_rate > 0 implies a busy server")
                    });
                    state.0[target] -= 1;
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
    let se = (variance / n).sqrt();
    Ok(RewardEstimate {
        value: mean,
        truncation_error_bound: se,
        bound_is_heuristic: true,
        mc_standard_error: se,
        method: EstimateMethod::MonteCarlo,
        samples_used: paths,
    })
}
