//! Next-event simulation engine.
//!
//! One arrival clock and one completion clock per busy server; each event
//! advances virtual time to the earliest clock. Exponential holding times
//! mean fresh clocks can be drawn at state changes without bias. Queue-length
//! and busy-time integrals accumulate over the measured window only.
//! Replications run in parallel on independent substreams and are reduced in
//! replication order, so results are bit-identical for a fixed seed
//! regardless of thread count.

use super::stats::mean_and_halfwidth;
use super::{SimPlan, SimStats};
use crate::error::Error;
use crate::model::{route_among, sample_distinct, ModelConfig, SystemState};
use crate::rng::RandomStream;
use rayon::prelude::*;

struct ReplicationResult {
    mean_queue: Vec<f64>,
    busy_fraction: Vec<f64>,
    throughput: Vec<f64>,
    arrivals: u64,
}

fn run_replication(cfg: &ModelConfig, plan: &SimPlan, replication: u32) -> ReplicationResult {
    let m = cfg.server_count;
    let mut rng = RandomStream::substream(plan.seed, u64::from(replication));
    let mut state = plan
        .initial_state
        .clone()
        .unwrap_or_else(|| SystemState::zeros(m));

    let horizon = plan.warmup_time + plan.measure_time;
    let measure_start = plan.warmup_time;

    let mut next_arrival = rng.exponential(cfg.arrival_rate);
    let mut next_completion = vec![f64::INFINITY; m];
    for server in 0..m {
        if state.queue(server) > 0 {
            next_completion[server] = rng.exponential(cfg.service_rates[server]);
        }
    }

    let mut queue_area = vec![0.0f64; m];
    let mut busy_area = vec![0.0f64; m];
    let mut completions = vec![0u64; m];
    let mut arrivals = 0u64;
    let mut now = 0.0f64;
    let mut candidates: Vec<usize> = (0..m).collect();

    loop {
        // earliest pending event
        let mut event_time = next_arrival;
        let mut event_server = None;
        for (server, &t) in next_completion.iter().enumerate() {
            if t < event_time {
                event_time = t;
                event_server = Some(server);
            }
        }
        let step_end = event_time.min(horizon);

        // accumulate integrals over the measured part of [now, step_end)
        let measured = (step_end.min(horizon) - now.max(measure_start)).max(0.0);
        if measured > 0.0 {
            for server in 0..m {
                let q = f64::from(state.queue(server));
                queue_area[server] += measured * q;
                if q > 0.0 {
                    busy_area[server] += measured;
                }
            }
        }

        if event_time >= horizon {
            break;
        }
        now = event_time;

        match event_server {
            None => {
                // arrival
                if now >= measure_start {
                    arrivals += 1;
                }
                for (slot, server) in candidates.iter_mut().enumerate() {
                    *server = slot;
                }
                sample_distinct(&mut candidates, cfg.choice_count, &mut rng);
                let target =
                    route_among(cfg, &state, &candidates[..cfg.choice_count], &mut rng);
                state.0[target] += 1;
                if state.queue(target) == 1 {
                    next_completion[target] = now + rng.exponential(cfg.service_rates[target]);
                }
                next_arrival = now + rng.exponential(cfg.arrival_rate);
            }
            Some(server) => {
                // service completion
                if now >= measure_start {
                    completions[server] += 1;
                }
                state.0[server] -= 1;
                next_completion[server] = if state.queue(server) > 0 {
                    now + rng.exponential(cfg.service_rates[server])
                } else {
                    f64::INFINITY
                };
            }
        }
    }

    ReplicationResult {
        mean_queue: queue_area.iter().map(|a| a / plan.measure_time).collect(),
        busy_fraction: busy_area.iter().map(|a| a / plan.measure_time).collect(),
        throughput: completions
            .iter()
            .map(|&c| c as f64 / plan.measure_time)
            .collect(),
        arrivals,
    }
}

/// Simulate the model under the plan and aggregate across replications.
pub fn simulate(cfg: &ModelConfig, plan: &SimPlan) -> Result<SimStats, Error> {
    cfg.ensure_valid()?;
    if let Some(x0) = &plan.initial_state {
        cfg.check_state(x0)?;
    }
    if plan.replications == 0 {
        return Err(Error::validation("replications must be at least 1"));
    }
    if !(plan.measure_time > 0.0) || !(plan.warmup_time >= 0.0) {
        return Err(Error::validation(
            "measure_time must be positive and warmup_time nonnegative",
        ));
    }

    let results: Vec<ReplicationResult> = (0..plan.replications)
        .into_par_iter()
        .map(|r| run_replication(cfg, plan, r))
        .collect();

    let m = cfg.server_count;
    let mut per_server_mean = vec![0.0; m];
    let mut per_server_hw = vec![0.0; m];
    let mut utilization = vec![0.0; m];
    let mut throughput = vec![0.0; m];
    for server in 0..m {
        let samples: Vec<f64> = results.iter().map(|r| r.mean_queue[server]).collect();
        let (mean, hw) = mean_and_halfwidth(&samples);
        per_server_mean[server] = mean;
        per_server_hw[server] = hw;
        utilization[server] = results
            .iter()
            .map(|r| r.busy_fraction[server])
            .sum::<f64>()
            / results.len() as f64;
        throughput[server] =
            results.iter().map(|r| r.throughput[server]).sum::<f64>() / results.len() as f64;
    }
    let totals: Vec<f64> = results
        .iter()
        .map(|r| r.mean_queue.iter().sum::<f64>())
        .collect();
    let (total_mean, total_hw) = mean_and_halfwidth(&totals);

    Ok(SimStats {
        per_server_mean_queue_length: per_server_mean,
        per_server_ci_halfwidth: per_server_hw,
        total_mean,
        total_ci_halfwidth: total_hw,
        arrivals_observed: results.iter().map(|r| r.arrivals).sum(),
        utilization,
        per_server_throughput: throughput,
        replications: plan.replications,
        unstable: !cfg.is_stable(),
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
    fn mm1_mean_queue_matches_theory() {
        let cfg = tandem(1, 1.0, vec![2.0], vec![1.0], 1);
        let plan = SimPlan::new(42).with_times(500.0, 4_000.0).with_replications(16);
        let stats = simulate(&cfg, &plan).unwrap();
        // rho/(1-rho) = 1 including the job in service
        assert!(
            (stats.per_server_mean_queue_length[0] - 1.0).abs()
                < stats.per_server_ci_halfwidth[0].max(0.05),
            "{:?}",
            stats
        );
        assert!((stats.utilization[0] - 0.5).abs() < 0.02);
        assert!(!stats.unstable);
    }

    #[test]
    fn symmetric_servers_get_symmetric_loads() {
        let cfg = tandem(3, 2.0, vec![1.5; 3], vec![1.0 / 3.0; 3], 2);
        let plan = SimPlan::new(7).with_times(200.0, 2_000.0).with_replications(12);
        let stats = simulate(&cfg, &plan).unwrap();
        for j in 1..3 {
            let diff = (stats.per_server_mean_queue_length[j]
                - stats.per_server_mean_queue_length[0])
                .abs();
            let band = stats.per_server_ci_halfwidth[j] + stats.per_server_ci_halfwidth[0];
            assert!(diff < band.max(0.05), "{stats:?}");
        }
    }

    #[test]
    fn flow_conservation() {
        // throughput_j = utilization_j * mu_j for each server
        let cfg = tandem(2, 2.0, vec![1.5, 2.5], vec![0.5, 0.5], 2);
        let plan = SimPlan::new(3).with_times(300.0, 3_000.0).with_replications(10);
        let stats = simulate(&cfg, &plan).unwrap();
        for j in 0..2 {
            let expected = stats.utilization[j] * cfg.service_rates[j];
            let rel = (stats.per_server_throughput[j] - expected).abs() / expected;
            assert!(rel < 0.03, "{stats:?}");
        }
        // total throughput equals the arrival rate for a stable system
        let total: f64 = stats.per_server_throughput.iter().sum();
        assert!((total - 2.0).abs() < 0.05, "{total}");
    }

    #[test]
    fn identical_seeds_give_identical_stats() {
        let cfg = tandem(2, 1.0, vec![1.0, 2.0], vec![0.4, 0.6], 2);
        let plan = SimPlan::new(99).with_times(50.0, 500.0).with_replications(8);
        let a = simulate(&cfg, &plan).unwrap();
        let b = simulate(&cfg, &plan).unwrap();
        assert_eq!(a, b);
        let other = simulate(&cfg, &SimPlan { seed: 100, ..plan.clone() }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn unstable_config_is_flagged_but_runs() {
        let cfg = tandem(1, 3.0, vec![1.0], vec![1.0], 1);
        let plan = SimPlan::new(1).with_times(10.0, 100.0).with_replications(2);
        let stats = simulate(&cfg, &plan).unwrap();
        assert!(stats.unstable);
        assert!(stats.per_server_mean_queue_length[0] > 10.0);
    }

    #[test]
    fn initial_state_is_respected() {
        // huge initial backlog on an overloaded server drains slowly
        let cfg = tandem(1, 0.1, vec![1.0], vec![1.0], 1);
        let mut plan = SimPlan::new(5).with_times(0.0, 10.0).with_replications(4);
        plan.initial_state = Some(SystemState::from(vec![500]));
        let stats = simulate(&cfg, &plan).unwrap();
        assert!(stats.per_server_mean_queue_length[0] > 400.0);
    }
}
