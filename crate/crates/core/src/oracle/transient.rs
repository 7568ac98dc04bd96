//! Transient accumulated reward on the truncated chain.
//!
//! Computes `E[integral_0^t r(X(s)) ds]` from a point mass. The default
//! method is the uniformization series: with `P = I + G/w` and `N` a
//! Poisson process of rate `w`, the time the chain spends "at series index
//! n" within `[0, t]` has expectation `P(N(t) > n)/w`, and those weights sum
//! to exactly `t`, which gives a clean stopping rule with a certified
//! residual. When the series would be too long (`w t` very large), an
//! adaptive step-doubling RK4 integration of the forward equations takes
//! over, carrying the reward integral as an extra component at the same
//! order.

use super::Generator;
use crate::error::Error;
use crate::model::SystemState;
use crate::reward::RewardSpec;

const SERIES_TERM_LIMIT: usize = 400_000;

/// Expected accumulated reward over `[0, t]` starting from `initial`.
/// Absolute error is controlled to about `1e-10 * max(1, t * max|r|)`.
pub fn transient_expected_reward(
    gen: &Generator,
    initial: &SystemState,
    spec: &RewardSpec,
    t: f64,
) -> Result<f64, Error> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::validation(format!(
            "horizon must be nonnegative and finite, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let rewards = gen.reward_vector(spec)?;
    let max_reward = rewards.iter().fold(0.0f64, |acc, &r| acc.max(r.abs()));
    let tolerance = 1e-10 * (t * max_reward).max(1.0);

    let rate = gen.max_exit_rate().max(1e-12) * 1.05;
    let expected_terms = rate * t + 10.0 * (rate * t + 10.0).sqrt() + 100.0;
    if expected_terms < SERIES_TERM_LIMIT as f64 {
        match by_uniformization(gen, initial, &rewards, t, rate, tolerance) {
            Ok(v) => return Ok(v),
            Err(Error::Capacity(_)) => {}
            Err(e) => return Err(e),
        }
    }
    by_stepping(gen, initial, &rewards, t, tolerance)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn by_uniformization(
    gen: &Generator,
    initial: &SystemState,
    rewards: &[f64],
    t: f64,
    rate: f64,
    tolerance: f64,
) -> Result<f64, Error> {
    let max_reward = rewards.iter().fold(0.0f64, |acc, &r| acc.max(r.abs()));
    let mut distribution = vec![0.0; gen.dim()];
    distribution[gen.index_of(initial)?] = 1.0;

    // Poisson pmf of the event count over [0, t]; the cdf gives the segment
    // weights (1 - cdf_n) / rate, which sum to t exactly.
    let mean = rate * t;
    let mut log_factorial = 0.0;
    let log_mean = mean.ln();
    let mut cdf = 0.0;
    let mut spent_weight = 0.0;
    let mut value = 0.0;

    for n in 0..SERIES_TERM_LIMIT {
        if n > 0 {
            log_factorial += (n as f64).ln();
        }
        let pmf = (-mean + n as f64 * log_mean - log_factorial).exp();
        cdf += pmf;
        let weight = (1.0 - cdf).max(0.0) / rate;
        value += weight * dot(&distribution, rewards);
        spent_weight += weight;

        let remaining = (t - spent_weight).max(0.0);
        if remaining * max_reward.max(1e-300) <= tolerance || remaining <= f64::EPSILON * t {
            return Ok(value);
        }

        // distribution <- distribution * (I + G/rate)
        let flow = gen.apply_left(&distribution);
        for (d, f) in distribution.iter_mut().zip(&flow) {
            *d += f / rate;
        }
    }
    Err(Error::capacity(format!(
        "uniformization series did not converge within {SERIES_TERM_LIMIT} terms (rate*t = {mean})"
    )))
}

/// RK4 with step doubling on the forward equations, the reward integral
/// carried as one extra component.
fn by_stepping(
    gen: &Generator,
    initial: &SystemState,
    rewards: &[f64],
    t: f64,
    tolerance: f64,
) -> Result<f64, Error> {
    let dim = gen.dim();
    let mut p = vec![0.0; dim];
    p[gen.index_of(initial)?] = 1.0;
    let mut integral = 0.0;

    // derivative of (p, integral): (p G, p . r)
    let deriv = |p: &[f64]| -> (Vec<f64>, f64) { (gen.apply_left(p), dot(p, rewards)) };

    let rk4 = |p: &[f64], acc: f64, h: f64| -> (Vec<f64>, f64) {
        let (k1p, k1a) = deriv(p);
        let mid1: Vec<f64> = p.iter().zip(&k1p).map(|(x, k)| x + 0.5 * h * k).collect();
        let (k2p, k2a) = deriv(&mid1);
        let mid2: Vec<f64> = p.iter().zip(&k2p).map(|(x, k)| x + 0.5 * h * k).collect();
        let (k3p, k3a) = deriv(&mid2);
        let end: Vec<f64> = p.iter().zip(&k3p).map(|(x, k)| x + h * k).collect();
        let (k4p, k4a) = deriv(&end);
        let next_p: Vec<f64> = (0..p.len())
            .map(|i| p[i] + h / 6.0 * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i]))
            .collect();
        let next_a = acc + h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        (next_p, next_a)
    };

    // Stability of explicit RK4 needs h below ~2.7/max_rate; start well under.
    let max_rate = gen.max_exit_rate().max(1e-12);
    let mut h = (1.0 / max_rate).min(t);
    let mut time = 0.0;
    let per_step_tol = tolerance / (t / h).max(1.0) / 4.0;
    let mut steps = 0usize;
    const MAX_STEPS: usize = 5_000_000;

    while time < t {
        if steps > MAX_STEPS {
            return Err(Error::numerical(
                "step-doubling integration exceeded its step budget",
            ));
        }
        steps += 1;
        let h_eff = h.min(t - time);
        let (full_p, full_a) = rk4(&p, integral, h_eff);
        let (half_p, half_a) = rk4(&p, integral, h_eff / 2.0);
        let (two_p, two_a) = rk4(&half_p, half_a, h_eff / 2.0);
        let mut err = (full_a - two_a).abs();
        for i in 0..dim {
            err = err.max((full_p[i] - two_p[i]).abs());
        }
        err /= 15.0;
        if err <= per_step_tol || h_eff <= 1e-12 * t {
            // accept the finer solution
            p = two_p;
            integral = two_a;
            time += h_eff;
        }
        let scale = if err > 0.0 {
            0.9 * (per_step_tol / err).powf(0.2)
        } else {
            2.0
        };
        h = (h_eff * scale.clamp(0.2, 2.0)).min(0.5 / max_rate * 2.7);
    }
    Ok(integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelConfig, SelectionKind};
    use crate::oracle::{build_generator, TieMode};

    fn mm1(lambda: f64, mu: f64, buffer: u32) -> Generator {
        let cfg = ModelConfig {
            server_count: 1,
            arrival_rate: lambda,
            service_rates: vec![mu],
            preference: vec![1.0],
            choice_count: 1,
            selection: SelectionKind::Tandem,
        };
        build_generator(&cfg, buffer, TieMode::Average, 200_000).unwrap()
    }

    #[test]
    fn constant_reward_integrates_exactly() {
        let generator = mm1(1.0, 2.0, 10);
        let v = transient_expected_reward(
            &generator,
            &SystemState::from(vec![3]),
            &RewardSpec::Constant(2.0),
            1.7,
        )
        .unwrap();
        assert!((v - 3.4).abs() < 1e-9, "{v}");
    }

    #[test]
    fn vanishing_horizon_recovers_initial_reward() {
        let generator = mm1(1.0, 2.0, 10);
        let t = 1e-6;
        let v = transient_expected_reward(
            &generator,
            &SystemState::from(vec![4]),
            &RewardSpec::TotalQueueLength,
            t,
        )
        .unwrap();
        assert!((v / t - 4.0).abs() < 1e-5, "{}", v / t);
        let zero = transient_expected_reward(
            &generator,
            &SystemState::from(vec![4]),
            &RewardSpec::TotalQueueLength,
            0.0,
        )
        .unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn long_run_average_matches_mm1_queue_length() {
        // lambda = 1, mu = 2: rho = 1/2, stationary mean queue rho/(1-rho) = 1.
        let generator = mm1(1.0, 2.0, 64);
        let t = 400.0;
        let v = transient_expected_reward(
            &generator,
            &SystemState::from(vec![0]),
            &RewardSpec::TotalQueueLength,
            t,
        )
        .unwrap();
        assert!((v / t - 1.0).abs() < 0.01, "{}", v / t);
    }

    #[test]
    fn stepping_agrees_with_series() {
        let generator = mm1(1.5, 2.0, 12);
        let x0 = SystemState::from(vec![2]);
        let spec = RewardSpec::TotalQueueLength;
        let t = 2.0;
        let rewards = generator.reward_vector(&spec).unwrap();
        let rate = generator.max_exit_rate() * 1.05;
        let series =
            by_uniformization(&generator, &x0, &rewards, t, rate, 1e-11).unwrap();
        let stepped = by_stepping(&generator, &x0, &rewards, t, 1e-9).unwrap();
        assert!(
            (series - stepped).abs() < 1e-7,
            "series {series} vs stepped {stepped}"
        );
    }
}
