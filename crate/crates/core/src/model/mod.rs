//! Model parameterization, routing utilities, and the one-step transition law
//! of the uniformized jump chain.

mod rank;
mod routing;
mod selection;
mod transition;

pub use rank::{arrival_rate_at_rank, rank_selection_probabilities, rank_selection_probability};
pub use routing::{route_among, route_arrival, sample_distinct};
pub use selection::{
    arrival_selection_probabilities, ascending_permutation, selection_score, SelectionProfile,
};
pub use transition::{
    jump_distribution, EventTag, IdleEventPolicy, TransitionDistribution, TransitionEntry,
};

use crate::error::Error;
use serde::{Deserialize, Serialize};

/// How the selection utility of a server is formed from its queue length,
/// service rate, and preference weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SelectionKind {
    /// Multiplicative combination: score grows with `x / (mu * g)`.
    Tandem,
    /// Convex combination of queue length, inverse service rate, and inverse
    /// preference. The three weights must be nonnegative and sum to one.
    Weighted {
        queue_weight: f64,
        service_weight: f64,
        preference_weight: f64,
    },
}

impl SelectionKind {
    /// Equal-weight variant used when no weights are specified.
    pub fn weighted_default() -> Self {
        SelectionKind::Weighted {
            queue_weight: 1.0 / 3.0,
            service_weight: 1.0 / 3.0,
            preference_weight: 1.0 / 3.0,
        }
    }
}

/// Full parameterization of the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    /// Number of servers (`M`).
    pub server_count: usize,
    /// Poisson arrival rate, jobs per unit time.
    pub arrival_rate: f64,
    /// Per-server service rates, jobs per unit time.
    pub service_rates: Vec<f64>,
    /// Per-server preference weights in `(0, 1]`.
    pub preference: Vec<f64>,
    /// Number of servers each arrival samples (`d`).
    pub choice_count: usize,
    pub selection: SelectionKind,
}

impl ModelConfig {
    /// Validate all hard invariants; returns human-readable warnings for the
    /// soft ones (preference weights not summing to one, unstable load).
    pub fn validate(&self) -> Result<Vec<String>, Error> {
        let m = self.server_count;
        if m == 0 {
            return Err(Error::validation("server_count: must be at least 1"));
        }
        if !(self.arrival_rate > 0.0) || !self.arrival_rate.is_finite() {
            return Err(Error::validation(format!(
                "arrival_rate: must be positive and finite, got {}",
                self.arrival_rate
            )));
        }
        if self.service_rates.len() != m {
            // Name the first missing or first extra entry.
            let idx = self.service_rates.len().min(m);
            return Err(Error::validation(format!(
                "mu[{idx}]: expected {m} entries, found {}",
                self.service_rates.len()
            )));
        }
        if self.preference.len() != m {
            let idx = self.preference.len().min(m);
            return Err(Error::validation(format!(
                "g[{idx}]: expected {m} entries, found {}",
                self.preference.len()
            )));
        }
        for (i, &mu) in self.service_rates.iter().enumerate() {
            if !(mu > 0.0) || !mu.is_finite() {
                return Err(Error::validation(format!(
                    "mu[{i}]: must be positive and finite, got {mu}"
                )));
            }
        }
        for (i, &g) in self.preference.iter().enumerate() {
            if !(g > 0.0 && g <= 1.0) {
                return Err(Error::validation(format!(
                    "g[{i}]: must lie in (0, 1], got {g}"
                )));
            }
        }
        if self.choice_count == 0 || self.choice_count > m {
            return Err(Error::validation(format!(
                "d: must lie in [1, {m}], got {}",
                self.choice_count
            )));
        }
        if let SelectionKind::Weighted {
            queue_weight,
            service_weight,
            preference_weight,
        } = self.selection
        {
            for (name, w) in [
                ("queue_weight", queue_weight),
                ("service_weight", service_weight),
                ("preference_weight", preference_weight),
            ] {
                if !(w >= 0.0) || !w.is_finite() {
                    return Err(Error::validation(format!(
                        "selection.{name}: must be nonnegative, got {w}"
                    )));
                }
            }
            let sum = queue_weight + service_weight + preference_weight;
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::validation(format!(
                    "selection weights must sum to 1 (got {sum})"
                )));
            }
        }

        let mut warnings = Vec::new();
        let g_sum: f64 = self.preference.iter().sum();
        if (g_sum - 1.0).abs() > 1e-9 {
            warnings.push(format!(
                "preference weights sum to {g_sum}, not 1; the selection rule only uses 1/g"
            ));
        }
        if !self.is_stable() {
            warnings.push(format!(
                "arrival rate {} is not below total service rate {}; queue lengths may not converge",
                self.arrival_rate,
                self.service_rates.iter().sum::<f64>()
            ));
        }
        Ok(warnings)
    }

    /// Validate, discarding warnings.
    pub fn ensure_valid(&self) -> Result<(), Error> {
        self.validate().map(|_| ())
    }

    /// Total event rate of the uniformized chain: arrivals plus all servers.
    pub fn total_event_rate(&self) -> f64 {
        self.arrival_rate + self.service_rates.iter().sum::<f64>()
    }

    pub fn is_stable(&self) -> bool {
        self.arrival_rate < self.service_rates.iter().sum::<f64>()
    }

    /// Check that a state has the right dimension for this model.
    pub fn check_state(&self, state: &SystemState) -> Result<(), Error> {
        if state.len() != self.server_count {
            return Err(Error::validation(format!(
                "state has {} entries, model has {} servers",
                state.len(),
                self.server_count
            )));
        }
        Ok(())
    }
}

/// Queue lengths of all servers, including any job in service.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SystemState(pub Vec<u32>);

impl SystemState {
    pub fn zeros(servers: usize) -> Self {
        SystemState(vec![0; servers])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn queue(&self, server: usize) -> u32 {
        self.0[server]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| u64::from(x)).sum()
    }

    /// Copy with one more job at `server`.
    pub fn with_arrival(&self, server: usize) -> Self {
        let mut next = self.clone();
        next.0[server] += 1;
        next
    }

    /// Copy with one job removed at `server`; `None` if the server is empty.
    pub fn with_departure(&self, server: usize) -> Option<Self> {
        if self.0[server] == 0 {
            return None;
        }
        let mut next = self.clone();
        next.0[server] -= 1;
        Some(next)
    }
}

impl From<Vec<u32>> for SystemState {
    fn from(v: Vec<u32>) -> Self {
        SystemState(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> ModelConfig {
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
    fn valid_config_passes_without_warnings() {
        let warnings = base_config().validate().unwrap();
        assert!(warnings.is_empty(), "{warnings:?}");
    }

    #[test]
    fn missing_service_rate_names_index() {
        let mut cfg = base_config();
        cfg.service_rates.pop();
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("mu[1]"), "{err}");
    }

    #[test]
    fn preference_out_of_range_rejected() {
        let mut cfg = base_config();
        cfg.preference[1] = 0.0;
        assert!(cfg.validate().is_err());
        cfg.preference[1] = 1.5;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn choice_count_bounds() {
        let mut cfg = base_config();
        cfg.choice_count = 0;
        assert!(cfg.validate().is_err());
        cfg.choice_count = 3;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn weighted_weights_must_sum_to_one() {
        let mut cfg = base_config();
        cfg.selection = SelectionKind::Weighted {
            queue_weight: 0.5,
            service_weight: 0.5,
            preference_weight: 0.5,
        };
        assert!(cfg.validate().is_err());
        cfg.selection = SelectionKind::weighted_default();
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn soft_issues_become_warnings() {
        let mut cfg = base_config();
        cfg.preference = vec![0.9, 0.9];
        cfg.arrival_rate = 5.0; // above total service rate 2.0
        let warnings = cfg.validate().unwrap();
        assert_eq!(warnings.len(), 2);
    }

    #[test]
    fn state_arithmetic() {
        let x = SystemState::from(vec![2, 0]);
        assert_eq!(x.with_arrival(1).0, vec![2, 1]);
        assert_eq!(x.with_departure(0).unwrap().0, vec![1, 0]);
        assert!(x.with_departure(1).is_none());
        assert_eq!(x.total(), 2);
    }
}
