//! One-step transition law of the uniformized jump chain.
//!
//! Uniformization turns the continuous-time model into a Poisson stream of
//! potential events at rate `omega = lambda + sum(mu)` plus an embedded jump
//! chain. At a state, an arrival event carries weight `lambda / omega` split
//! over servers by the (tie-averaged) selection probabilities; a service
//! event at server `j` carries weight `mu_j / omega` and is only real when
//! the server is busy. The weight of service events at idle servers has to
//! go somewhere: by default it becomes an explicit self-loop so that each
//! step is a genuine probability distribution. The [`IdleEventPolicy::Drop`]
//! mode discards that weight instead, leaving sub-stochastic steps whose
//! shortfall is visible through [`TransitionDistribution::total_mass`] —
//! reported, never renormalized.

use super::selection::{arrival_selection_probabilities, SelectionProfile};
use super::{ModelConfig, SystemState};
use crate::error::Error;
use crate::rng::RandomStream;
use serde::{Deserialize, Serialize};

/// What a single jump of the embedded chain did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventTag {
    /// A job joined the server with this index.
    Arrival(usize),
    /// A service completed at the server with this index.
    ServiceCompletion(usize),
    /// A uniformization self-loop: the state is unchanged.
    Phantom,
}

/// Where the event weight of idle servers goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum IdleEventPolicy {
    /// Keep it as an explicit self-loop; every step sums to one.
    #[default]
    SelfLoop,
    /// Discard it; steps at states with idle servers sum to less than one.
    Drop,
}

/// One successor of a state under the jump chain.
#[derive(Debug, Clone)]
pub struct TransitionEntry {
    pub state: SystemState,
    pub probability: f64,
    pub event: EventTag,
}

/// Probability-weighted successors of one state.
#[derive(Debug, Clone)]
pub struct TransitionDistribution {
    pub entries: Vec<TransitionEntry>,
    /// Self-loop weight (zero under [`IdleEventPolicy::Drop`]).
    pub self_loop_probability: f64,
}

impl TransitionDistribution {
    /// Entry probabilities plus the self-loop. One under the default policy;
    /// possibly less under `Drop`.
    pub fn total_mass(&self) -> f64 {
        self.self_loop_probability + self.entries.iter().map(|e| e.probability).sum::<f64>()
    }

    /// Sample one jump. Residual mass (the self-loop, plus any rounding
    /// slack) maps to [`EventTag::Phantom`].
    pub fn sample(&self, rng: &mut RandomStream) -> (Option<&SystemState>, EventTag) {
        let mut u = rng.uniform();
        for entry in &self.entries {
            if u < entry.probability {
                return (Some(&entry.state), entry.event);
            }
            u -= entry.probability;
        }
        (None, EventTag::Phantom)
    }
}

/// Transition distribution of the uniformized jump chain at `state`.
///
/// `profile` must have been computed from `state` under `cfg`. Arrival mass
/// is tie-averaged (see [`arrival_selection_probabilities`]), so two calls
/// at the same state always agree regardless of how the profile broke ties.
pub fn jump_distribution(
    cfg: &ModelConfig,
    state: &SystemState,
    profile: &SelectionProfile,
    policy: IdleEventPolicy,
) -> Result<TransitionDistribution, Error> {
    cfg.check_state(state)?;
    let omega = cfg.total_event_rate();
    let arrival_weight = cfg.arrival_rate / omega;

    let selection = arrival_selection_probabilities(cfg, profile)?;
    let mut entries = Vec::with_capacity(2 * cfg.server_count);
    for (server, &p) in selection.iter().enumerate() {
        if p > 0.0 {
            entries.push(TransitionEntry {
                state: state.with_arrival(server),
                probability: arrival_weight * p,
                event: EventTag::Arrival(server),
            });
        }
    }

    let mut idle_mass = 0.0;
    for server in 0..cfg.server_count {
        let service_weight = cfg.service_rates[server] / omega;
        match state.with_departure(server) {
            Some(next) => entries.push(TransitionEntry {
                state: next,
                probability: service_weight,
                event: EventTag::ServiceCompletion(server),
            }),
            None => idle_mass += service_weight,
        }
    }

    let self_loop_probability = match policy {
        IdleEventPolicy::SelfLoop => idle_mass,
        IdleEventPolicy::Drop => 0.0,
    };
    Ok(TransitionDistribution {
        entries,
        self_loop_probability,
    })
}
