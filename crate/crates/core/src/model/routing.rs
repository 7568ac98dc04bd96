//! Arrival routing: sample `d` distinct servers, join the one with the
//! lowest selection score, break ties uniformly at random.

use super::selection::selection_score;
use super::{ModelConfig, SystemState};
use crate::rng::RandomStream;

/// Partially shuffle `servers` so its first `count` entries are a uniform
/// sample of distinct elements. The slice must contain distinct indices.
pub fn sample_distinct(servers: &mut [usize], count: usize, rng: &mut RandomStream) {
    debug_assert!(count <= servers.len());
    for i in 0..count {
        let j = i + rng.index(servers.len() - i);
        servers.swap(i, j);
    }
}

/// The candidate with the lowest selection score; ties uniform at random.
///
/// Scores are compared raw (the normalization is shared), and equality is
/// exact, so structurally identical servers tie dependably.
pub fn route_among(
    cfg: &ModelConfig,
    state: &SystemState,
    candidates: &[usize],
    rng: &mut RandomStream,
) -> usize {
    debug_assert!(!candidates.is_empty());
    let mut best = candidates[0];
    let mut best_score = selection_score(cfg, state, best);
    let mut tie_count = 1usize;
    for &server in &candidates[1..] {
        let score = selection_score(cfg, state, server);
        if score < best_score {
            best = server;
            best_score = score;
            tie_count = 1;
        } else if score == best_score {
            // Reservoir choice keeps each tied candidate equally likely
            // without a second pass.
            tie_count += 1;
            if rng.index(tie_count) == 0 {
                best = server;
            }
        }
    }
    best
}

/// Route one arrival: sample `d` distinct servers uniformly at random and
/// return the sampled server with the minimal selection score.
pub fn route_arrival(cfg: &ModelConfig, state: &SystemState, rng: &mut RandomStream) -> usize {
    let mut servers: Vec<usize> = (0..cfg.server_count).collect();
    sample_distinct(&mut servers, cfg.choice_count, rng);
    route_among(cfg, state, &servers[..cfg.choice_count], rng)
}
