//! Selection utilities and the ascending rank map.
//!
//! Each server gets a positive raw score from the configured selection
//! function; normalizing the scores yields the utility vector. Arrivals
//! prefer low utility. Because every score shares the same normalizing
//! denominator at a given state, comparisons can be done on raw scores,
//! which is what the routing hot path does.

use super::{ModelConfig, SelectionKind, SystemState};
use crate::error::Error;
use crate::model::rank::rank_selection_probability;
use crate::rng::RandomStream;

/// Raw (unnormalized) selection score of one server at a state. Strictly
/// increasing in the queue length, strictly decreasing in the service rate
/// and in the preference weight.
pub fn selection_score(cfg: &ModelConfig, state: &SystemState, server: usize) -> f64 {
    let x = f64::from(state.queue(server));
    match cfg.selection {
        SelectionKind::Tandem => {
            1.0 + x / (cfg.service_rates[server] * cfg.preference[server])
        }
        SelectionKind::Weighted {
            queue_weight,
            service_weight,
            preference_weight,
        } => {
            1.0 + queue_weight * x
                + service_weight / cfg.service_rates[server]
                + preference_weight / cfg.preference[server]
        }
    }
}

/// Permutation sorting `values` ascending, ties kept in index order.
///
/// Returns `(server_at_rank, rank_of_server)`: `server_at_rank[r]` is the
/// index holding rank `r` (rank 0 = smallest value), and `rank_of_server` is
/// its inverse.
pub fn ascending_permutation(values: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let mut server_at_rank: Vec<usize> = (0..values.len()).collect();
    server_at_rank.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut rank_of_server = vec![0usize; values.len()];
    for (rank, &server) in server_at_rank.iter().enumerate() {
        rank_of_server[server] = rank;
    }
    (server_at_rank, rank_of_server)
}

/// Normalized selection utilities at a state together with the ascending
/// rank permutation.
#[derive(Debug, Clone)]
pub struct SelectionProfile {
    /// Normalized utilities, one per server; entries sum to one.
    pub utilities: Vec<f64>,
    /// `rank_of_server[s]` is the rank of server `s` (0 = most preferred).
    pub rank_of_server: Vec<usize>,
    /// `server_at_rank[r]` is the server occupying rank `r`.
    pub server_at_rank: Vec<usize>,
}

impl SelectionProfile {
    /// Profile with ties broken deterministically by lowest server index.
    pub fn compute(cfg: &ModelConfig, state: &SystemState) -> Result<Self, Error> {
        Self::build(cfg, state, None)
    }

    /// Profile with ties permuted uniformly at random.
    pub fn compute_randomized(
        cfg: &ModelConfig,
        state: &SystemState,
        rng: &mut RandomStream,
    ) -> Result<Self, Error> {
        Self::build(cfg, state, Some(rng))
    }

    fn build(
        cfg: &ModelConfig,
        state: &SystemState,
        mut rng: Option<&mut RandomStream>,
    ) -> Result<Self, Error> {
        cfg.check_state(state)?;
        let m = cfg.server_count;
        let scores: Vec<f64> = (0..m).map(|s| selection_score(cfg, state, s)).collect();
        let total: f64 = scores.iter().sum();
        let utilities: Vec<f64> = scores.iter().map(|s| s / total).collect();

        let (mut server_at_rank, _) = ascending_permutation(&scores);
        if let Some(rng) = rng.as_deref_mut() {
            shuffle_tied_runs(&scores, &mut server_at_rank, rng);
        }
        let mut rank_of_server = vec![0usize; m];
        for (rank, &server) in server_at_rank.iter().enumerate() {
            rank_of_server[server] = rank;
        }
        Ok(SelectionProfile {
            utilities,
            rank_of_server,
            server_at_rank,
        })
    }

    /// Smallest utility at this state.
    pub fn min_utility(&self) -> f64 {
        self.utilities[self.server_at_rank[0]]
    }

    /// Largest utility at this state.
    pub fn max_utility(&self) -> f64 {
        self.utilities[*self.server_at_rank.last().expect("nonempty profile")]
    }

    /// Runs of equal raw score in rank order, as `(first_rank, len)` pairs.
    /// Scores are compared exactly; equal parameters give bitwise-equal
    /// scores, so symmetric servers tie reliably.
    pub fn tie_runs(&self) -> Vec<(usize, usize)> {
        let m = self.server_at_rank.len();
        let mut runs = Vec::new();
        let mut start = 0;
        while start < m {
            let v = self.utilities[self.server_at_rank[start]];
            let mut end = start + 1;
            while end < m && self.utilities[self.server_at_rank[end]] == v {
                end += 1;
            }
            runs.push((start, end - start));
            start = end;
        }
        runs
    }
}

/// Fisher–Yates shuffle applied separately to each run of equal scores.
fn shuffle_tied_runs(scores: &[f64], order: &mut [usize], rng: &mut RandomStream) {
    let mut start = 0;
    while start < order.len() {
        let v = scores[order[start]];
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == v {
            end += 1;
        }
        for i in start..end.saturating_sub(1) {
            let j = i + rng.index(end - i);
            order.swap(i, j);
        }
        start = end;
    }
}

/// Per-server probability that an arriving job selects each server, with
/// tied ranks averaged exactly.
///
/// At states where all utilities are distinct this is the rank law applied
/// through the permutation. Where several servers share a score, the rank
/// sort is random, so each tied server receives the mean of the rank
/// probabilities its group spans; this is the exact expectation over the
/// random sort and keeps the jump chain well defined.
pub fn arrival_selection_probabilities(
    cfg: &ModelConfig,
    profile: &SelectionProfile,
) -> Result<Vec<f64>, Error> {
    let m = cfg.server_count;
    let d = cfg.choice_count;
    let mut mass = vec![0.0; m];
    for (first_rank, len) in profile.tie_runs() {
        let mut group_total = 0.0;
        for rank in first_rank..first_rank + len {
            group_total += rank_selection_probability(m, rank + 1, d)?;
        }
        let share = group_total / len as f64;
        for rank in first_rank..first_rank + len {
            mass[profile.server_at_rank[rank]] = share;
        }
    }
    Ok(mass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tandem(m: usize, mu: Vec<f64>, g: Vec<f64>, d: usize) -> ModelConfig {
        ModelConfig {
            server_count: m,
            arrival_rate: 1.0,
            service_rates: mu,
            preference: g,
            choice_count: d,
            selection: SelectionKind::Tandem,
        }
    }

    #[test]
    fn empty_system_has_uniform_utilities() {
        for m in [1, 3, 7] {
            let cfg = tandem(m, vec![1.5; m], vec![0.3; m], 1);
            let profile =
                SelectionProfile::compute(&cfg, &SystemState::zeros(m)).unwrap();
            for &u in &profile.utilities {
                assert!((u - 1.0 / m as f64).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn tandem_two_server_hand_case() {
        // x = (1, 0), mu = (1, 1), g = (0.5, 0.5): scores (3, 1), utilities
        // (0.75, 0.25), so rank 0 belongs to server 1.
        let cfg = tandem(2, vec![1.0, 1.0], vec![0.5, 0.5], 2);
        let profile =
            SelectionProfile::compute(&cfg, &SystemState::from(vec![1, 0])).unwrap();
        assert!((profile.utilities[0] - 0.75).abs() < 1e-15);
        assert!((profile.utilities[1] - 0.25).abs() < 1e-15);
        assert_eq!(profile.server_at_rank, vec![1, 0]);
        assert_eq!(profile.rank_of_server, vec![1, 0]);
        assert!((profile.min_utility() - 0.25).abs() < 1e-15);
        assert!((profile.max_utility() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn ascending_permutation_three_values() {
        // Input (1/3, 1/2, 1/6) sorts to (1/6, 1/3, 1/2): rank 0 is held by
        // index 2, rank 1 by index 0, rank 2 by index 1.
        let (server_at_rank, rank_of_server) =
            ascending_permutation(&[1.0 / 3.0, 0.5, 1.0 / 6.0]);
        assert_eq!(server_at_rank, vec![2, 0, 1]);
        assert_eq!(rank_of_server, vec![1, 2, 0]);
    }

    #[test]
    fn weighted_scores_match_formula() {
        let cfg = ModelConfig {
            server_count: 2,
            arrival_rate: 1.0,
            service_rates: vec![2.0, 4.0],
            preference: vec![0.5, 0.25],
            choice_count: 1,
            selection: SelectionKind::Weighted {
                queue_weight: 0.5,
                service_weight: 0.3,
                preference_weight: 0.2,
            },
        };
        let x = SystemState::from(vec![3, 0]);
        let s0 = selection_score(&cfg, &x, 0);
        let s1 = selection_score(&cfg, &x, 1);
        assert!((s0 - (1.0 + 0.5 * 3.0 + 0.3 / 2.0 + 0.2 / 0.5)).abs() < 1e-15);
        assert!((s1 - (1.0 + 0.3 / 4.0 + 0.2 / 0.25)).abs() < 1e-15);
    }

    #[test]
    fn randomized_ties_cover_all_orders() {
        let cfg = tandem(3, vec![1.0; 3], vec![0.5; 3], 2);
        let x = SystemState::zeros(3);
        let mut rng = RandomStream::new(5);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..200 {
            let p = SelectionProfile::compute_randomized(&cfg, &x, &mut rng).unwrap();
            seen.insert(p.server_at_rank.clone());
        }
        assert_eq!(seen.len(), 6, "all 3! tie orders should appear");
    }

    #[test]
    fn tie_averaged_arrival_mass_is_uniform_at_empty_state() {
        let cfg = tandem(4, vec![1.0, 2.0, 3.0, 4.0], vec![0.25; 4], 2);
        let profile =
            SelectionProfile::compute(&cfg, &SystemState::zeros(4)).unwrap();
        let mass = arrival_selection_probabilities(&cfg, &profile).unwrap();
        for &p in &mass {
            assert!((p - 0.25).abs() < 1e-12, "{mass:?}");
        }
    }

    #[test]
    fn distinct_scores_get_plain_rank_probabilities() {
        let cfg = tandem(3, vec![1.0, 1.0, 1.0], vec![0.5, 0.5, 0.5], 2);
        let x = SystemState::from(vec![0, 1, 2]);
        let profile = SelectionProfile::compute(&cfg, &x).unwrap();
        let mass = arrival_selection_probabilities(&cfg, &profile).unwrap();
        assert!((mass[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((mass[1] - 1.0 / 3.0).abs() < 1e-12);
        assert!(mass[2].abs() < 1e-12);
    }

    #[test]
    fn raw_score_monotonicity() {
        // Increasing in queue length, decreasing in service rate and
        // preference, for both selection kinds.
        for selection in [
            SelectionKind::Tandem,
            SelectionKind::Weighted {
                queue_weight: 0.2,
                service_weight: 0.5,
                preference_weight: 0.3,
            },
        ] {
            let mut cfg = tandem(1, vec![1.0], vec![0.5], 1);
            cfg.selection = selection;
            let at = |cfg: &ModelConfig, x: u32| {
                selection_score(cfg, &SystemState::from(vec![x]), 0)
            };
            assert!(at(&cfg, 1) > at(&cfg, 0));
            assert!(at(&cfg, 5) > at(&cfg, 4));
            let base = at(&cfg, 3);
            cfg.service_rates[0] = 2.0;
            assert!(at(&cfg, 3) < base);
            let base = at(&cfg, 3);
            cfg.preference[0] = 0.9;
            assert!(at(&cfg, 3) < base);
        }
    }
}
