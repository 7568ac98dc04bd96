//! The rank selection law: the probability that the server holding a given
//! rank in the ascending utility order is the minimum of a uniformly random
//! `d`-subset of the `M` servers.

use super::ModelConfig;
use crate::error::Error;

/// Probability that the rank-`rank` server (1-based, rank 1 = most
/// preferred) receives an arrival that samples `d` of `m` servers.
///
/// Zero for `rank > m - d + 1`: a server can only win the sample if all
/// `d - 1` other sampled servers rank below it, which requires at least
/// `d - 1` worse ranks to exist. Evaluated as a product of small ratios, so
/// no factorial overflows; exact to a few ulps for `m` up to at least 64.
pub fn rank_selection_probability(m: usize, rank: usize, d: usize) -> Result<f64, Error> {
    if rank == 0 || rank > m {
        return Err(Error::validation(format!(
            "rank: must lie in [1, {m}], got {rank}"
        )));
    }
    if d == 0 || d > m {
        return Err(Error::validation(format!(
            "d: must lie in [1, {m}], got {d}"
        )));
    }
    if rank > m - d + 1 {
        return Ok(0.0);
    }
    // d/M * prod_{j=1}^{d-1} (M - rank - j + 1) / (M - j)
    let mut p = d as f64 / m as f64;
    for j in 1..d {
        p *= (m - rank - j + 1) as f64 / (m - j) as f64;
    }
    Ok(p)
}

/// All rank probabilities for `m` servers and `d` choices, ranks 1..=m.
pub fn rank_selection_probabilities(m: usize, d: usize) -> Result<Vec<f64>, Error> {
    (1..=m)
        .map(|rank| rank_selection_probability(m, rank, d))
        .collect()
}

/// Poisson arrival rate seen by the server at the given 1-based rank.
pub fn arrival_rate_at_rank(cfg: &ModelConfig, rank: usize) -> Result<f64, Error> {
    Ok(cfg.arrival_rate
        * rank_selection_probability(cfg.server_count, rank, cfg.choice_count)?)
}
