//! Stationary distribution of the truncated chain.
//!
//! Solves `pi G = 0`, `sum(pi) = 1` by Gauss–Seidel sweeps over the balance
//! equations. The buffer cap can make corner states unreachable (an arrival
//! the routing rule insists on sending to a full server is lost, so some
//! boundary states never fill); the solve therefore runs on the closed
//! communicating class containing the empty state, which carries all the
//! stationary mass. States that cannot reach the empty state at all would
//! make the stationary distribution ill-defined and are reported as a
//! structural error — with positive service rates everywhere that cannot
//! happen, but the guard is cheap.

use super::Generator;
use crate::error::Error;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

const MAX_SWEEPS: usize = 200_000;
const RESIDUAL_TARGET: f64 = 1e-10;

/// Stationary distribution and the summaries derived from it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StationaryResult {
    pub distribution: Vec<f64>,
    /// `sum_x pi(x) x_j` per server.
    pub mean_queue_lengths: Vec<f64>,
    /// Long-run fraction of arrivals lost to the buffer cap.
    pub blocking_probability: f64,
    /// Final `max |pi G|` residual, for the record.
    pub residual: f64,
}

/// Solve for the stationary distribution of the generator.
pub fn stationary_distribution(gen: &Generator) -> Result<StationaryResult, Error> {
    let dim = gen.dim();
    let recurrent = recurrent_class(gen)?;

    let incoming = gen.transpose();
    let mut pi = vec![0.0; dim];
    for &s in &recurrent {
        pi[s] = 1.0 / recurrent.len() as f64;
    }
    let scale = gen.max_exit_rate().max(1.0);
    let mut residual = f64::INFINITY;

    for sweep in 0..MAX_SWEEPS {
        for &col in &recurrent {
            let exit = -gen.diagonal(col);
            if exit <= 0.0 {
                // an absorbing state would trap all mass
                return Err(Error::structural(format!(
                    "state {col} has no outgoing rate"
                )));
            }
            let inflow: f64 = incoming[col]
                .iter()
                .map(|&(row, rate)| pi[row] * rate)
                .sum();
            pi[col] = inflow / exit;
        }
        let total: f64 = pi.iter().sum();
        for p in pi.iter_mut() {
            *p /= total;
        }
        if sweep % 8 == 7 {
            let flow = gen.apply_left(&pi);
            residual = flow.iter().fold(0.0f64, |acc, &f| acc.max(f.abs()));
            if residual <= RESIDUAL_TARGET * scale {
                break;
            }
        }
        if sweep == MAX_SWEEPS - 1 {
            return Err(Error::numerical(format!(
                "stationary solve stalled at residual {residual} after {MAX_SWEEPS} sweeps"
            )));
        }
    }

    let space = gen.space();
    let servers = space.servers();
    let mut means = vec![0.0; servers];
    let mut blocked_rate = 0.0;
    for (idx, &p) in pi.iter().enumerate() {
        let state = space.state_at(idx);
        for (j, mean) in means.iter_mut().enumerate() {
            *mean += p * f64::from(state.queue(j));
        }
        blocked_rate += p * gen.blocked_rate(idx);
    }

    Ok(StationaryResult {
        distribution: pi,
        mean_queue_lengths: means,
        blocking_probability: blocked_rate / gen.config().arrival_rate,
        residual,
    })
}

/// The closed communicating class containing the empty state: everything
/// forward-reachable from it. Errors if some state of the box cannot reach
/// the empty state (then more than one closed class could exist).
fn recurrent_class(gen: &Generator) -> Result<Vec<usize>, Error> {
    let dim = gen.dim();

    // backward: every state must be able to reach the empty state
    let incoming = gen.transpose();
    let mut reaches_empty = vec![false; dim];
    let mut queue = VecDeque::from([0usize]);
    reaches_empty[0] = true;
    let mut count = 1usize;
    while let Some(s) = queue.pop_front() {
        for &(n, _) in &incoming[s] {
            if !reaches_empty[n] {
                reaches_empty[n] = true;
                count += 1;
                queue.push_back(n);
            }
        }
    }
    if count != dim {
        return Err(Error::structural(format!(
            "chain is reducible: only {count} of {dim} states can reach the empty state"
        )));
    }

    // forward: the class the stationary mass lives on
    let mut reachable = vec![false; dim];
    let mut queue = VecDeque::from([0usize]);
    reachable[0] = true;
    while let Some(s) = queue.pop_front() {
        for &(n, _) in gen.off_diagonals(s) {
            if !reachable[n] {
                reachable[n] = true;
                queue.push_back(n);
            }
        }
    }
    Ok((0..dim).filter(|&i| reachable[i]).collect())
}
