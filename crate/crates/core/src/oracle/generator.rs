//! Explicit generator of the buffer-truncated chain.

use super::TruncatedSpace;
use crate::error::Error;
use crate::model::{
    arrival_selection_probabilities, rank_selection_probability, ModelConfig,
    SelectionProfile, SystemState,
};
use crate::reward::RewardSpec;
use rayon::prelude::*;

/// How arrival mass is assigned when selection scores tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieMode {
    /// Exact expectation over the random sort of tied servers; this matches
    /// the process the simulator samples and keeps the oracle deterministic.
    #[default]
    Average,
    /// Stable order by server index, mirroring the deterministic profile
    /// mode. Useful for side-by-side comparisons, not for validation.
    LowestIndex,
}

/// Sparse generator matrix over a [`TruncatedSpace`], with per-state lost
/// arrival rates from the buffer cap.
#[derive(Debug, Clone)]
pub struct Generator {
    cfg: ModelConfig,
    space: TruncatedSpace,
    /// Off-diagonal entries per row: `(column, rate)`.
    rows: Vec<Vec<(usize, f64)>>,
    diag: Vec<f64>,
    /// Arrival rate lost at each state because the target queue is full.
    blocked_rate: Vec<f64>,
}

/// Build the generator for `cfg` truncated at `buffer_cap` jobs per server.
pub fn build_generator(
    cfg: &ModelConfig,
    buffer_cap: u32,
    tie_mode: TieMode,
    max_states: usize,
) -> Result<Generator, Error> {
    cfg.ensure_valid()?;
    let space = TruncatedSpace::new(cfg.server_count, buffer_cap, max_states)?;

    let built: Vec<(Vec<(usize, f64)>, f64, f64)> = (0..space.len())
        .into_par_iter()
        .map(|idx| -> Result<(Vec<(usize, f64)>, f64, f64), Error> {
            let state = space.state_at(idx);
            let profile = SelectionProfile::compute(cfg, &state)?;
            let selection = match tie_mode {
                TieMode::Average => arrival_selection_probabilities(cfg, &profile)?,
                TieMode::LowestIndex => {
                    let mut mass = vec![0.0; cfg.server_count];
                    for (rank, &server) in profile.server_at_rank.iter().enumerate() {
                        mass[server] = rank_selection_probability(
                            cfg.server_count,
                            rank + 1,
                            cfg.choice_count,
                        )?;
                    }
                    mass
                }
            };

            let mut row = Vec::with_capacity(2 * cfg.server_count);
            let mut exit_rate = 0.0;
            let mut blocked = 0.0;
            for (server, &p) in selection.iter().enumerate() {
                if p <= 0.0 {
                    continue;
                }
                let rate = cfg.arrival_rate * p;
                if state.queue(server) < buffer_cap {
                    let target = space.index_of(&state.with_arrival(server))?;
                    row.push((target, rate));
                    exit_rate += rate;
                } else {
                    blocked += rate;
                }
            }
            for server in 0..cfg.server_count {
                if let Some(next) = state.with_departure(server) {
                    let rate = cfg.service_rates[server];
                    row.push((space.index_of(&next)?, rate));
                    exit_rate += rate;
                }
            }
            Ok((row, -exit_rate, blocked))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = Vec::with_capacity(space.len());
    let mut diag = Vec::with_capacity(space.len());
    let mut blocked_rate = Vec::with_capacity(space.len());
    for (row, d, b) in built {
        rows.push(row);
        diag.push(d);
        blocked_rate.push(b);
    }
    Ok(Generator {
        cfg: cfg.clone(),
        space,
        rows,
        diag,
        blocked_rate,
    })
}

impl Generator {
    pub fn dim(&self) -> usize {
        self.space.len()
    }

    pub fn space(&self) -> &TruncatedSpace {
        &self.space
    }

    pub fn config(&self) -> &ModelConfig {
        &self.cfg
    }

    pub fn diagonal(&self, row: usize) -> f64 {
        self.diag[row]
    }

    pub fn off_diagonals(&self, row: usize) -> &[(usize, f64)] {
        &self.rows[row]
    }

    pub fn blocked_rate(&self, row: usize) -> f64 {
        self.blocked_rate[row]
    }

    /// Largest exit rate; the uniformization constant must exceed this.
    pub fn max_exit_rate(&self) -> f64 {
        self.diag.iter().fold(0.0, |acc, &d| acc.max(-d))
    }

    /// Row sums (diagonal plus off-diagonals); all zero for a proper
    /// generator.
    pub fn row_sum(&self, row: usize) -> f64 {
        self.diag[row] + self.rows[row].iter().map(|&(_, r)| r).sum::<f64>()
    }

    /// Row-vector product `p * G`.
    pub fn apply_left(&self, p: &[f64]) -> Vec<f64> {
        debug_assert_eq!(p.len(), self.dim());
        let mut out = vec![0.0; self.dim()];
        for (row, &mass) in p.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            out[row] += mass * self.diag[row];
            for &(col, rate) in &self.rows[row] {
                out[col] += mass * rate;
            }
        }
        out
    }

    /// Reward of every state in index order.
    pub fn reward_vector(&self, spec: &RewardSpec) -> Result<Vec<f64>, Error> {
        (0..self.dim())
            .map(|i| spec.evaluate(&self.cfg, &self.space.state_at(i)))
            .collect()
    }

    /// Incoming off-diagonal edges per column, for solvers that sweep over
    /// predecessors.
    pub(crate) fn transpose(&self) -> Vec<Vec<(usize, f64)>> {
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.dim()];
        for (row, entries) in self.rows.iter().enumerate() {
            for &(col, rate) in entries {
                cols[col].push((row, rate));
            }
        }
        cols
    }

    pub fn index_of(&self, state: &SystemState) -> Result<usize, Error> {
        self.space.index_of(state)
    }
}
