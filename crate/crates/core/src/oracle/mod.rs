//! Brute-force ground truth on a buffer-truncated state space.
//!
//! Caps every queue at a buffer `B`, enumerates all `(B+1)^M` states, builds
//! the explicit generator, and computes transient, discounted, and
//! stationary quantities by direct numerical methods. Deliberately
//! desk-scale: the point is exactness on small instances, against which the
//! series evaluators and the simulator are validated. Arrivals that would
//! overflow the buffer are lost; the lost rate is tracked so runs can verify
//! the truncation barely matters.

mod generator;
mod resolvent;
mod stationary;
mod transient;

pub use generator::{build_generator, Generator, TieMode};
pub use resolvent::discounted_expected_reward;
pub use stationary::{stationary_distribution, StationaryResult};
pub use transient::transient_expected_reward;

use crate::error::Error;
use crate::model::SystemState;

/// All states with every queue in `0..=buffer_cap`, indexed mixed-radix.
#[derive(Debug, Clone)]
pub struct TruncatedSpace {
    servers: usize,
    buffer_cap: u32,
    len: usize,
}

impl TruncatedSpace {
    pub const DEFAULT_MAX_STATES: usize = 200_000;

    pub fn new(servers: usize, buffer_cap: u32, max_states: usize) -> Result<Self, Error> {
        if servers == 0 {
            return Err(Error::validation("server count must be at least 1"));
        }
        let base = buffer_cap as usize + 1;
        let mut len = 1usize;
        for _ in 0..servers {
            len = len.checked_mul(base).ok_or_else(|| {
                Error::capacity(format!(
                    "state space (B+1)^M with B={buffer_cap}, M={servers} overflows"
                ))
            })?;
            if len > max_states {
                return Err(Error::capacity(format!(
                    "state space (B+1)^M = {base}^{servers} exceeds the cap of {max_states} states"
                )));
            }
        }
        Ok(TruncatedSpace {
            servers,
            buffer_cap,
            len,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn servers(&self) -> usize {
        self.servers
    }

    pub fn buffer_cap(&self) -> u32 {
        self.buffer_cap
    }

    pub fn contains(&self, state: &SystemState) -> bool {
        state.len() == self.servers && state.0.iter().all(|&x| x <= self.buffer_cap)
    }

    pub fn index_of(&self, state: &SystemState) -> Result<usize, Error> {
        if !self.contains(state) {
            return Err(Error::validation(format!(
                "state {:?} outside the truncated space (B = {})",
                state.0, self.buffer_cap
            )));
        }
        let base = self.buffer_cap as usize + 1;
        let mut idx = 0usize;
        for &x in state.0.iter().rev() {
            idx = idx * base + x as usize;
        }
        Ok(idx)
    }

    pub fn state_at(&self, mut index: usize) -> SystemState {
        debug_assert!(index < self.len);
        let base = self.buffer_cap as usize + 1;
        let mut coords = vec![0u32; self.servers];
        for c in coords.iter_mut() {
            *c = (index % base) as u32;
            index /= base;
        }
        SystemState(coords)
    }

    pub fn states(&self) -> impl Iterator<Item = SystemState> + '_ {
        (0..self.len).map(|i| self.state_at(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_map_is_a_bijection() {
        let space = TruncatedSpace::new(3, 4, 200_000).unwrap();
        assert_eq!(space.len(), 125);
        for i in 0..space.len() {
            let s = space.state_at(i);
            assert_eq!(space.index_of(&s).unwrap(), i);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(TruncatedSpace::new(4, 30, 200_000).is_err());
        assert!(TruncatedSpace::new(2, 6, 48).is_err());
        assert!(TruncatedSpace::new(2, 6, 49).is_ok());
    }

    #[test]
    fn out_of_range_states_rejected() {
        let space = TruncatedSpace::new(2, 3, 1000).unwrap();
        assert!(space.index_of(&SystemState::from(vec![4, 0])).is_err());
        assert!(space.index_of(&SystemState::from(vec![0, 0, 0])).is_err());
    }
}
