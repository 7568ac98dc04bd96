//! Poisson probability weights, computed in log space so large means do not
//! underflow term by term.

use crate::error::Error;

/// The pmf values `P(N = n)` for `n = 0..=terms` of a Poisson distribution,
/// plus the residual tail mass beyond the last term.
#[derive(Debug, Clone)]
pub struct PoissonWeights {
    weights: Vec<f64>,
    tail: f64,
}

impl PoissonWeights {
    /// Weights up to a fixed number of terms.
    pub fn terms(mean: f64, terms: usize) -> Self {
        assert!(mean >= 0.0 && mean.is_finite());
        let mut weights = Vec::with_capacity(terms + 1);
        let mut cumulative = 0.0;
        let mut log_factorial = 0.0;
        let log_mean = if mean > 0.0 { mean.ln() } else { f64::NEG_INFINITY };
        for n in 0..=terms {
            if n > 0 {
                log_factorial += (n as f64).ln();
            }
            let log_p = if mean > 0.0 {
                -mean + n as f64 * log_mean - log_factorial
            } else if n == 0 {
                0.0
            } else {
                f64::NEG_INFINITY
            };
            let p = log_p.exp();
            weights.push(p);
            cumulative += p;
        }
        PoissonWeights {
            weights,
            tail: (1.0 - cumulative).max(0.0),
        }
    }

    /// Weights extended until the tail mass drops below `epsilon`.
    pub fn with_tail(mean: f64, epsilon: f64) -> Result<Self, Error> {
        const MAX_TERMS: usize = 20_000_000;
        assert!(mean >= 0.0 && mean.is_finite());
        let mut weights = Vec::new();
        let mut cumulative = 0.0;
        let mut log_factorial = 0.0;
        let log_mean = if mean > 0.0 { mean.ln() } else { f64::NEG_INFINITY };
        for n in 0..=MAX_TERMS {
            if n > 0 {
                log_factorial += (n as f64).ln();
            }
            let log_p = if mean > 0.0 {
                -mean + n as f64 * log_mean - log_factorial
            } else if n == 0 {
                0.0
            } else {
                f64::NEG_INFINITY
            };
            let p = log_p.exp();
            weights.push(p);
            cumulative += p;
            // Only trust the tail test once past the mode, where terms decay.
            if (n as f64) >= mean && 1.0 - cumulative < epsilon {
                return Ok(PoissonWeights {
                    weights,
                    tail: (1.0 - cumulative).max(0.0),
                });
            }
        }
        Err(Error::capacity(format!(
            "poisson series for mean {mean} needs more than {MAX_TERMS} terms to reach tail {epsilon}"
        )))
    }

    /// Number of stored terms (`n = 0..len-1`).
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, n: usize) -> f64 {
        self.weights[n]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Mass beyond the last stored term.
    pub fn tail(&self) -> f64 {
        self.tail
    }
}
