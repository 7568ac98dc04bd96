//! Preset experiment configurations with their published reference values.
//!
//! Three 10-server configurations commonly used to exercise utility-based
//! power-of-d routing; each carries the per-server expected queue lengths
//! reported for it, so runs can print a side-by-side comparison.

use super::{simulate, SimPlan, SimStats};
use crate::error::Error;
use crate::model::{ModelConfig, SelectionKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExperimentPreset {
    One,
    Two,
    Three,
}

impl ExperimentPreset {
    pub fn parse(name: &str) -> Result<Self, Error> {
        match name.to_ascii_lowercase().as_str() {
            "one" | "1" | "experiment-one" => Ok(ExperimentPreset::One),
            "two" | "2" | "experiment-two" => Ok(ExperimentPreset::Two),
            "three" | "3" | "experiment-three" => Ok(ExperimentPreset::Three),
            other => Err(Error::validation(format!(
                "unknown experiment preset '{other}' (expected one, two, or three)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentPreset::One => "experiment-one",
            ExperimentPreset::Two => "experiment-two",
            ExperimentPreset::Three => "experiment-three",
        }
    }

    /// The preset model: 10 servers, arrival rate 10, tandem selection.
    pub fn config(&self) -> ModelConfig {
        let (d, mu, g): (usize, Vec<f64>, Vec<f64>) = match self {
            ExperimentPreset::One => (
                2,
                vec![1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0],
                vec![0.10, 0.20, 0.30, 0.05, 0.05, 0.02, 0.10, 0.03, 0.10, 0.05],
            ),
            ExperimentPreset::Two => (
                2,
                vec![1.0, 2.0, 6.0, 8.0, 10.0, 16.0, 17.0, 18.0, 25.0, 26.0],
                vec![0.10, 0.20, 0.30, 0.05, 0.05, 0.02, 0.10, 0.03, 0.10, 0.05],
            ),
            ExperimentPreset::Three => (
                3,
                vec![1.0, 3.0, 3.0, 6.0, 6.0, 6.0, 6.0, 9.0, 9.0, 15.0],
                vec![0.05, 0.20, 0.30, 0.03, 0.05, 0.10, 0.10, 0.05, 0.02, 0.10],
            ),
        };
        ModelConfig {
            server_count: 10,
            arrival_rate: 10.0,
            service_rates: mu,
            preference: g,
            choice_count: d,
            selection: SelectionKind::Tandem,
        }
    }

    /// Reference per-server expected queue lengths reported for this preset.
    pub fn reference_means(&self) -> [f64; 10] {
        match self {
            ExperimentPreset::One => [
                0.6834, 0.9454, 1.0440, 0.4318, 0.4234, 0.2894, 0.4864, 0.2793, 0.4319,
                0.2640,
            ],
            ExperimentPreset::Two => [
                0.3459, 0.1656, 0.0274, 0.0158, 0.0105, 0.0042, 0.0038, 0.0034, 0.0018,
                0.0017,
            ],
            ExperimentPreset::Three => [
                0.3447, 0.0580, 0.8598, 0.0265, 0.0265, 0.0266, 0.0265, 0.0126, 0.0127,
                0.0048,
            ],
        }
    }
}

/// Simulation of a preset plus the comparison against its reference column.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub preset: String,
    pub stats: SimStats,
    pub reference_means: Vec<f64>,
    /// `simulated - reference` per server.
    pub differences: Vec<f64>,
}

/// Run a preset under the given plan and attach the comparison table.
pub fn run_experiment(preset: ExperimentPreset, plan: &SimPlan) -> Result<ExperimentReport, Error> {
    let cfg = preset.config();
    let stats = simulate(&cfg, plan)?;
    let reference = preset.reference_means();
    let differences = stats
        .per_server_mean_queue_length
        .iter()
        .zip(reference.iter())
        .map(|(sim, paper)| sim - paper)
        .collect();
    Ok(ExperimentReport {
        preset: preset.name().to_string(),
        stats,
        reference_means: reference.to_vec(),
        differences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate_cleanly() {
        for preset in [
            ExperimentPreset::One,
            ExperimentPreset::Two,
            ExperimentPreset::Three,
        ] {
            let cfg = preset.config();
            let warnings = cfg.validate().unwrap();
            assert!(warnings.is_empty(), "{preset:?}: {warnings:?}");
            let g_sum: f64 = cfg.preference.iter().sum();
            assert!((g_sum - 1.0).abs() < 1e-12);
            assert!(cfg.is_stable());
        }
    }

    #[test]
    fn parse_accepts_the_documented_spellings() {
        assert_eq!(
            ExperimentPreset::parse("experiment-one").unwrap(),
            ExperimentPreset::One
        );
        assert_eq!(ExperimentPreset::parse("2").unwrap(), ExperimentPreset::Two);
        assert_eq!(
            ExperimentPreset::parse("THREE").unwrap(),
            ExperimentPreset::Three
        );
        assert!(ExperimentPreset::parse("four").is_err());
    }

    #[test]
    fn report_shape() {
        let plan = SimPlan::new(1).with_times(20.0, 100.0).with_replications(2);
        let report = run_experiment(ExperimentPreset::One, &plan).unwrap();
        assert_eq!(report.stats.per_server_mean_queue_length.len(), 10);
        assert_eq!(report.reference_means.len(), 10);
        assert_eq!(report.differences.len(), 10);
    }
}
