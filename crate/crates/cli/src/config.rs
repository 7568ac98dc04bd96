//! JSON model configuration files.
//!
//! Schema:
//!
//! ```json
//! {
//!   "M": 10,
//!   "lambda": 10.0,
//!   "mu": [1.1, 1.2],
//!   "g": [0.5, 0.5],
//!   "d": 2,
//!   "selection": { "kind": "tandem" }
//! }
//! ```
//!
//! `selection.kind` is `"tandem"` or `"weighted"`; the weighted form takes
//! `"betas": [b1, b2, b3]` (queue, service, preference) and defaults to
//! equal thirds when omitted.

use hetsim_core::model::{ModelConfig, SelectionKind};
use hetsim_core::Error;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigFile {
    #[serde(rename = "M")]
    pub servers: usize,
    pub lambda: f64,
    pub mu: Vec<f64>,
    pub g: Vec<f64>,
    pub d: usize,
    #[serde(default)]
    pub selection: SelectionSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionSpec {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betas: Option<[f64; 3]>,
}

impl Default for SelectionSpec {
    fn default() -> Self {
        SelectionSpec {
            kind: "tandem".to_string(),
            betas: None,
        }
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text).map_err(|e| {
            Error::validation(format!("config {}: {e}", path.display()))
        })
    }

    /// Convert to the engine configuration, running full validation.
    /// Warnings are returned for the caller to print.
    pub fn to_model(&self) -> Result<(ModelConfig, Vec<String>), Error> {
        let selection = match self.selection.kind.as_str() {
            "tandem" => {
                if self.selection.betas.is_some() {
                    return Err(Error::validation(
                        "selection.betas is only meaningful for kind \"weighted\"",
                    ));
                }
                SelectionKind::Tandem
            }
            "weighted" => match self.selection.betas {
                Some([b1, b2, b3]) => SelectionKind::Weighted {
                    queue_weight: b1,
                    service_weight: b2,
                    preference_weight: b3,
                },
                None => SelectionKind::weighted_default(),
            },
            other => {
                return Err(Error::validation(format!(
                    "selection.kind: expected \"tandem\" or \"weighted\", got \"{other}\""
                )))
            }
        };
        let cfg = ModelConfig {
            server_count: self.servers,
            arrival_rate: self.lambda,
            service_rates: self.mu.clone(),
            preference: self.g.clone(),
            choice_count: self.d,
            selection,
        };
        let warnings = cfg.validate()?;
        Ok((cfg, warnings))
    }

    pub fn from_model(cfg: &ModelConfig) -> Self {
        let selection = match cfg.selection {
            SelectionKind::Tandem => SelectionSpec {
                kind: "tandem".to_string(),
                betas: None,
            },
            SelectionKind::Weighted {
                queue_weight,
                service_weight,
                preference_weight,
            } => SelectionSpec {
                kind: "weighted".to_string(),
                betas: Some([queue_weight, service_weight, preference_weight]),
            },
        };
        ConfigFile {
            servers: cfg.server_count,
            lambda: cfg.arrival_rate,
            mu: cfg.service_rates.clone(),
            g: cfg.preference.clone(),
            d: cfg.choice_count,
            selection,
        }
    }
}

/// Grid file for design sweeps: `{"candidates": [<config>, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridFile {
    pub candidates: Vec<ConfigFile>,
}

impl GridFile {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::validation(format!("cannot read grid {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| Error::validation(format!("grid {}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_the_model() {
        let text = r#"{
            "M": 2, "lambda": 1.5, "mu": [1.0, 2.0], "g": [0.4, 0.6], "d": 2,
            "selection": {"kind": "weighted", "betas": [0.2, 0.3, 0.5]}
        }"#;
        let parsed: ConfigFile = serde_json::from_str(text).unwrap();
        let (model, _) = parsed.to_model().unwrap();
        let reserialized = serde_json::to_string(&ConfigFile::from_model(&model)).unwrap();
        let reparsed: ConfigFile = serde_json::from_str(&reserialized).unwrap();
        let (model2, _) = reparsed.to_model().unwrap();
        assert_eq!(model, model2);
    }

    #[test]
    fn missing_mu_entry_names_the_index() {
        let text = r#"{"M": 10, "lambda": 10.0,
            "mu": [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            "g":  [0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1],
            "d": 2, "selection": {"kind": "tandem"}}"#;
        let parsed: ConfigFile = serde_json::from_str(text).unwrap();
        let err = parsed.to_model().unwrap_err();
        assert!(err.to_string().contains("mu[7]"), "{err}");
    }

    #[test]
    fn unknown_selection_kind_rejected() {
        let parsed = ConfigFile {
            servers: 1,
            lambda: 1.0,
            mu: vec![1.0],
            g: vec![1.0],
            d: 1,
            selection: SelectionSpec {
                kind: "mystery".to_string(),
                betas: None,
            },
        };
        assert!(parsed.to_model().is_err());
    }
}
