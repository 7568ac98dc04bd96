//! Run manifests embedded in every report file.
//!
//! A manifest plus the binary reproduces the run: it records the resolved
//! configuration, subcommand, seed, generator identity, version, and the
//! truncation/plan parameters in effect. Report files must be bit-identical
//! across repeated runs, so volatile data (timing, host) is deliberately
//! kept out; run duration goes to stderr instead.

use crate::config::ConfigFile;
use hetsim_core::RandomStream;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub generator: &'static str,
    pub seed: u64,
    /// Resolved model configuration (snapshot, not the file path).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigFile>,
    /// Subcommand-specific parameters (plan, truncation, thresholds).
    pub parameters: Value,
    /// Files this run writes, relative to the output directory.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str, seed: u64) -> Self {
        RunManifest {
            tool: "hetsim",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            generator: RandomStream::GENERATOR_ID,
            seed,
            config: None,
            parameters: Value::Null,
            outputs: Vec::new(),
        }
    }

    pub fn with_config(mut self, config: ConfigFile) -> Self {
        self.config = Some(config);
        self
    }

    pub fn with_parameters(mut self, parameters: impl Serialize) -> Self {
        self.parameters = serde_json::to_value(parameters).expect("serializable parameters");
        self
    }

    pub fn with_outputs(mut self, outputs: &[&str]) -> Self {
        self.outputs = outputs.iter().map(|s| s.to_string()).collect();
        self
    }
}
