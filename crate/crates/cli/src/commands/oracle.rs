//! `oracle` subcommand: exact computations on the truncated space.

use crate::config::ConfigFile;
use crate::manifest::RunManifest;
use crate::report::{to_json, write_file};
use hetsim_core::oracle::{
    build_generator, discounted_expected_reward, stationary_distribution,
    transient_expected_reward, StationaryResult, TieMode, TruncatedSpace,
};
use hetsim_core::Error;
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;

pub struct OracleArgs {
    pub config: PathBuf,
    pub buffer: u32,
    pub mode: String,
    pub horizon: Option<f64>,
    pub beta: Option<f64>,
    pub reward: String,
    pub state: Option<String>,
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum OracleResult {
    Scalar { value: f64 },
    Stationary(Box<StationarySummary>),
}

#[derive(Serialize)]
struct StationarySummary {
    mean_queue_lengths: Vec<f64>,
    blocking_probability: f64,
    residual: f64,
}

#[derive(Serialize)]
struct OracleReport {
    manifest: RunManifest,
    mode: String,
    buffer: u32,
    result: OracleResult,
}

pub fn run(args: OracleArgs) -> Result<(), Error> {
    let file = ConfigFile::load(&args.config)?;
    let (cfg, warnings) = file.to_model()?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    let generator = build_generator(
        &cfg,
        args.buffer,
        TieMode::Average,
        TruncatedSpace::DEFAULT_MAX_STATES,
    )?;

    let (result, parameters) = match args.mode.as_str() {
        "stationary" => {
            let StationaryResult {
                mean_queue_lengths,
                blocking_probability,
                residual,
                ..
            } = stationary_distribution(&generator)?;
            println!("per-server stationary means:");
            for (j, mean) in mean_queue_lengths.iter().enumerate() {
                println!("  server {:2}: {mean:.8}", j + 1);
            }
            println!("blocking probability: {blocking_probability:.3e}");
            (
                OracleResult::Stationary(Box::new(StationarySummary {
                    mean_queue_lengths,
                    blocking_probability,
                    residual,
                })),
                json!({"buffer": args.buffer}),
            )
        }
        "transient" => {
            let horizon = args
                .horizon
                .ok_or_else(|| Error::validation("--mode transient requires --t"))?;
            let state = super::parse_state(args.state.as_deref(), cfg.server_count)?;
            let spec = super::parse_reward(&args.reward)?;
            let value = transient_expected_reward(&generator, &state, &spec, horizon)?;
            println!("value {value:.12}");
            (
                OracleResult::Scalar { value },
                json!({"buffer": args.buffer, "t": horizon, "reward": spec.to_string(), "state": state.0}),
            )
        }
        "discounted" => {
            let beta = args
                .beta
                .ok_or_else(|| Error::validation("--mode discounted requires --beta"))?;
            let state = super::parse_state(args.state.as_deref(), cfg.server_count)?;
            let spec = super::parse_reward(&args.reward)?;
            let value = discounted_expected_reward(&generator, &state, &spec, beta)?;
            println!("value {value:.12}");
            (
                OracleResult::Scalar { value },
                json!({"buffer": args.buffer, "beta": beta, "reward": spec.to_string(), "state": state.0}),
            )
        }
        other => {
            return Err(Error::validation(format!(
                "unknown mode \"{other}\" (expected stationary, transient, or discounted)"
            )))
        }
    };

    let outputs: Vec<String> = args.out.iter().map(|p| p.display().to_string()).collect();
    let manifest = RunManifest::new("oracle", 0)
        .with_config(ConfigFile::from_model(&cfg))
        .with_parameters(parameters)
        .with_outputs(&outputs.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    let report = OracleReport {
        manifest,
        mode: args.mode.clone(),
        buffer: args.buffer,
        result,
    };
    let text = to_json(&report);
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}
