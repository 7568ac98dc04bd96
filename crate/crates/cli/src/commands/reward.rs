//! `reward` subcommand: series evaluation with optional oracle comparison.

use crate::config::ConfigFile;
use crate::manifest::RunManifest;
use crate::report::{to_json, write_file};
use hetsim_core::model::IdleEventPolicy;
use hetsim_core::oracle::{
    build_generator, discounted_expected_reward, transient_expected_reward, TieMode,
    TruncatedSpace,
};
use hetsim_core::reward::{DiscountParams, HorizonParams};
use hetsim_core::{
    expected_reward_discounted, expected_reward_finite, Error, RewardEstimate,
};
use serde::Serialize;
use std::path::PathBuf;

pub struct RewardArgs {
    pub config: PathBuf,
    pub mode: String,
    pub horizon: Option<f64>,
    pub beta: Option<f64>,
    pub reward: String,
    pub state: Option<String>,
    pub exact_depth: Option<usize>,
    pub tail_epsilon: f64,
    pub mc_samples: u64,
    pub node_budget: usize,
    pub drop_idle_mass: bool,
    pub compare_oracle: bool,
    pub buffer: u32,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct OracleComparison {
    buffer: u32,
    oracle_value: f64,
    absolute_difference: f64,
}

#[derive(Serialize)]
struct RewardReport {
    manifest: RunManifest,
    reward: String,
    mode: String,
    state: Vec<u32>,
    result: RewardEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleComparison>,
}

pub fn run(args: RewardArgs) -> Result<(), Error> {
    let file = ConfigFile::load(&args.config)?;
    let (cfg, warnings) = file.to_model()?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    let state = super::parse_state(args.state.as_deref(), cfg.server_count)?;
    let spec = super::parse_reward(&args.reward)?;
    let idle_policy = if args.drop_idle_mass {
        IdleEventPolicy::Drop
    } else {
        IdleEventPolicy::SelfLoop
    };

    let (estimate, parameters) = match args.mode.as_str() {
        "finite" => {
            let horizon = args
                .horizon
                .ok_or_else(|| Error::validation("--mode finite requires --t"))?;
            let mut params = HorizonParams::for_model(&cfg, horizon)?;
            params.tail_epsilon = args.tail_epsilon;
            // recompute the series length for the requested tail
            let weights = hetsim_core::reward::PoissonWeights::with_tail(
                cfg.total_event_rate() * horizon,
                args.tail_epsilon,
            )?;
            params.poisson_terms = (weights.len() - 1).max(1);
            params.exact_depth = args.exact_depth.unwrap_or(params.poisson_terms);
            params.mc_fallback_samples = args.mc_samples;
            params.node_budget = args.node_budget;
            params.seed = args.seed;
            params.idle_policy = idle_policy;
            let estimate = expected_reward_finite(&cfg, &state, &spec, &params)?;
            (estimate, serde_json::to_value(&params).unwrap())
        }
        "discounted" => {
            let beta = args
                .beta
                .ok_or_else(|| Error::validation("--mode discounted requires --beta"))?;
            let mut params = DiscountParams::for_spec(&cfg, beta, &spec, args.tail_epsilon)?;
            if let Some(depth) = args.exact_depth {
                params.exact_depth = depth;
            }
            params.mc_fallback_samples = args.mc_samples;
            params.node_budget = args.node_budget;
            params.seed = args.seed;
            params.idle_policy = idle_policy;
            let estimate = expected_reward_discounted(&cfg, &state, &spec, &params)?;
            (estimate, serde_json::to_value(&params).unwrap())
        }
        other => {
            return Err(Error::validation(format!(
                "unknown mode \"{other}\" (expected finite or discounted)"
            )))
        }
    };

    let oracle = if args.compare_oracle {
        let generator = build_generator(
            &cfg,
            args.buffer,
            TieMode::Average,
            TruncatedSpace::DEFAULT_MAX_STATES,
        )?;
        let oracle_value = match args.mode.as_str() {
            "finite" => transient_expected_reward(
                &generator,
                &state,
                &spec,
                args.horizon.expect("checked above"),
            )?,
            _ => discounted_expected_reward(
                &generator,
                &state,
                &spec,
                args.beta.expect("checked above"),
            )?,
        };
        Some(OracleComparison {
            buffer: args.buffer,
            oracle_value,
            absolute_difference: (estimate.value - oracle_value).abs(),
        })
    } else {
        None
    };

    let outputs: Vec<String> = args
        .out
        .iter()
        .map(|p| p.display().to_string())
        .collect();
    let manifest = RunManifest::new("reward", args.seed)
        .with_config(ConfigFile::from_model(&cfg))
        .with_parameters(&parameters)
        .with_outputs(&outputs.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    let report = RewardReport {
        manifest,
        reward: spec.to_string(),
        mode: args.mode.clone(),
        state: state.0.clone(),
        result: estimate,
        oracle,
    };

    println!(
        "value {:.12}  bound {:.3e}{}  method {:?}  samples {}",
        report.result.value,
        report.result.truncation_error_bound,
        if report.result.bound_is_heuristic {
            " (heuristic)"
        } else {
            ""
        },
        report.result.method,
        report.result.samples_used,
    );
    if let Some(cmp) = &report.oracle {
        println!(
            "oracle(B={}) {:.12}  |difference| {:.3e}",
            cmp.buffer, cmp.oracle_value, cmp.absolute_difference
        );
    }
    let text = to_json(&report);
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}
