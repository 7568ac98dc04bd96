//! `simulate` and `experiment` subcommands.

use crate::config::ConfigFile;
use crate::manifest::RunManifest;
use crate::report::{comparison_csv, simulation_csv, to_json, write_file};
use crate::PlanArgs;
use hetsim_core::sim::{run_experiment, ExperimentPreset, ExperimentReport};
use hetsim_core::{simulate, Error, SimPlan, SimStats};
use serde::Serialize;
use std::path::Path;

#[derive(Serialize)]
struct SimulateReport {
    manifest: RunManifest,
    stats: SimStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<ExperimentReport>,
}

pub fn run(
    config_path: Option<&Path>,
    preset_name: Option<&str>,
    plan_args: &PlanArgs,
    out_dir: &Path,
) -> Result<(), Error> {
    let plan = SimPlan {
        warmup_time: plan_args.warmup,
        measure_time: plan_args.measure,
        replications: plan_args.replications,
        seed: plan_args.seed,
        initial_state: None,
    };

    let (cfg, stem, comparison) = match (config_path, preset_name) {
        (Some(path), None) => {
            let file = ConfigFile::load(path)?;
            let (cfg, warnings) = file.to_model()?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            (cfg, "simulate".to_string(), None)
        }
        (None, Some(name)) => {
            let preset = ExperimentPreset::parse(name)?;
            let report = run_experiment(preset, &plan)?;
            (preset.config(), preset.name().to_string(), Some(report))
        }
        _ => return Err(Error::validation("provide exactly one of --config / --preset")),
    };

    let stats = match &comparison {
        Some(report) => report.stats.clone(),
        None => simulate(&cfg, &plan)?,
    };
    if stats.unstable {
        eprintln!(
            "warning: offered load is not below total capacity; means may not converge"
        );
    }

    let csv_name = format!("{stem}.csv");
    let json_name = format!("{stem}.json");
    let manifest = RunManifest::new("simulate", plan.seed)
        .with_config(ConfigFile::from_model(&cfg))
        .with_parameters(&plan)
        .with_outputs(&[&csv_name, &json_name]);

    let csv = match &comparison {
        Some(report) => comparison_csv(report, &json_name),
        None => simulation_csv(&stats, &json_name),
    };
    let report = SimulateReport {
        manifest,
        stats: stats.clone(),
        comparison,
    };
    write_file(&out_dir.join(&csv_name), &csv)?;
    write_file(&out_dir.join(&json_name), &to_json(&report))?;

    // stdout summary
    println!("server  mean      ci        utilization");
    for j in 0..stats.per_server_mean_queue_length.len() {
        println!(
            "{:>6}  {:<8.4}  {:<8.4}  {:.4}",
            j + 1,
            stats.per_server_mean_queue_length[j],
            stats.per_server_ci_halfwidth[j],
            stats.utilization[j]
        );
    }
    println!("total   {:<8.4}  {:<8.4}", stats.total_mean, stats.total_ci_halfwidth);
    if let Some(cmp) = &report.comparison {
        let within = cmp.differences.iter().filter(|d| d.abs() <= 0.15).count();
        println!("reference match: {within}/10 servers within 0.15");
    }
    println!("reports: {} {}", out_dir.join(&csv_name).display(), out_dir.join(&json_name).display());
    Ok(())
}
