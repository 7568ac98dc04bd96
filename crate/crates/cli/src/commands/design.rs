//! `design` subcommand: criterion sweep over a candidate grid.

use crate::config::GridFile;
use crate::manifest::RunManifest;
use crate::report::{design_csv, to_json, write_file};
use hetsim_core::model::ModelConfig;
use hetsim_core::reward::{evaluate_design_criteria, DesignOptions, DesignReport};
use hetsim_core::Error;
use serde::Serialize;
use serde_json::json;
use std::path::Path;

#[derive(Serialize)]
struct DesignFileReport {
    manifest: RunManifest,
    report: DesignReport,
}

#[allow(clippy::too_many_arguments)]
pub fn run(
    grid_path: &Path,
    beta: f64,
    delta1: f64,
    delta2: f64,
    state: Option<&str>,
    tail_epsilon: f64,
    seed: u64,
    out_dir: &Path,
) -> Result<(), Error> {
    let grid = GridFile::load(grid_path)?;
    if grid.candidates.is_empty() {
        return Err(Error::validation("grid file lists no candidates"));
    }
    let mut configs: Vec<ModelConfig> = Vec::with_capacity(grid.candidates.len());
    for (i, file) in grid.candidates.iter().enumerate() {
        let (cfg, warnings) = file
            .to_model()
            .map_err(|e| Error::validation(format!("candidate {}: {e}", i + 1)))?;
        for w in warnings {
            eprintln!("warning: candidate {}: {w}", i + 1);
        }
        configs.push(cfg);
    }
    let servers = configs[0].server_count;
    let initial = super::parse_state(state, servers)?;

    let opts = DesignOptions {
        tail_epsilon,
        seed,
        ..DesignOptions::default()
    };
    let report = evaluate_design_criteria(&configs, &initial, beta, delta1, delta2, &opts)?;

    println!("candidate  psi(min)      psi(max)      gap");
    for row in &report.rows {
        println!(
            "{:>9}  {:<12.8}  {:<12.8}  {:.8}",
            row.index + 1,
            row.min_utility_value,
            row.max_utility_value,
            row.gap
        );
    }
    println!(
        "best min-utility: candidate {}; best max-utility: candidate {}; smallest gap: candidate {}",
        report.best_min_index + 1,
        report.best_max_index + 1,
        report.best_gap_index + 1
    );
    println!(
        "criterion one (|spread| < {}): {}",
        report.delta_one, report.criterion_one_met
    );
    println!(
        "criterion two (min gap < {}): {}",
        report.delta_two, report.criterion_two_met
    );

    let manifest = RunManifest::new("design", seed)
        .with_parameters(json!({
            "beta": beta,
            "delta1": delta1,
            "delta2": delta2,
            "tail_epsilon": tail_epsilon,
            "state": initial.0,
            "candidates": grid.candidates,
        }))
        .with_outputs(&["design.csv", "design.json"]);
    write_file(&out_dir.join("design.csv"), &design_csv(&report, "design.json"))?;
    write_file(
        &out_dir.join("design.json"),
        &to_json(&DesignFileReport { manifest, report }),
    )?;
    Ok(())
}
