//! Report writers. All output is deterministic: fixed field order, fixed
//! float formatting, no timestamps.

use hetsim_core::Error;
use serde::Serialize;
use std::path::Path;

/// Serialize a report as pretty JSON with a trailing newline.
pub fn to_json(report: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("serializable report");
    text.push('\n');
    text
}

pub fn write_file(path: &Path, content: &str) -> Result<(), Error> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| {
                Error::validation(format!("cannot create {}: {e}", parent.display()))
            })?;
        }
    }
    std::fs::write(path, content)
        .map_err(|e| Error::validation(format!("cannot write {}: {e}", path.display())))
}

/// CSV for per-server simulation statistics; one row per server, 1-based
/// server numbering. The leading comment line names the JSON report that
/// carries this run's manifest.
pub fn simulation_csv(stats: &hetsim_core::SimStats, manifest_in: &str) -> String {
    let mut out = format!("# manifest: {manifest_in}\n");
    out.push_str("server,mean_queue_length,ci_halfwidth,utilization,throughput\n");
    for j in 0..stats.per_server_mean_queue_length.len() {
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.6},{:.6}\n",
            j + 1,
            stats.per_server_mean_queue_length[j],
            stats.per_server_ci_halfwidth[j],
            stats.utilization[j],
            stats.per_server_throughput[j],
        ));
    }
    out
}

/// CSV comparing simulated means against a reference column.
pub fn comparison_csv(report: &hetsim_core::sim::ExperimentReport, manifest_in: &str) -> String {
    let mut out = format!("# manifest: {manifest_in}\n");
    out.push_str("server,simulated_mean,reference_mean,difference,ci_halfwidth\n");
    for j in 0..report.reference_means.len() {
        out.push_str(&format!(
            "{},{:.6},{:.4},{:+.6},{:.6}\n",
            j + 1,
            report.stats.per_server_mean_queue_length[j],
            report.reference_means[j],
            report.differences[j],
            report.stats.per_server_ci_halfwidth[j],
        ));
    }
    out
}

/// CSV for a design sweep.
pub fn design_csv(report: &hetsim_core::reward::DesignReport, manifest_in: &str) -> String {
    let mut out = format!("# manifest: {manifest_in}\n");
    out.push_str("candidate,min_utility_value,max_utility_value,gap\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{:.10},{:.10},{:.10}\n",
            row.index + 1,
            row.min_utility_value,
            row.max_utility_value,
            row.gap,
        ));
    }
    out
}
