//! Command-line front end for the heterogeneous-server queueing engine.
//!
//! Subcommands: `simulate` (discrete-event runs, optionally against a preset
//! reference table), `experiment` (the preset tables directly), `reward`
//! (finite-horizon or discounted series values, optionally cross-checked
//! against the truncated-state oracle), `oracle` (stationary, transient, and
//! resolvent computations), and `design` (criterion sweeps over candidate
//! grids). Every report embeds its run manifest; rerunning with the same
//! arguments reproduces the files byte for byte.
//!
//! Exit codes: 0 success, 2 validation/usage, 3 capacity, 4 numerical.

mod commands;
mod config;
mod manifest;
mod report;

use clap::{Args, Parser, Subcommand};
use hetsim_core::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hetsim", version, about = "Heterogeneous-server supermarket model toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct PlanArgs {
    /// PRNG seed recorded in the manifest.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Warmup time discarded before measurement.
    #[arg(long, default_value_t = 1000.0)]
    warmup: f64,
    /// Measured simulation time per replication.
    #[arg(long, default_value_t = 10000.0)]
    measure: f64,
    /// Independent replications (each on its own substream).
    #[arg(long, default_value_t = 30)]
    replications: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a model configuration and write per-server statistics.
    Simulate {
        /// JSON model configuration.
        #[arg(long, required_unless_present = "preset", conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Built-in experiment preset (one, two, three); adds the reference
        /// comparison table.
        #[arg(long)]
        preset: Option<String>,
        #[command(flatten)]
        plan: PlanArgs,
        /// Directory for the CSV and JSON reports.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run a preset experiment and compare against its reference column.
    Experiment {
        /// Preset name: one, two, or three.
        #[arg(long)]
        preset: String,
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Exact expected-reward computation (finite horizon or discounted).
    Reward {
        #[arg(long)]
        config: PathBuf,
        /// finite or discounted.
        #[arg(long)]
        mode: String,
        /// Horizon for --mode finite.
        #[arg(long, conflicts_with = "beta")]
        t: Option<f64>,
        /// Discount rate for --mode discounted.
        #[arg(long)]
        beta: Option<f64>,
        /// rmin, rmax, total, queue:<i>, or constant:<c>.
        #[arg(long, default_value = "rmin")]
        reward: String,
        /// Initial queue lengths, comma separated; all zeros if omitted.
        #[arg(long)]
        state: Option<String>,
        /// Exact series depth override.
        #[arg(long)]
        exact_depth: Option<usize>,
        /// Truncation tail target.
        #[arg(long, default_value_t = 1e-10)]
        tail_epsilon: f64,
        /// Monte Carlo paths past the exact depth.
        #[arg(long, default_value_t = 10000)]
        mc_samples: u64,
        /// Event-tree node budget before the Monte Carlo fallback.
        #[arg(long, default_value_t = 5_000_000)]
        node_budget: usize,
        /// Drop idle-server event mass instead of keeping it as a self-loop;
        /// per-step distributions then sum to less than one and are reported
        /// as-is.
        #[arg(long)]
        drop_idle_mass: bool,
        /// Also solve the truncated-state oracle and report the difference.
        #[arg(long)]
        compare_oracle: bool,
        /// Per-server buffer cap for --compare-oracle.
        #[arg(long, default_value_t = 6)]
        buffer: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ground-truth computations on the buffer-truncated state space.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        /// Per-server buffer cap.
        #[arg(long, default_value_t = 6)]
        buffer: u32,
        /// stationary, transient, or discounted.
        #[arg(long)]
        mode: String,
        #[arg(long, conflicts_with = "beta")]
        t: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value = "total")]
        reward: String,
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate design criteria over a candidate grid.
    Design {
        /// JSON grid file: {"candidates": [<config>, ...]}.
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        delta1: f64,
        #[arg(long)]
        delta2: f64,
        #[arg(long)]
        state: Option<String>,
        #[arg(long, default_value_t = 1e-8)]
        tail_epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("HETSIM_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    let result = match cli.command {
        Command::Simulate {
            config,
            preset,
            plan,
            out_dir,
        } => commands::simulate::run(config.as_deref(), preset.as_deref(), &plan, &out_dir),
        Command::Experiment {
            preset,
            plan,
            out_dir,
        } => commands::simulate::run(None, Some(&preset), &plan, &out_dir),
        Command::Reward {
            config,
            mode,
            t,
            beta,
            reward,
            state,
            exact_depth,
            tail_epsilon,
            mc_samples,
            node_budget,
            drop_idle_mass,
            compare_oracle,
            buffer,
            seed,
            out,
        } => commands::reward::run(commands::reward::RewardArgs {
            config,
            mode,
            horizon: t,
            beta,
            reward,
            state,
            exact_depth,
            tail_epsilon,
            mc_samples,
            node_budget,
            drop_idle_mass,
            compare_oracle,
            buffer,
            seed,
            out,
        }),
        Command::Oracle {
            config,
            buffer,
            mode,
            t,
            beta,
            reward,
            state,
            out,
        } => commands::oracle::run(commands::oracle::OracleArgs {
            config,
            buffer,
            mode,
            horizon: t,
            beta,
            reward,
            state,
            out,
        }),
        Command::Design {
            grid,
            beta,
            delta1,
            delta2,
            state,
            tail_epsilon,
            seed,
            out_dir,
        } => commands::design::run(&grid, beta, delta1, delta2, state.as_deref(), tail_epsilon, seed, &out_dir),
    };
    eprintln!("wall-clock: {:.3}s", started.elapsed().as_secs_f64());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Validation(_) => 2,
                Error::Capacity(_) => 3,
                Error::Numerical(_) | Error::Structural(_) => 4,
            })
        }
    }
}
