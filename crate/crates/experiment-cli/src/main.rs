use clap::{Parser, Subcommand};
use experiment_cli::{execute, Command};
use std::path::PathBuf;

const AFTER_HELP: &str = "\
Exit codes: 0 success, 1 numerical failure, 2 hypothesis failure, 3 config error.

report.csv columns: k, measured, k_times_measured, then the experiment's
auxiliary diagnostics in alphabetical order:
  curvature    projective_defect, side
  transport    residual
  unitarity    trace_abs
  multipliers  residual
  egorov       conjugation_max
  trace        im_numeric, im_predicted, re_numeric, re_predicted, residual_times_k
  kernel       fixed_point_phase, magnitude_ratio, off_graph_ratio, peak_distance,
               peak_magnitude, probe_spacing, width_ratio
  tuynman      second_order_max

HITCHIN_LAB_CACHE, if set, names a directory for cached frame descriptors.";

/// Sweeps for geometric quantization on the torus.
#[derive(Debug, Parser)]
#[command(name = "hitchin-lab", version, after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run the sweep described by a config and write report.csv,
    /// report.json and plot.svg into its output_dir.
    Run { config: PathBuf },
    /// Check a config and list every problem found.
    Validate { config: PathBuf },
    /// List the available experiments.
    ListExperiments,
}

fn main() {
    let cli = Cli::parse();
    let cmd = match cli.command {
        Cmd::Run { config } => Command::Run(config),
        Cmd::Validate { config } => Command::Validate(config),
        Cmd::ListExperiments => Command::ListExperiments,
    };
    std::process::exit(execute(&cmd));
}
