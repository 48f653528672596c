//! Configuration-driven k-sweeps over the quantization modules, with CSV,
//! JSON and SVG reports. The `hitchin-lab` binary wraps [`execute`].
//!
//! Exit codes: 0 success, 1 numerical failure, 2 hypothesis failure (for
//! example a degenerate mapping class), 3 configuration error.

mod cache;
mod config;
mod report;
mod sweep;

pub use cache::{frame, CACHE_ENV};
pub use config::{validate, ConfigError, Experiment, ExperimentConfig, TOLERANCES};
pub use report::{to_csv, to_json, to_svg, write_atomic, write_reports};
pub use sweep::{
    conjugation_test_symbols, fit_slope, measure, tuynman_fields, FailureKind, FailureReport, Row,
    SlopeFit, SweepReport, KERNEL_SOURCE, MIN_FIT_POINTS,
};

use std::path::Path;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

/// A CLI command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Run(std::path::PathBuf),
    Validate(std::path::PathBuf),
    ListExperiments,
}

fn load(path: &Path) -> Result<ExperimentConfig, Vec<String>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| vec![format!("{}: {e}", path.display())])?;
    validate(&text).map_err(|errs| errs.iter().map(ToString::to_string).collect())
}

/// Runs a command, printing to stdout and stderr, and returns the exit
/// code.
pub fn execute(cmd: &Command) -> i32 {
    match cmd {
        Command::ListExperiments => {
            for e in Experiment::ALL {
                println!("{:<12} {}", e.name(), e.description());
            }
            EXIT_OK
        }
        Command::Validate(path) => match load(path) {
            Ok(cfg) => {
                println!("ok: {} over k = {:?}", cfg.experiment.name(), cfg.k_list);
                EXIT_OK
            }
            Err(errs) => {
                errs.iter().for_each(|e| eprintln!("error: {e}"));
                EXIT_CONFIG
            }
        },
        Command::Run(path) => {
            let cfg = match load(path) {
                Ok(cfg) => cfg,
                Err(errs) => {
                    errs.iter().for_each(|e| eprintln!("error: {e}"));
                    return EXIT_CONFIG;
                }
            };
            let report = measure(&cfg);
            if let Err(e) = write_reports(&cfg.output_dir, &report) {
                eprintln!(
                    "error: writing reports to {}: {e}",
                    cfg.output_dir.display()
                );
                return EXIT_NUMERICAL;
            }
            for r in &report.rows {
                println!(
                    "k = {:>4}  measured = {:.6e}  k·measured = {:.6e}",
                    r.k, r.measured, r.k_times_measured
                );
            }
            if let Some(fit) = &report.slope {
                println!(
                    "slope = {:.4} ± {:.4} over {} points",
                    fit.slope, fit.half_width, fit.points
                );
            }
            match &report.error {
                None => EXIT_OK,
                Some(f) => {
                    eprintln!("error at k = {}, tau = {:?}: {}", f.k, f.tau, f.message);
                    match f.kind {
                        FailureKind::Hypothesis => EXIT_HYPOTHESIS,
                        FailureKind::Numerical => EXIT_NUMERICAL,
                    }
                }
            }
        }
    }
}
