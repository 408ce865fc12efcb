//! Experiment runner: seeded, parallel-replicated experiments over the
//! telegas library, emitting plot-ready CSV and a machine-readable JSON
//! report with self-contained verdicts.

pub mod config;
pub mod experiments;
pub mod report;
pub mod runner;

use std::time::Instant;

pub use config::{PartialConfig, ResolvedConfig, EXPERIMENTS};
pub use report::{ArtifactDir, RunReport};

/// Runner-level error; distinguishes usage problems (exit 1 with a usage
/// message) from execution failures (exit 1 after cleanup).
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Io(String),
    Exec(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Exec(m) => write!(f, "execution error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<telegas::Error> for CliError {
    fn from(e: telegas::Error) -> Self {
        CliError::Exec(e.to_string())
    }
}

/// Executes the configured experiment: writes the resolved config, the
/// experiment's CSV artifacts, and `report.json` into the output directory,
/// and returns the report. On failure every partial artifact is removed.
pub fn run(cfg: ResolvedConfig) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let mut out = ArtifactDir::create(&cfg.out_dir)?;
    let mut report = RunReport::new(&cfg);
    let resolved = serde_json::to_string_pretty(&cfg)
        .map_err(|e| CliError::Exec(format!("config serialization: {e}")))?;
    match write_and_run(&cfg, &mut out, &mut report, &resolved) {
        Ok(()) => {
            report.wall_time_s = started.elapsed().as_secs_f64();
            report.artifacts.push("report.json".into());
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Exec(format!("report serialization: {e}")))?;
            out.write_text("report.json", &json)?;
            Ok(report)
        }
        Err(e) => {
            out.remove_partial();
            Err(e)
        }
    }
}

fn write_and_run(
    cfg: &ResolvedConfig,
    out: &mut ArtifactDir,
    report: &mut RunReport,
    resolved: &str,
) -> Result<(), CliError> {
    let name = out.write_text("resolved_config.json", resolved)?;
    report.artifacts.push(name);
    experiments::dispatch(cfg, out, report)
}
