use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use telegas_cli::{config::PartialConfig, run, CliError};

/// Batch experiments for interacting telegraph particles: exact event-driven
/// Monte Carlo audited against the closed-form laws. Each run writes CSV
/// data files and a self-contained report.json; the exit code is 0 when all
/// verdicts pass, 2 when any fails, 1 on an execution error.
#[derive(Parser, Debug)]
#[command(name = "telegas", version, about)]
struct Cli {
    /// Experiment to run: first-meeting, laplace-check, kac, renewal,
    /// renewal-scaling, lemma3-bound, free-path, ergodic, stationary,
    /// order-stats, collision-rate, reflect-density, levy-identity, tail,
    /// analytic-grid
    experiment: String,

    /// JSON config file; command-line flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,

    /// RNG seed (mandatory here or in the config; no wall-clock default)
    #[arg(long)]
    seed: Option<u64>,

    /// Number of Monte Carlo replicas
    #[arg(long)]
    replicas: Option<u64>,

    /// Worker threads; results are identical for any value
    #[arg(long)]
    workers: Option<usize>,

    /// Output directory for report.json and CSV artifacts
    #[arg(long)]
    out: Option<PathBuf>,

    /// Use the literal printed constants of the source derivation for the
    /// meeting density coefficient and the diffusive-limit scale, for
    /// side-by-side audit
    #[arg(long)]
    paper_literal: bool,

    /// Initial gap between the two particles
    #[arg(long)]
    z: Option<f64>,

    /// Initial regime pair: 00, 01 (approaching), 10 (separating), or 11
    #[arg(long)]
    pattern: Option<String>,

    /// Particle speed
    #[arg(long)]
    v: Option<f64>,

    /// Direction-switching intensity
    #[arg(long)]
    lambda: Option<f64>,

    /// Comma-separated epsilon ladder for diffusive-scaling experiments
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,

    /// Limiting diffusion speed in the scaling lambda = eps^-2, v = c/eps
    #[arg(long)]
    c: Option<f64>,

    /// Particle count for gas experiments
    #[arg(long)]
    n: Option<usize>,

    /// Reflecting-boundary position (the segment is [0, b])
    #[arg(long)]
    b: Option<f64>,

    /// Horizon / censoring time
    #[arg(long = "T")]
    horizon: Option<f64>,

    /// Comma-separated moment orders for the tail experiment
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,

    /// Comma-separated evaluation grid (times or positions, per experiment)
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,

    /// Comma-separated initial particle positions (strictly increasing)
    #[arg(long, value_delimiter = ',')]
    positions: Option<Vec<f64>>,
}

impl Cli {
    fn into_partial(self) -> (Option<PathBuf>, PartialConfig) {
        let flags = PartialConfig {
            experiment: Some(self.experiment),
            seed: self.seed,
            replicas: self.replicas,
            workers: self.workers,
            out_dir: self.out,
            paper_literal: self.paper_literal.then_some(true),
            v: self.v,
            lambda: self.lambda,
            z: self.z,
            pattern: self.pattern,
            n: self.n,
            b: self.b,
            horizon: self.horizon,
            c: self.c,
            eps: self.eps,
            alpha: self.alpha,
            grid: self.grid,
            positions: self.positions,
        };
        (self.config, flags)
    }
}

fn main() -> ExitCode {
    let (config_path, flags) = Cli::parse().into_partial();
    let merged = match config_path {
        Some(path) => match PartialConfig::from_file(&path) {
            Ok(file) => file.merged_with(flags),
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
        },
        None => flags,
    };
    let resolved = match merged.resolve() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(resolved) {
        Ok(report) => {
            for v in &report.verdicts {
                println!(
                    "{}: {} (observed {:.6e}, bounds [{:.6e}, {:.6e}])",
                    v.name,
                    if v.pass { "PASS" } else { "FAIL" },
                    v.observed,
                    v.lo,
                    v.hi
                );
            }
            println!(
                "{}: {} verdicts, {} passing, report in {}",
                report.experiment,
                report.verdicts.len(),
                report.verdicts.iter().filter(|v| v.pass).count(),
                report.config.out_dir.display()
            );
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e @ CliError::Usage(_)) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
