//! Experiment configuration: JSON file and command-line flags merged into a
//! fully resolved, reproducible description of one run.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// The experiment registry, in documentation order.
pub const EXPERIMENTS: &[&str] = &[
    "first-meeting",
    "laplace-check",
    "kac",
    "renewal",
    "renewal-scaling",
    "lemma3-bound",
    "free-path",
    "ergodic",
    "stationary",
    "order-stats",
    "collision-rate",
    "reflect-density",
    "levy-identity",
    "tail",
    "analytic-grid",
];

/// Partially specified configuration, as read from a JSON file or flags.
/// Every field that affects results is optional here and pinned during
/// resolution.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub experiment: Option<String>,
    pub seed: Option<u64>,
    pub replicas: Option<u64>,
    pub workers: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub paper_literal: Option<bool>,
    pub v: Option<f64>,
    pub lambda: Option<f64>,
    pub z: Option<f64>,
    pub pattern: Option<String>,
    pub n: Option<usize>,
    pub b: Option<f64>,
    /// Horizon / censoring time, the `--T` flag.
    pub horizon: Option<f64>,
    pub c: Option<f64>,
    pub eps: Option<Vec<f64>>,
    pub alpha: Option<Vec<f64>>,
    pub grid: Option<Vec<f64>>,
    pub positions: Option<Vec<f64>>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    /// Field-wise override: values in `over` win.
    pub fn merged_with(mut self, over: PartialConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(
            experiment, seed, replicas, workers, out_dir, paper_literal, v, lambda, z, pattern,
            n, b, horizon, c, eps, alpha, grid, positions
        );
        self
    }
}

/// Fully pinned configuration; serialized next to every run's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub experiment: String,
    pub seed: u64,
    pub replicas: u64,
    pub workers: usize,
    pub out_dir: PathBuf,
    pub paper_literal: bool,
    pub v: f64,
    pub lambda: f64,
    pub z: f64,
    pub pattern: String,
    pub n: usize,
    pub b: f64,
    pub horizon: f64,
    pub c: f64,
    pub eps: Vec<f64>,
    pub alpha: Vec<f64>,
    pub grid: Vec<f64>,
    pub positions: Option<Vec<f64>>,
}

/// Per-experiment defaults for replica count and horizon.
fn defaults_for(experiment: &str) -> (u64, f64) {
    match experiment {
        "first-meeting" => (100_000, 1e6),
        "laplace-check" => (100_000, 200.0),
        "kac" => (10_000, 1e6),
        "renewal" => (10_000, 5.0),
        "renewal-scaling" => (1_000, 1.0),
        "lemma3-bound" => (100_000, 2.0),
        "free-path" => (4_000, 2.0),
        "ergodic" => (1, 10_000.0),
        "stationary" => (10_000, 2.0),
        "order-stats" => (10_000, 1.0),
        "collision-rate" => (1_000, 100.0),
        "reflect-density" => (1, 1.0),
        "levy-identity" => (1, 1.0),
        "tail" => (100_000, 1_000.0),
        "analytic-grid" => (1, 5.0),
        _ => (10_000, 1.0),
    }
}

impl PartialConfig {
    /// Pins every field, filling experiment-appropriate defaults. The seed
    /// is mandatory: there is no wall-clock fallback.
    pub fn resolve(self) -> Result<ResolvedConfig, CliError> {
        let experiment = self
            .experiment
            .ok_or_else(|| CliError::Usage("no experiment named".into()))?;
        if !EXPERIMENTS.contains(&experiment.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown experiment {experiment:?}; known: {}",
                EXPERIMENTS.join(", ")
            )));
        }
        let seed = self.seed.ok_or_else(|| {
            CliError::Usage("seed is mandatory (pass --seed or set it in the config)".into())
        })?;
        let (def_replicas, def_horizon) = defaults_for(&experiment);
        let replicas = self.replicas.unwrap_or(def_replicas);
        if replicas < 1 {
            return Err(CliError::Usage("replicas must be >= 1".into()));
        }
        let pattern = self.pattern.unwrap_or_else(|| "01".into());
        telegas::PatternPair::parse(&pattern).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(ResolvedConfig {
            experiment,
            seed,
            replicas,
            workers: self.workers.unwrap_or(1).max(1),
            out_dir: self.out_dir.unwrap_or_else(|| PathBuf::from("out")),
            paper_literal: self.paper_literal.unwrap_or(false),
            v: self.v.unwrap_or(1.0),
            lambda: self.lambda.unwrap_or(1.0),
            z: self.z.unwrap_or(1.0),
            pattern,
            n: self.n.unwrap_or(5),
            b: self.b.unwrap_or(1.0),
            horizon: self.horizon.unwrap_or(def_horizon),
            c: self.c.unwrap_or(1.0),
            eps: self.eps.unwrap_or_default(),
            alpha: self
                .alpha
                .unwrap_or_else(|| vec![0.0, 0.25, 0.5]),
            grid: self.grid.unwrap_or_default(),
            positions: self.positions,
        })
    }
}

impl ResolvedConfig {
    pub fn params(&self) -> Result<telegas::Params, CliError> {
        telegas::Params::new(self.v, self.lambda).map_err(CliError::from)
    }

    pub fn pattern_pair(&self) -> telegas::PatternPair {
        telegas::PatternPair::parse(&self.pattern).expect("validated at resolution")
    }

    pub fn convention(&self) -> telegas::analytic::Convention {
        if self.paper_literal {
            telegas::analytic::Convention::PaperLiteral
        } else {
            telegas::analytic::Convention::Corrected
        }
    }

    /// Epsilon ladder with the experiment-appropriate default.
    pub fn eps_or(&self, default: &[f64]) -> Vec<f64> {
        if self.eps.is_empty() {
            default.to_vec()
        } else {
            self.eps.clone()
        }
    }

    /// Evaluation grid with a default.
    pub fn grid_or(&self, default: &[f64]) -> Vec<f64> {
        if self.grid.is_empty() {
            default.to_vec()
        } else {
            self.grid.clone()
        }
    }
}
