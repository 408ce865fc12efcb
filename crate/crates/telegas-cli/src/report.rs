//! Run reports and plot-ready CSV emission. Reports are self-contained:
//! every verdict records the observed number and the interval it was
//! checked against, so the exit code can be re-derived from the JSON alone.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ResolvedConfig;
use crate::CliError;
use telegas::analytic::MixedDistribution;
use telegas::stats::KsReport;

/// One scalar estimate, optionally with a confidence half-width.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Estimate {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
}

impl Estimate {
    pub fn plain(name: impl Into<String>, value: f64) -> Self {
        Estimate {
            name: name.into(),
            value,
            half_width: None,
            n: None,
        }
    }

    pub fn with_ci(name: impl Into<String>, value: f64, half_width: f64, n: u64) -> Self {
        Estimate {
            name: name.into(),
            value,
            half_width: Some(half_width),
            n: Some(n),
        }
    }
}

/// Reference (analytic) value quoted by a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Reference {
    pub name: String,
    pub value: f64,
}

/// Named goodness-of-fit report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KsEntry {
    pub name: String,
    pub statistic: f64,
    pub n_effective: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl KsEntry {
    pub fn new(name: impl Into<String>, r: KsReport) -> Self {
        KsEntry {
            name: name.into(),
            statistic: r.statistic,
            n_effective: r.n_effective,
            threshold: r.threshold,
            pass: r.pass,
        }
    }
}

/// A pass/fail check: `pass` iff `lo <= observed <= hi`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub observed: f64,
    pub lo: f64,
    pub hi: f64,
    pub pass: bool,
}

impl Verdict {
    pub fn interval(name: impl Into<String>, observed: f64, lo: f64, hi: f64) -> Self {
        Verdict {
            name: name.into(),
            observed,
            lo,
            hi,
            pass: observed.is_finite() && lo <= observed && observed <= hi,
        }
    }

    /// `|observed| <= tol` check.
    pub fn abs_within(name: impl Into<String>, observed: f64, tol: f64) -> Self {
        Self::interval(name, observed, -tol, tol)
    }

    /// Upper-bound check `observed <= hi`.
    pub fn at_most(name: impl Into<String>, observed: f64, hi: f64) -> Self {
        Self::interval(name, observed, f64::NEG_INFINITY, hi)
    }

    pub fn from_ks(name: impl Into<String>, r: KsReport) -> Self {
        Self::interval(name, r.statistic, 0.0, r.threshold)
    }
}

/// Full machine-readable record of one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub experiment: String,
    pub config: ResolvedConfig,
    pub estimates: Vec<Estimate>,
    pub references: Vec<Reference>,
    pub ks: Vec<KsEntry>,
    pub verdicts: Vec<Verdict>,
    pub wall_time_s: f64,
    pub artifacts: Vec<String>,
}

impl RunReport {
    pub fn new(config: &ResolvedConfig) -> Self {
        RunReport {
            experiment: config.experiment.clone(),
            config: config.clone(),
            estimates: Vec::new(),
            references: Vec::new(),
            ks: Vec::new(),
            verdicts: Vec::new(),
            wall_time_s: 0.0,
            artifacts: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// Exit code contract: 0 all verdicts pass, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            2
        }
    }
}

/// Formats a float with 17 significant digits, enough to round-trip f64
/// exactly; keeps CSV output byte-stable across runs and hosts.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writer for the run's artifact files; tracks what was written so failed
/// runs can remove their partial outputs.
pub struct ArtifactDir {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl ArtifactDir {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
        Ok(ArtifactDir {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<String, CliError> {
        let path = self.dir.join(name);
        let mut f = std::fs::File::create(&path)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
        f.write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(path);
        Ok(name.to_string())
    }

    /// CSV with a header row and 17-significant-digit numeric cells.
    pub fn write_csv(
        &mut self,
        name: &str,
        header: &str,
        rows: &[Vec<f64>],
    ) -> Result<String, CliError> {
        let mut text = String::with_capacity(rows.len() * 32 + header.len() + 1);
        text.push_str(header);
        text.push('\n');
        for row in rows {
            let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
        self.write_text(name, &text)
    }

    /// Removes every artifact written so far (failed-run cleanup).
    pub fn remove_partial(&mut self) {
        for p in self.written.drain(..) {
            let _ = std::fs::remove_file(p);
        }
    }
}

/// Writes the density/CDF grid of a meeting law: columns
/// `t,density,cdf,atom`. The law's point mass, if any, appears as one extra
/// row at its location with the mass in the `density` column and `atom=1`.
/// An empty grid yields a header-only file.
pub fn emit_density_grid(
    law: &MixedDistribution,
    grid: &[f64],
    out: &mut ArtifactDir,
    name: &str,
) -> Result<String, CliError> {
    let mut ts: Vec<f64> = grid.to_vec();
    ts.sort_by(|a, b| a.total_cmp(b));
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(ts.len() + 1);
    if !ts.is_empty() {
        let cdfs = law.cdf_batch(&ts)?;
        let mut atom_written = law.atom_mass() == 0.0;
        for (&t, &(cdf, _)) in ts.iter().zip(&cdfs) {
            if !atom_written && t >= law.atom_time() {
                let t0 = law.atom_time();
                rows.push(vec![t0, law.atom_mass(), law.cdf(t0)?, 1.0]);
                atom_written = true;
            }
            rows.push(vec![t, law.density(t)?, cdf, 0.0]);
        }
        if !atom_written {
            let t0 = law.atom_time();
            rows.push(vec![t0, law.atom_mass(), law.cdf(t0)?, 1.0]);
        }
    }
    out.write_csv(name, "t,density,cdf,atom", &rows)
}
