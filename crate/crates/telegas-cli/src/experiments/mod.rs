//! The experiment registry and shared sampling helpers.

mod boundary;
mod identity;
mod meeting;
mod renewal;

use telegas::params::{Params, PatternPair};
use telegas::sim::{simulate_first_meeting, MeetingOutcome};

use crate::config::ResolvedConfig;
use crate::report::{ArtifactDir, RunReport};
use crate::runner::{phase_stream, run_replicas};
use crate::CliError;

/// Runs the experiment named in the config.
pub fn dispatch(
    cfg: &ResolvedConfig,
    out: &mut ArtifactDir,
    report: &mut RunReport,
) -> Result<(), CliError> {
    match cfg.experiment.as_str() {
        "first-meeting" => meeting::first_meeting(cfg, out, report),
        "laplace-check" => meeting::laplace_check(cfg, out, report),
        "kac" => meeting::kac(cfg, out, report),
        "tail" => meeting::tail(cfg, out, report),
        "renewal" => renewal::renewal(cfg, out, report),
        "renewal-scaling" => renewal::renewal_scaling(cfg, out, report),
        "lemma3-bound" => renewal::lemma3_bound(cfg, out, report),
        "free-path" => renewal::free_path(cfg, out, report),
        "collision-rate" => renewal::collision_rate(cfg, out, report),
        "ergodic" => boundary::ergodic(cfg, out, report),
        "stationary" => boundary::stationary(cfg, out, report),
        "order-stats" => boundary::order_stats(cfg, out, report),
        "reflect-density" => boundary::reflect_density(cfg, out, report),
        "levy-identity" => identity::levy_identity(cfg, out, report),
        "analytic-grid" => identity::analytic_grid(cfg, out, report),
        other => Err(CliError::Usage(format!("unknown experiment {other:?}"))),
    }
}

/// Replicated first-meeting sample for one phase of an experiment.
pub(crate) fn sample_meetings(
    cfg: &ResolvedConfig,
    phase: u64,
    replicas: u64,
    pattern: PatternPair,
    z: f64,
    params: Params,
    t_max: f64,
) -> Result<Vec<MeetingOutcome>, CliError> {
    let seed = cfg.seed;
    let workers = cfg.workers;
    let results = run_replicas(replicas, workers, |i| {
        let mut rng = phase_stream(seed, phase, i).rng();
        simulate_first_meeting(pattern, z, params, t_max, &mut rng)
    });
    results.into_iter().collect::<Result<Vec<_>, _>>().map_err(CliError::from)
}

/// Mean and three-standard-error half width of `f` over the outcomes.
pub(crate) fn mean_3se(values: impl Iterator<Item = f64>) -> (f64, f64, u64) {
    let vals: Vec<f64> = values.collect();
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, 3.0 * (var / n).sqrt(), vals.len() as u64)
}

/// Evenly spaced grid `lo..=hi` with `steps + 1` points.
pub(crate) fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..=steps)
        .map(|k| lo + (hi - lo) * k as f64 / steps as f64)
        .collect()
}
