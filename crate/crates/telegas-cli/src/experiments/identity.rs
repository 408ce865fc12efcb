//! Pure-formula experiments: the infinite-divisibility exponent identity
//! and tabulation of the analytic laws for plotting.

use telegas::analytic::{
    expected_collisions_for, first_meeting_law_with, levy_exponent_residual, meeting_laplace,
};

use super::linspace;
use crate::config::ResolvedConfig;
use crate::report::{emit_density_grid, ArtifactDir, Estimate, RunReport, Verdict};
use crate::CliError;

/// Residual of the Levy-Khintchine form of the approaching-pair exponent on
/// an (s, z) grid; certifies infinite divisibility numerically.
pub fn levy_identity(
    cfg: &ResolvedConfig,
    out: &mut ArtifactDir,
    report: &mut RunReport,
) -> Result<(), CliError> {
    let params = cfg.params()?;
    let s_grid = [0.5, 1.0, 2.0];
    let z_grid = [0.5, 1.0, 2.0];
    let mut rows = Vec::new();
    let mut max_abs = 0.0_f64;
    for &s in &s_grid {
        for &z in &z_grid {
            let r = levy_exponent_residual(s, z, params)?;
            rows.push(vec![s, z, r]);
            max_abs = max_abs.max(r.abs());
        }
    }
    report
        .estimates
        .push(Estimate::plain("max_abs_residual", max_abs));
    report
        .verdicts
        .push(Verdict::at_most("levy_identity_residual", max_abs, 1e-6));
    report
        .artifacts
        .push(out.write_csv("levy_identity.csv", "s,z,residual", &rows)?);
    Ok(())
}

/// Tabulates the meeting law's density/CDF, its transform, and the pair
/// renewal function; validates shape properties of the emitted tables.
pub fn analytic_grid(
    cfg: &ResolvedConfig,
    out: &mut ArtifactDir,
    report: &mut RunReport,
) -> Result<(), CliError> {
    let params = cfg.params()?;
    let pattern = cfg.pattern_pair();
    let law = first_meeting_law_with(cfg.convention(), pattern, cfg.z, params)?;
    let grid = cfg.grid_or(&linspace(0.0, cfg.horizon, 200));
    report
        .artifacts
        .push(emit_density_grid(&law, &grid, out, "density_grid.csv")?);

    // Shape checks on the same grid.
    let mut ts = grid.clone();
    ts.sort_by(|a, b| a.total_cmp(b));
    let cdfs = law.cdf_batch(&ts)?;
    let mut min_density = f64::INFINITY;
    let mut min_cdf_step = f64::INFINITY;
    let mut max_cdf = 0.0_f64;
    let mut prev_cdf = 0.0;
    for (&t, &(cdf, _)) in ts.iter().zip(&cdfs) {
        min_density = min_density.min(law.density(t)?);
        min_cdf_step = min_cdf_step.min(cdf - prev_cdf);
        max_cdf = max_cdf.max(cdf);
        prev_cdf = cdf;
    }
    report.verdicts.push(Verdict::interval(
        "density_nonnegative",
        min_density,
        0.0,
        f64::INFINITY,
    ));
    report.verdicts.push(Verdict::interval(
        "cdf_nondecreasing",
        min_cdf_step,
        -1e-12,
        f64::INFINITY,
    ));
    report
        .verdicts
        .push(Verdict::interval("cdf_at_most_one", max_cdf, 0.0, 1.0 + 1e-9));

    // Transform table.
    let mut phi_rows = Vec::new();
    for k in 1..=30 {
        let s = 0.1 * k as f64;
        phi_rows.push(vec![s, meeting_laplace(pattern, s, cfg.z, params)?]);
    }
    report
        .artifacts
        .push(out.write_csv("laplace_grid.csv", "s,phi", &phi_rows)?);

    // Renewal curve for the same pair.
    let mut h_rows = Vec::new();
    for &t in &ts {
        if t > law.atom_time() * 8.0 {
            break;
        }
        h_rows.push(vec![t, expected_collisions_for(&law, t)?]);
    }
    report
        .artifacts
        .push(out.write_csv("renewal_grid.csv", "t,expected_collisions", &h_rows)?);
    Ok(())
}
