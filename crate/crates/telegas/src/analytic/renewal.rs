//! Expected number of collisions of a particle pair (and of adjacent pairs
//! in an n-particle gas) up to time `t`.
//!
//! After each crossing the pair renews from gap zero in the separating
//! regime, so the expected-count transform is the first-meeting transform
//! times `(s + 2 lambda + r) / (2 s r)` with `r = sqrt(s^2 + 4 lambda s)`.
//! The inverse of that factor is the renewal kernel [`collision_kernel`];
//! the count function is the first-meeting law convolved with it.

use crate::error::{Error, Result};
use crate::numerics::{self, integrate};
use crate::params::{Params, PatternPair, VelocityState};

use super::{first_meeting_law, MixedDistribution};

/// Renewal kernel
/// `K(tau) = 1/2 + e^(-2 lambda tau) [(1/2 + lambda tau) I0(2 lambda tau)
///  + lambda tau I1(2 lambda tau)]`,
/// the expected-count response to a single meeting at lag `tau`; `K(0) = 1`.
pub fn collision_kernel(tau: f64, params: Params) -> f64 {
    debug_assert!(tau >= 0.0);
    let lt = params.lambda() * tau;
    let x = 2.0 * lt;
    let i0s = numerics::i0_scaled(x).expect("tau >= 0");
    let i1s = numerics::i1_scaled(x).expect("tau >= 0");
    0.5 + (0.5 + lt) * i0s + lt * i1s
}

/// Expected number of collisions in `(0, t)` of two particles at gap `z`
/// started in the approaching regime. Zero for `t < z/(2v)`; jumps to the
/// atom mass at `t = z/(2v)`.
pub fn expected_collisions(t: f64, z: f64, params: Params) -> Result<f64> {
    let law = first_meeting_law(PatternPair::APPROACH, z, params)?;
    expected_collisions_for(&law, t)
}

/// Expected number of collisions in `(0, t)` for a pair whose first meeting
/// follows `law`.
pub fn expected_collisions_for(law: &MixedDistribution, t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("t must be finite, got {t}")));
    }
    let t0 = law.atom_time();
    let params = law.params();
    if t < t0 {
        return Ok(0.0);
    }
    let atom_part = law.atom_mass() * collision_kernel(t - t0, params);
    if t == t0 {
        return Ok(atom_part);
    }
    let tol = if law.pattern().is_approaching() {
        1e-8
    } else {
        1e-5
    };
    let conv = integrate(
        |u: f64| {
            let d = law.density(u).unwrap_or(f64::NAN);
            d * collision_kernel(t - u, params)
        },
        t0,
        t,
        tol,
    )?;
    Ok(atom_part + conv.value)
}

/// Expected total number of collisions in an n-particle gas: the sum of the
/// pair counts over adjacent initial pairs, each with its own regime pair
/// and gap.
pub fn expected_collisions_total(
    t: f64,
    positions: &[f64],
    regimes: &[VelocityState],
    params: Params,
) -> Result<f64> {
    if positions.len() != regimes.len() {
        return Err(Error::InvalidParam(format!(
            "positions ({}) and regimes ({}) must have equal length",
            positions.len(),
            regimes.len()
        )));
    }
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParam(
            "positions must be strictly increasing".into(),
        ));
    }
    let mut total = 0.0;
    for i in 0..positions.len().saturating_sub(1) {
        let pattern = PatternPair {
            left: regimes[i],
            right: regimes[i + 1],
        };
        let gap = positions[i + 1] - positions[i];
        let law = first_meeting_law(pattern, gap, params)?;
        total += expected_collisions_for(&law, t)?;
    }
    Ok(total)
}
