//! Diffusive-limit law of the meeting instant: under the scaling
//! `lambda = eps^-2`, `v = c/eps` the first-meeting time of two telegraph
//! particles converges to the first meeting of two Brownian motions with
//! diffusion coefficient `c^2` each, whose transform is
//! `e^(-(z/c) sqrt s)`.

use crate::error::{Error, Result};
use crate::numerics::erfc;

use super::Convention;

/// Density of the Brownian-pair meeting instant at gap `z`:
/// `(z/c) e^(-z^2/(4 c^2 t)) / (2 sqrt(pi) t^(3/2))` for `t > 0`.
pub fn wiener_meeting_pdf(t: f64, z: f64, c: f64) -> Result<f64> {
    wiener_meeting_pdf_with(Convention::Corrected, t, z, c)
}

/// [`wiener_meeting_pdf`] with an explicit constants convention; the
/// literal variant uses scale factor `c z` in place of `z / c`.
pub fn wiener_meeting_pdf_with(convention: Convention, t: f64, z: f64, c: f64) -> Result<f64> {
    check(z, c)?;
    if t <= 0.0 {
        return Ok(0.0);
    }
    let scale = scale_factor(convention, z, c);
    Ok(scale * (-scale * scale / (4.0 * t)).exp()
        / (2.0 * std::f64::consts::PI.sqrt() * t.powf(1.5)))
}

/// CDF of the Brownian-pair meeting instant: `erfc(z / (2 c sqrt t))`.
pub fn wiener_meeting_cdf(t: f64, z: f64, c: f64) -> Result<f64> {
    wiener_meeting_cdf_with(Convention::Corrected, t, z, c)
}

/// [`wiener_meeting_cdf`] with an explicit constants convention.
pub fn wiener_meeting_cdf_with(convention: Convention, t: f64, z: f64, c: f64) -> Result<f64> {
    check(z, c)?;
    if t <= 0.0 {
        return Ok(0.0);
    }
    Ok(erfc(scale_factor(convention, z, c) / (2.0 * t.sqrt())))
}

fn scale_factor(convention: Convention, z: f64, c: f64) -> f64 {
    match convention {
        Convention::Corrected => z / c,
        Convention::PaperLiteral => c * z,
    }
}

fn check(z: f64, c: f64) -> Result<()> {
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::Domain(format!("z must be > 0, got {z}")));
    }
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::Domain(format!("c must be > 0, got {c}")));
    }
    Ok(())
}
