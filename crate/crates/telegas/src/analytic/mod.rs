//! Closed-form laws for the first meeting of two telegraph particles and
//! everything derived from them.
//!
//! Two particles at gap `z > 0` with regime pair `(k1, k2)` meet at a random
//! time `tau` whose Laplace transform is [`meeting_laplace`]. The law of
//! `tau` is a [`MixedDistribution`]: for the approaching pair an atom of
//! mass `e^(-lambda z / v)` at `t0 = z/(2v)` (both particles switch-free
//! until contact) plus an absolutely continuous part; the other regime pairs
//! are convolutions of the approaching law with one or two copies of the
//! regime-delay law [`delay_density`], exactly mirroring the factorization
//! of the transforms.

mod order_stats;
mod reflecting;
mod renewal;
mod wiener;

pub use order_stats::{order_statistic_cdf, uniform_order_statistic_cdf};
pub use reflecting::{
    reflected_position_density, reflected_position_density_eval, ReflectingDensityParams,
    SeriesEval,
};
pub use renewal::{
    collision_kernel, expected_collisions, expected_collisions_for, expected_collisions_total,
};
pub use wiener::{
    wiener_meeting_cdf, wiener_meeting_cdf_with, wiener_meeting_pdf, wiener_meeting_pdf_with,
};

use crate::error::{Error, Result};
use crate::numerics::{self, integrate, integrate_to_inf};
use crate::params::{Params, PatternPair};

/// Which constants the densities use.
///
/// `Corrected` uses the coefficient `2 z lambda` for the continuous part of
/// the approaching law and the diffusive-limit transform `e^(-(z/c) sqrt s)`;
/// both are pinned by normalization and by agreement with the Laplace
/// transforms. `PaperLiteral` switches to the alternative printed constants
/// (`z lambda / (2 v^2)` and `e^(-c z sqrt s)`) so runs can audit the two
/// variants side by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum Convention {
    #[default]
    Corrected,
    PaperLiteral,
}

/// Default absolute tolerance for direct (single) quadratures.
const TOL_DIRECT: f64 = 1e-9;
/// Tolerance of the inner quadrature inside convolution densities.
const TOL_INNER: f64 = 1e-9;
/// Tolerance of outer quadratures over convolution densities.
const TOL_OUTER: f64 = 1e-6;

/// `sqrt(s^2 + 4 lambda s)`.
fn sqrt_term(s: f64, lambda: f64) -> f64 {
    (s * s + 4.0 * lambda * s).sqrt()
}

/// Laplace transform `E[e^(-s tau)]` of the first-meeting time for the given
/// regime pair at gap `z`, for `s >= 0`.
///
/// With `r = sqrt(s^2 + 4 lambda s)` and `q = (s + 2 lambda - r)/(2 lambda)`:
/// approach `e^(-z r / (2v))`, parallel pairs `q` times that, separating
/// `q^2` times that. At `s = 0` all four equal 1 (the meeting is almost
/// surely finite).
pub fn meeting_laplace(pattern: PatternPair, s: f64, z: f64, params: Params) -> Result<f64> {
    if s.is_nan() || s < 0.0 {
        return Err(Error::Domain(format!("s must be >= 0, got {s}")));
    }
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::Domain(format!("z must be > 0, got {z}")));
    }
    let (v, lambda) = (params.v(), params.lambda());
    let r = sqrt_term(s, lambda);
    let phi01 = (-(z / (2.0 * v)) * r).exp();
    let q = (s + 2.0 * lambda - r) / (2.0 * lambda);
    Ok(match pattern {
        PatternPair::APPROACH => phi01,
        PatternPair::SEPARATE => q * q * phi01,
        _ => q * phi01,
    })
}

/// Density of the regime-delay law: the extra meeting delay contributed by
/// each factor `q(s)` in the transforms. Equals
/// `e^(-2 lambda t) I1(2 lambda t) / t` with the removable limit `lambda`
/// at `t = 0`; integrates to 1.
pub fn delay_density(t: f64, params: Params) -> f64 {
    let lambda = params.lambda();
    if t == 0.0 {
        return lambda;
    }
    debug_assert!(t > 0.0);
    numerics::i1_scaled(2.0 * lambda * t).expect("t >= 0") / t
}

/// Density of the sum of two independent regime delays:
/// `2 e^(-2 lambda t) I2(2 lambda t) / t`, vanishing at `t = 0`.
fn delay_density_twice(t: f64, params: Params) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let lambda = params.lambda();
    2.0 * numerics::i2_scaled(2.0 * lambda * t).expect("t >= 0") / t
}

/// Law of the first-meeting time: a point mass plus a continuous density on
/// `(t0, inf)` with `t0 = z / (2v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedDistribution {
    pattern: PatternPair,
    z: f64,
    params: Params,
    convention: Convention,
    atom_time: f64,
    atom_mass: f64,
    /// Atom weight of the underlying approaching law; feeds the convolution
    /// terms of the other patterns.
    approach_atom: f64,
}

/// Law of the first-meeting time `tau` for the given regime pair.
pub fn first_meeting_law(
    pattern: PatternPair,
    z: f64,
    params: Params,
) -> Result<MixedDistribution> {
    first_meeting_law_with(Convention::Corrected, pattern, z, params)
}

/// [`first_meeting_law`] with an explicit constants convention.
pub fn first_meeting_law_with(
    convention: Convention,
    pattern: PatternPair,
    z: f64,
    params: Params,
) -> Result<MixedDistribution> {
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::Domain(format!("z must be > 0, got {z}")));
    }
    let approach_atom = (-params.lambda() * z / params.v()).exp();
    let atom_mass = if pattern.is_approaching() {
        approach_atom
    } else {
        0.0
    };
    Ok(MixedDistribution {
        pattern,
        z,
        params,
        convention,
        atom_time: z / (2.0 * params.v()),
        atom_mass,
        approach_atom,
    })
}

impl MixedDistribution {
    pub fn pattern(&self) -> PatternPair {
        self.pattern
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn params(&self) -> Params {
        self.params
    }

    /// Earliest possible meeting time `t0 = z / (2v)`.
    pub fn atom_time(&self) -> f64 {
        self.atom_time
    }

    /// Mass of the point at `t0`; positive only for the approaching pair.
    pub fn atom_mass(&self) -> f64 {
        self.atom_mass
    }

    /// Continuous part of the approaching density at `t >= t0`:
    /// `coef * e^(-2 lambda t) I1((lambda/v) sqrt(4 v^2 t^2 - z^2))
    ///  / sqrt(4 v^2 t^2 - z^2)`,
    /// with `coef = 2 z lambda` (corrected) and the removable limit
    /// `z lambda^2 e^(-lambda z/v) / v` at `t -> t0+`.
    fn approach_density(&self, t: f64) -> f64 {
        let (v, lambda) = (self.params.v(), self.params.lambda());
        let z = self.z;
        let coef = match self.convention {
            Convention::Corrected => 2.0 * z * lambda,
            Convention::PaperLiteral => z * lambda / (2.0 * v * v),
        };
        let root_sq = 4.0 * v * v * t * t - z * z;
        if root_sq <= 0.0 && t < self.atom_time {
            return 0.0;
        }
        let root = root_sq.max(0.0).sqrt();
        let x = lambda / v * root;
        if x < 0.5 {
            // I1(x)/sqrt(...) = (lambda/v) I1(x)/x, by the ascending series;
            // exact at the removable point x = 0.
            let x2 = x * x / 4.0;
            let mut term = 0.5;
            let mut i1_over_x = term;
            for m in 1..30 {
                term *= x2 / (m as f64 * (m + 1) as f64);
                i1_over_x += term;
            }
            coef * (-2.0 * lambda * t).exp() * lambda / v * i1_over_x
        } else {
            coef * numerics::i1_scaled(x).expect("x >= 0") * (x - 2.0 * lambda * t).exp() / root
        }
    }

    /// Continuous density at `t`. Zero below `t0`. For the parallel and
    /// separating pairs this evaluates a convolution by quadrature and can
    /// therefore report a budget error.
    pub fn density(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < self.atom_time {
            return Ok(0.0);
        }
        let t0 = self.atom_time;
        match self.pattern {
            PatternPair::APPROACH => Ok(self.approach_density(t)),
            pat => {
                let kernel: fn(f64, Params) -> f64 = if pat == PatternPair::SEPARATE {
                    delay_density_twice
                } else {
                    delay_density
                };
                let atom_part = self.approach_atom * kernel(t - t0, self.params);
                if t == t0 {
                    return Ok(atom_part);
                }
                // Both factors concentrate near their own endpoint, so on a
                // long interval a single starting panel would see neither;
                // seed segments on a geometric ladder from each end.
                let pts = endpoint_ladder(t0, t, 1.0 / self.params.lambda());
                let conv = numerics::integrate_segmented(
                    |u: f64| self.approach_density(u) * kernel(t - u, self.params),
                    &pts,
                    TOL_INNER,
                )?;
                Ok(atom_part + conv.value)
            }
        }
    }

    /// CDF `P(tau <= t)`, including the atom for `t >= t0`.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        if t < self.atom_time {
            return Ok(0.0);
        }
        Ok((self.atom_mass + self.continuous_cdf(t)?).min(1.0))
    }

    /// Left limit `P(tau < t)`; differs from [`Self::cdf`] only at the atom.
    pub fn cdf_left(&self, t: f64) -> Result<f64> {
        if t <= self.atom_time {
            return Ok(0.0);
        }
        self.cdf(t)
    }

    fn continuous_cdf(&self, t: f64) -> Result<f64> {
        let t0 = self.atom_time;
        if t <= t0 {
            return Ok(0.0);
        }
        let tol = self.direct_or_outer_tol();
        Ok(integrate(|u: f64| self.density_unchecked(u), t0, t, tol)?.value)
    }

    fn density_unchecked(&self, t: f64) -> f64 {
        // Inner budget failures surface as NaN, which the outer quadrature
        // propagates; in practice the inner integrals are smooth and small.
        self.density(t).unwrap_or(f64::NAN)
    }

    fn direct_or_outer_tol(&self) -> f64 {
        if self.pattern.is_approaching() {
            TOL_DIRECT
        } else {
            TOL_OUTER
        }
    }

    /// CDF right and left limits at each point of an ascending grid,
    /// integrated incrementally so the cost is one short quadrature per
    /// grid step rather than one full integral per point.
    pub fn cdf_batch(&self, sorted_ts: &[f64]) -> Result<Vec<(f64, f64)>> {
        debug_assert!(sorted_ts.windows(2).all(|w| w[0] <= w[1]));
        let t0 = self.atom_time;
        let mut out = Vec::with_capacity(sorted_ts.len());
        let mut acc = 0.0_f64; // continuous mass up to `prev`
        let mut prev = t0;
        for &t in sorted_ts {
            if t < t0 {
                out.push((0.0, 0.0));
                continue;
            }
            if t > prev {
                acc += integrate(|u: f64| self.density_unchecked(u), prev, t, 1e-11)?.value;
                prev = t;
            }
            let right = (self.atom_mass + acc).min(1.0);
            let left = if t == t0 { 0.0 } else { right };
            out.push((right, left));
        }
        Ok(out)
    }

    /// Survival `P(tau > t)` by a tail integral (avoids cancellation in
    /// `1 - cdf` deep in the tail). The substitution `t = a + r^2`,
    /// `r = u/(1-u)` flattens the `t^(-3/2)` tail exactly.
    pub fn survival(&self, t: f64) -> Result<f64> {
        let a = t.max(self.atom_time);
        let tail = integrate(
            |u: f64| {
                let s = 1.0 - u;
                let r = u / s;
                self.density_unchecked(a + r * r) * 2.0 * r / (s * s)
            },
            0.0,
            1.0,
            self.direct_or_outer_tol(),
        )?
        .value;
        let atom = if t < self.atom_time {
            self.atom_mass
        } else {
            0.0
        };
        Ok((tail + atom).clamp(0.0, 1.0))
    }

    /// Total mass `atom + integral of the density`; equals 1 for the
    /// corrected constants (the normalization audit).
    pub fn total_mass(&self) -> Result<f64> {
        let t0 = self.atom_time;
        let cont = integrate(
            |u: f64| {
                let s = 1.0 - u;
                let r = u / s;
                self.density_unchecked(t0 + r * r) * 2.0 * r / (s * s)
            },
            0.0,
            1.0,
            self.direct_or_outer_tol(),
        )?
        .value;
        Ok(self.atom_mass + cont)
    }

    /// Numerical Laplace transform `E[e^(-s tau)]` of this law; cross-checks
    /// [`meeting_laplace`].
    pub fn laplace(&self, s: f64) -> Result<f64> {
        let t0 = self.atom_time;
        let cont = integrate_to_inf(
            |t: f64| (-s * t).exp() * self.density_unchecked(t),
            t0,
            self.direct_or_outer_tol(),
        )?
        .value;
        Ok(self.atom_mass * (-s * t0).exp() + cont)
    }

    /// Partial moment `E[tau^alpha; tau <= t_cap]` together with a flag set
    /// when the full moment diverges. The density decays like `t^(-3/2)`,
    /// so `E[tau^alpha]` is finite exactly for `alpha < 1/2`; the flag comes
    /// from extrapolating that power tail past `t_cap`.
    pub fn partial_moment(&self, alpha: f64, t_cap: f64) -> Result<PartialMoment> {
        if alpha < 0.0 {
            return Err(Error::Domain(format!("alpha must be >= 0, got {alpha}")));
        }
        if t_cap <= self.atom_time {
            return Err(Error::Domain(format!(
                "t_cap must exceed the minimal meeting time {}, got {t_cap}",
                self.atom_time
            )));
        }
        let body = integrate(
            |t: f64| t.powf(alpha) * self.density_unchecked(t),
            self.atom_time,
            t_cap,
            self.direct_or_outer_tol(),
        )?
        .value;
        let atom_part = self.atom_mass * self.atom_time.powf(alpha);
        // Tail integrand ~ const * t^(alpha - 3/2): divergent iff the
        // exponent is >= -1, i.e. alpha >= 1/2.
        let diverges = alpha >= 0.5;
        Ok(PartialMoment {
            value: atom_part + body,
            diverges,
        })
    }
}

/// Segment endpoints `a = p0 < p1 < ... < b` growing geometrically away
/// from both endpoints with initial step `scale`.
fn endpoint_ladder(a: f64, b: f64, scale: f64) -> Vec<f64> {
    let len = b - a;
    let mut pts = vec![a, b];
    let mut d = scale.min(len / 4.0);
    while d < len / 2.0 {
        pts.push(a + d);
        pts.push(b - d);
        d *= 4.0;
    }
    pts.sort_by(|x, y| x.total_cmp(y));
    pts.dedup();
    pts
}

/// Result of [`MixedDistribution::partial_moment`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialMoment {
    /// Moment restricted to `tau <= t_cap`.
    pub value: f64,
    /// True when the untruncated moment is infinite.
    pub diverges: bool,
}

/// Log-scale residual of the infinite-divisibility identity for the
/// approaching transform: the exponent `-(z/2v) sqrt(s^2 + 4 lambda s)`
/// minus its Levy-Khintchine form
/// `-(z/2v) s - (z lambda / v) * integral of (1 - e^(-s y)) e^(-2 lambda y)
/// I1(2 lambda y) / y dy`.
///
/// A residual below ~1e-6 certifies the identity numerically; the integral
/// is evaluated by quadrature, independently of the closed form.
pub fn levy_exponent_residual(s: f64, z: f64, params: Params) -> Result<f64> {
    if s.is_nan() || s <= 0.0 {
        return Err(Error::Domain(format!("s must be > 0, got {s}")));
    }
    let (v, lambda) = (params.v(), params.lambda());
    if z == 0.0 {
        return Ok(0.0);
    }
    let lhs = -(z / (2.0 * v)) * sqrt_term(s, lambda);
    // Levy integral with the y = r^2, r = u/(1-u) substitution to flatten
    // the y^(-3/2) tail of the Levy measure.
    let j = integrate(
        |u: f64| {
            let w = 1.0 - u;
            let r = u / w;
            let y = r * r;
            let f = if y == 0.0 {
                0.0
            } else {
                (1.0 - (-s * y).exp()) * numerics::i1_scaled(2.0 * lambda * y).expect("y >= 0")
                    / y
            };
            f * 2.0 * r / (w * w)
        },
        0.0,
        1.0,
        1e-10,
    )?
    .value;
    let rhs = -(z / (2.0 * v)) * s - z * lambda / v * j;
    Ok(lhs - rhs)
}
