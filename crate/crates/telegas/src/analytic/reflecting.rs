//! Transition density of a single telegraph particle on `[0, b]` with
//! reflecting boundaries, by its cosine eigenfunction series
//!
//! `p(t, x | y) = 1/b + (2/b) e^(-lambda t) *
//!     sum_{n>=1} [cosh(theta_n t) + (lambda/theta_n) sinh(theta_n t)]
//!                * cos(pi n y / b) cos(pi n x / b)`
//!
//! with `theta_n = sqrt(lambda^2 - (pi v n / b)^2)`. For
//! `lambda < pi v n / b` the root is imaginary and the bracket becomes
//! `cos(omega_n t) + (lambda/omega_n) sin(omega_n t)` with real
//! `omega_n = sqrt((pi v n / b)^2 - lambda^2)`.
//!
//! The hyperbolic terms are evaluated in the scaled forms
//! `e^(-lambda t) cosh(theta t) = (e^((theta-lambda)t) + e^(-(theta+lambda)t))/2`
//! (note `theta_n < lambda` in the real branch), so nothing overflows.
//!
//! The oscillatory terms carry the finite-speed wavefronts of the law (the
//! exact distribution keeps point masses of total weight `e^(-lambda t)`),
//! so their magnitudes decay in `t` but not in `n`: the series is summed to
//! a term budget and the evaluation reports whether the envelope-based
//! stopping rule was ever satisfied. Averages of the series in `x` or `y`
//! are insensitive to the truncation point because every cosine integrates
//! to zero.

use crate::error::{Error, Result};
use crate::params::Params;

/// Evaluation controls for the reflected-position density series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectingDensityParams {
    b: f64,
    params: Params,
    max_terms: usize,
    tol: f64,
    t_min: f64,
}

impl ReflectingDensityParams {
    /// Defaults: 400-term budget, envelope tolerance 1e-9, and the small-time
    /// gate `t_min = b / (10 v)` below which the truncated series is not
    /// numerically meaningful.
    pub fn new(b: f64, params: Params) -> Result<Self> {
        if !b.is_finite() || b <= 0.0 {
            return Err(Error::InvalidParam(format!("b must be > 0, got {b}")));
        }
        Ok(ReflectingDensityParams {
            b,
            params,
            max_terms: 400,
            tol: 1e-9,
            t_min: b / (10.0 * params.v()),
        })
    }

    pub fn with_truncation(mut self, max_terms: usize, tol: f64) -> Self {
        self.max_terms = max_terms.max(1);
        self.tol = tol;
        self
    }

    pub fn with_t_min(mut self, t_min: f64) -> Self {
        self.t_min = t_min;
        self
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }
}

/// A truncated series value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub value: f64,
    pub terms: usize,
    /// True when three consecutive term envelopes fell below the tolerance;
    /// false when the term budget cut the sum instead.
    pub converged: bool,
}

/// Time factor of the n-th mode and an upper bound on its magnitude.
fn mode_factor(n: usize, t: f64, b: f64, params: Params) -> (f64, f64) {
    let (v, lambda) = (params.v(), params.lambda());
    let k = std::f64::consts::PI * v * n as f64 / b;
    let theta_sq = lambda * lambda - k * k;
    if theta_sq > 1e-12 * lambda * lambda {
        let theta = theta_sq.sqrt();
        // (1 + lambda/theta) e^((theta-lambda)t)/2 + (1 - lambda/theta) e^(-(theta+lambda)t)/2
        let plus = (1.0 + lambda / theta) * ((theta - lambda) * t).exp() / 2.0;
        let minus = (1.0 - lambda / theta) * (-(theta + lambda) * t).exp() / 2.0;
        (plus + minus, plus + minus.abs())
    } else if theta_sq.abs() <= 1e-12 * lambda * lambda {
        // Degenerate root: cosh + (lambda/theta) sinh -> 1 + lambda t.
        let e = (1.0 + lambda * t) * (-lambda * t).exp();
        (e, e.abs())
    } else {
        let omega = (-theta_sq).sqrt();
        let damp = (-lambda * t).exp();
        let e = damp * ((omega * t).cos() + lambda / omega * (omega * t).sin());
        (e, damp * (1.0 + (lambda / omega) * (lambda / omega)).sqrt())
    }
}

/// Truncated series evaluation of `p(t, x | y)`.
///
/// Errors on `t < t_min` or coordinates outside `[0, b]`. The returned
/// `converged` flag distinguishes an envelope-terminated sum from a
/// budget-terminated one.
pub fn reflected_position_density_eval(
    t: f64,
    x: f64,
    y: f64,
    rp: &ReflectingDensityParams,
) -> Result<SeriesEval> {
    let b = rp.b;
    if t < rp.t_min {
        return Err(Error::Domain(format!(
            "t = {t} is below the series gate t_min = {}",
            rp.t_min
        )));
    }
    if !(0.0..=b).contains(&x) || !(0.0..=b).contains(&y) {
        return Err(Error::Domain(format!(
            "positions must lie in [0, {b}], got x={x} y={y}"
        )));
    }
    let mut sum = 1.0 / b;
    let mut streak = 0usize;
    let mut terms = 0usize;
    let pi = std::f64::consts::PI;
    for n in 1..=rp.max_terms {
        let (factor, bound) = mode_factor(n, t, b, rp.params);
        let nf = n as f64;
        sum += 2.0 / b * factor * (pi * nf * y / b).cos() * (pi * nf * x / b).cos();
        terms = n;
        if (2.0 / b * bound).abs() < rp.tol {
            streak += 1;
            if streak == 3 {
                return Ok(SeriesEval {
                    value: sum,
                    terms,
                    converged: true,
                });
            }
        } else {
            streak = 0;
        }
    }
    Ok(SeriesEval {
        value: sum,
        terms,
        converged: false,
    })
}

/// `p(t, x | y)` as a plain value; a budget-terminated sum surfaces as a
/// budget error carrying the partial value.
pub fn reflected_position_density(
    t: f64,
    x: f64,
    y: f64,
    rp: &ReflectingDensityParams,
) -> Result<f64> {
    let eval = reflected_position_density_eval(t, x, y, rp)?;
    if eval.converged {
        Ok(eval.value)
    } else {
        Err(Error::BudgetExceeded {
            context: format!(
                "reflected-position series truncated at {} terms without settling",
                eval.terms
            ),
            partial: eval.value,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate;

    fn rp11() -> ReflectingDensityParams {
        ReflectingDensityParams::new(1.0, Params::new(1.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn gates_and_domain() {
        let rp = rp11();
        assert!(reflected_position_density_eval(0.05, 0.5, 0.5, &rp).is_err());
        assert!(reflected_position_density_eval(1.0, 1.5, 0.5, &rp).is_err());
        assert!(reflected_position_density_eval(1.0, 0.5, -0.1, &rp).is_err());
    }

    #[test]
    fn symmetry_in_x_and_y() {
        let rp = rp11();
        for &t in &[0.5, 1.0, 3.0] {
            for k in 0..=4 {
                let x = 0.1 + 0.2 * k as f64;
                for j in 0..=4 {
                    let y = 0.1 + 0.2 * j as f64;
                    let a = reflected_position_density_eval(t, x, y, &rp).unwrap().value;
                    let b = reflected_position_density_eval(t, y, x, &rp).unwrap().value;
                    assert!((a - b).abs() < 1e-12, "t={t} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn integrates_to_one_in_x() {
        // Every cosine term integrates to zero over [0, b], so the truncated
        // series integrates to 1 regardless of where it was cut.
        let rp = rp11();
        for &(t, y) in &[(1.0, 0.2), (1.0, 0.5), (2.5, 0.3)] {
            let mass = integrate(
                |x: f64| {
                    reflected_position_density_eval(t, x, y, &rp)
                        .unwrap()
                        .value
                },
                0.0,
                1.0,
                1e-6,
            )
            .unwrap()
            .value;
            assert!((mass - 1.0).abs() < 1e-4, "t={t} y={y}: mass {mass}");
        }
    }

    #[test]
    fn uniform_mixture_stays_uniform() {
        // (1/b) * integral over y of p(t, x | y) = 1/b pointwise.
        let rp = rp11();
        for &x in &[0.15, 0.5, 0.85] {
            let mix = integrate(
                |y: f64| {
                    reflected_position_density_eval(1.0, x, y, &rp)
                        .unwrap()
                        .value
                },
                0.0,
                1.0,
                1e-9,
            )
            .unwrap()
            .value;
            assert!((mix - 1.0).abs() < 1e-8, "x={x}: mixture {mix}");
        }
    }

    #[test]
    fn real_branch_converges_fast() {
        // Large lambda relative to pi v / b puts many modes in the real
        // branch, where magnitudes decay in n; the envelope rule then
        // terminates the sum.
        let params = Params::new(0.05, 10.0).unwrap();
        let rp = ReflectingDensityParams::new(1.0, params)
            .unwrap()
            .with_truncation(5000, 1e-10);
        let eval = reflected_position_density_eval(5.0, 0.4, 0.6, &rp).unwrap();
        assert!(eval.converged, "terms used: {}", eval.terms);
        assert!(eval.value > 0.0);
        // Plain wrapper agrees.
        let v = reflected_position_density(5.0, 0.4, 0.6, &rp).unwrap();
        assert_eq!(v, eval.value);
    }

    #[test]
    fn oscillatory_budget_reports_partial() {
        let rp = rp11(); // all modes oscillatory at v = lambda = b = 1
        let err = reflected_position_density(1.0, 0.4, 0.6, &rp).unwrap_err();
        let partial = err.partial_value().expect("carries partial");
        assert!(partial.is_finite());
    }

    #[test]
    fn degenerate_mode_handled() {
        // lambda = pi v n / b exactly at n = 1.
        let lambda = std::f64::consts::PI;
        let params = Params::new(1.0, lambda).unwrap();
        let rp = ReflectingDensityParams::new(1.0, params).unwrap();
        let eval = reflected_position_density_eval(1.0, 0.3, 0.7, &rp).unwrap();
        assert!(eval.value.is_finite());
    }
}
