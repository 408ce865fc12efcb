//! Single reflected particle: ergodic time averages along a path and
//! position sampling, plus the period-2b fold map used as a cross-check
//! oracle for event-driven reflection.

use rand::Rng;

use crate::error::{Error, Result};
use crate::params::{Params, VelocityState};

use super::{sample_direction, sample_exp};

/// Folds an unbounded coordinate into `[0, b]` by the period-2b tent map.
/// A free path folded this way coincides with the event-driven reflected
/// path, which makes this a cross-check oracle for the reflection logic.
pub fn reflected_fold(position: f64, b: f64) -> f64 {
    debug_assert!(b > 0.0);
    let m = position.rem_euclid(2.0 * b);
    if m <= b {
        m
    } else {
        2.0 * b - m
    }
}

/// Integrand that knows its own exact integral along a linear piece of the
/// path: `integral of f(x0 + slope * u) du over [0, dt]`.
pub trait PathIntegrand {
    fn segment_integral(&self, x_start: f64, slope: f64, dt: f64) -> f64;
}

/// Polynomial `c0 + c1 x + c2 x^2 + ...` with closed-form segment integrals.
pub struct Polynomial(pub Vec<f64>);

impl PathIntegrand for Polynomial {
    fn segment_integral(&self, x_start: f64, slope: f64, dt: f64) -> f64 {
        if slope == 0.0 {
            let fx: f64 = self
                .0
                .iter()
                .rev()
                .fold(0.0, |acc, &c| acc * x_start + c);
            return fx * dt;
        }
        // integral = sum_k c_k [(x0 + s dt)^(k+1) - x0^(k+1)] / ((k+1) s)
        let x_end = x_start + slope * dt;
        let mut acc = 0.0;
        let mut pow_start = x_start;
        let mut pow_end = x_end;
        for (k, &c) in self.0.iter().enumerate() {
            acc += c * (pow_end - pow_start) / ((k as f64 + 1.0) * slope);
            pow_start *= x_start;
            pow_end *= x_end;
        }
        acc
    }
}

/// Arbitrary function integrated along each segment by a fixed 15-point
/// Gauss rule; exact enough for smooth integrands over the short segments a
/// telegraph path produces.
pub struct QuadratureIntegrand<F: Fn(f64) -> f64>(pub F);

impl<F: Fn(f64) -> f64> PathIntegrand for QuadratureIntegrand<F> {
    fn segment_integral(&self, x_start: f64, slope: f64, dt: f64) -> f64 {
        // Fixed 15-point Gauss-Legendre mapped onto [0, dt].
        let half = dt / 2.0;
        let mut acc = 0.0;
        for &(node, w) in crate::numerics::rule15() {
            acc += w * (self.0)(x_start + slope * (half + half * node));
        }
        acc * half
    }
}

/// Time average `(1/T) * integral of f(S(t)) dt` along one reflected
/// telegraph path started at `y0`, accumulated exactly per linear segment.
pub fn time_average<R: Rng + ?Sized>(
    f: &dyn PathIntegrand,
    y0: f64,
    params: Params,
    b: f64,
    horizon: f64,
    rng: &mut R,
) -> Result<f64> {
    if horizon.is_nan() || horizon <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "horizon must be > 0, got {horizon}"
        )));
    }
    if b.is_nan() || b <= 0.0 || !(0.0..=b).contains(&y0) {
        return Err(Error::InvalidParam(format!(
            "need 0 <= y0 <= b with b > 0, got y0={y0} b={b}"
        )));
    }
    let xi0 = sample_direction(rng);
    let mut walker = ReflectedWalker::new(y0, xi0, params, b);
    let mut acc = 0.0;
    let mut t = 0.0;
    while t < horizon {
        let (dt, x, slope) = walker.next_segment(rng, horizon - t);
        acc += f.segment_integral(x, slope, dt);
        t += dt;
    }
    Ok(acc / horizon)
}

/// Where a reflected-position sample starts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StartPosition {
    Fixed(f64),
    /// Uniform on `[0, b]`; the stationary initial law.
    Uniform,
}

/// Position `S(t)` of one reflected telegraph path with fair-coin initial
/// direction and the given initial position law.
pub fn sample_reflected_position<R: Rng + ?Sized>(
    t: f64,
    start: StartPosition,
    params: Params,
    b: f64,
    rng: &mut R,
) -> Result<f64> {
    if b.is_nan() || b <= 0.0 {
        return Err(Error::InvalidParam(format!("b must be > 0, got {b}")));
    }
    if t < 0.0 {
        return Err(Error::InvalidParam(format!("t must be >= 0, got {t}")));
    }
    let y0 = match start {
        StartPosition::Fixed(y) => {
            if !(0.0..=b).contains(&y) {
                return Err(Error::InvalidParam(format!(
                    "start must lie in [0, {b}], got {y}"
                )));
            }
            y
        }
        StartPosition::Uniform => rng.random::<f64>() * b,
    };
    let xi0 = sample_direction(rng);
    if t == 0.0 {
        return Ok(y0);
    }
    let mut walker = ReflectedWalker::new(y0, xi0, params, b);
    let mut elapsed = 0.0;
    while elapsed < t {
        let (dt, _, _) = walker.next_segment(rng, t - elapsed);
        elapsed += dt;
    }
    Ok(walker.x)
}

/// Segment-by-segment walker for a reflected path; avoids storing the
/// trajectory when only summaries are needed.
struct ReflectedWalker {
    x: f64,
    slope: f64,
    b: f64,
    v: f64,
    next_switch_in: f64,
    lambda: f64,
}

impl ReflectedWalker {
    fn new(y0: f64, xi0: VelocityState, params: Params, b: f64) -> Self {
        ReflectedWalker {
            x: y0,
            slope: xi0.velocity(params.v()),
            b,
            v: params.v(),
            next_switch_in: f64::NAN, // drawn lazily on first use
            lambda: params.lambda(),
        }
    }

    /// Advances by one linear segment of length at most `dt_cap` and
    /// returns `(dt, start position, slope)` of the segment traversed.
    fn next_segment<R: Rng + ?Sized>(&mut self, rng: &mut R, dt_cap: f64) -> (f64, f64, f64) {
        if self.next_switch_in.is_nan() {
            self.next_switch_in = sample_exp(rng, self.lambda);
        }
        let dt_bounce = if self.slope > 0.0 {
            (self.b - self.x) / self.v
        } else {
            self.x / self.v
        };
        let start = (self.x, self.slope);
        if dt_cap <= self.next_switch_in && dt_cap <= dt_bounce {
            // Horizon cut: advance within the segment.
            self.x += self.slope * dt_cap;
            self.next_switch_in -= dt_cap;
            return (dt_cap, start.0, start.1);
        }
        if dt_bounce < self.next_switch_in {
            self.x = if self.slope > 0.0 { self.b } else { 0.0 };
            self.slope = -self.slope;
            self.next_switch_in -= dt_bounce;
            (dt_bounce, start.0, start.1)
        } else {
            let dt = self.next_switch_in;
            self.x += self.slope * dt;
            self.slope = -self.slope;
            self.next_switch_in = sample_exp(rng, self.lambda);
            (dt, start.0, start.1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{sample_reflected_trajectory, RngStream};

    fn p11() -> Params {
        Params::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn fold_values() {
        assert_eq!(reflected_fold(0.3, 1.0), 0.3);
        assert!((reflected_fold(1.2, 1.0) - 0.8).abs() < 1e-15);
        assert!((reflected_fold(-0.4, 1.0) - 0.4).abs() < 1e-15);
        assert_eq!(reflected_fold(2.0, 1.0), 0.0);
        assert_eq!(reflected_fold(3.0, 1.0), 1.0);
        assert!((reflected_fold(-2.3, 1.0) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn fold_matches_event_driven_reflection() {
        // Same switch times: fold(free path) == reflected path. Use a
        // switchless particle so both paths share the deterministic part.
        let params = Params::new(1.3, 1e-12).unwrap();
        let mut rng = RngStream::new(21, 0).rng();
        let traj = sample_reflected_trajectory(0.4, VelocityState::Plus, params, 1.0, 9.0, &mut rng)
            .unwrap();
        for k in 0..=300 {
            let t = 9.0 * k as f64 / 300.0;
            let free = 0.4 + 1.3 * t;
            assert!(
                (traj.position_at(t) - reflected_fold(free, 1.0)).abs() < 1e-9,
                "t = {t}"
            );
        }
    }

    #[test]
    fn constant_function_averages_to_itself() {
        let mut rng = RngStream::new(22, 0).rng();
        let avg = time_average(&Polynomial(vec![1.0]), 0.3, p11(), 1.0, 50.0, &mut rng).unwrap();
        assert!((avg - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ergodic_averages_match_uniform_moments() {
        // f(x) = x -> 1/2, f(x) = x^2 -> 1/3 on [0, 1].
        let mut rng = RngStream::new(23, 0).rng();
        let avg_x =
            time_average(&Polynomial(vec![0.0, 1.0]), 0.3, p11(), 1.0, 10_000.0, &mut rng)
                .unwrap();
        assert!((avg_x - 0.5).abs() <= 0.01, "avg {avg_x}");
        let mut rng = RngStream::new(23, 1).rng();
        let avg_x2 =
            time_average(&Polynomial(vec![0.0, 0.0, 1.0]), 0.3, p11(), 1.0, 10_000.0, &mut rng)
                .unwrap();
        assert!((avg_x2 - 1.0 / 3.0).abs() <= 0.01, "avg {avg_x2}");
    }

    #[test]
    fn quadrature_integrand_agrees_with_polynomial() {
        let poly = Polynomial(vec![0.5, -1.0, 2.0]);
        let quad = QuadratureIntegrand(|x: f64| 0.5 - x + 2.0 * x * x);
        for &(x0, s, dt) in &[(0.2, 1.0, 0.7), (0.9, -1.0, 0.3), (0.5, 1.0, 0.0)] {
            let a = poly.segment_integral(x0, s, dt);
            let b = quad.segment_integral(x0, s, dt);
            assert!((a - b).abs() < 1e-12, "x0={x0} s={s} dt={dt}");
        }
    }

    #[test]
    fn position_sampling_basics() {
        let mut rng = RngStream::new(24, 0).rng();
        let x = sample_reflected_position(0.0, StartPosition::Fixed(0.3), p11(), 1.0, &mut rng)
            .unwrap();
        assert_eq!(x, 0.3);
        for i in 0..500 {
            let mut rng = RngStream::new(24, i).rng();
            let x =
                sample_reflected_position(2.0, StartPosition::Uniform, p11(), 1.0, &mut rng)
                    .unwrap();
            assert!((0.0..=1.0).contains(&x));
        }
        assert!(
            sample_reflected_position(1.0, StartPosition::Fixed(2.0), p11(), 1.0, &mut RngStream::new(0, 0).rng())
                .is_err()
        );
    }

    #[test]
    fn switchless_position_is_the_fold() {
        let params = Params::new(1.0, 1e-12).unwrap();
        for &t in &[0.2, 0.7, 1.4, 2.9] {
            let mut rng = RngStream::new(25, 0).rng();
            let x =
                sample_reflected_position(t, StartPosition::Fixed(0.3), params, 1.0, &mut rng)
                    .unwrap();
            // Direction is a coin; accept either folded image.
            let up = reflected_fold(0.3 + t, 1.0);
            let down = reflected_fold(0.3 - t, 1.0);
            assert!(
                (x - up).abs() < 1e-9 || (x - down).abs() < 1e-9,
                "t={t} x={x} up={up} down={down}"
            );
        }
    }
}
