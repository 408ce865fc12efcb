//! Modified Bessel functions of the first kind, orders 0..2, real
//! nonnegative argument.
//!
//! Power series below `x = 15`, asymptotic expansion above. The scaled form
//! `e^-x * I_nu(x)` is the primitive; it stays within f64 range for all x.

use crate::error::{Error, Result};

/// Switch-over between the power series and the asymptotic expansion. At
/// this argument the optimally truncated asymptotic tail is ~e^(-2x), far
/// below f64 precision, so both branches agree to better than 1e-12.
const SERIES_CUTOFF: f64 = 15.0;

fn check_nonnegative(x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!(
            "Bessel I argument must be >= 0, got {x}"
        )));
    }
    Ok(())
}

/// `e^-x * I_nu(x)` by the ascending power series.
fn i_scaled_series(order: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    for j in 1..=order {
        term *= half / j as f64;
    }
    let mut sum = term;
    let q = half * half;
    for m in 1..200 {
        term *= q / (m as f64 * (m + order) as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum * (-x).exp()
}

/// `e^-x * I_nu(x)` by the large-argument asymptotic expansion
/// `1/sqrt(2 pi x) * sum_k (-1)^k a_k(nu) / x^k`, truncated at the smallest
/// term.
fn i_scaled_asymptotic(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut a = 1.0_f64; // a_k(nu), without the (-1)^k x^-k factor
    let mut term = 1.0_f64;
    let mut sum = term;
    let mut prev_abs = f64::INFINITY;
    for k in 1..60u32 {
        let kf = k as f64;
        a *= (mu - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf);
        let t = a / x.powi(k as i32) * if k % 2 == 1 { -1.0 } else { 1.0 };
        if t.abs() >= prev_abs {
            break; // divergent tail reached; stop at the smallest term
        }
        prev_abs = t.abs();
        sum += t;
        term = t;
        if term.abs() < sum.abs() * 1e-16 {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

fn i_scaled(order: u32, x: f64) -> Result<f64> {
    check_nonnegative(x)?;
    if x < SERIES_CUTOFF {
        Ok(i_scaled_series(order, x))
    } else {
        Ok(i_scaled_asymptotic(order, x))
    }
}

/// `e^-x * I0(x)`.
pub fn i0_scaled(x: f64) -> Result<f64> {
    i_scaled(0, x)
}

/// `e^-x * I1(x)`.
pub fn i1_scaled(x: f64) -> Result<f64> {
    i_scaled(1, x)
}

/// `e^-x * I2(x)`. Used for the twice-convolved regime-delay kernel.
pub fn i2_scaled(x: f64) -> Result<f64> {
    i_scaled(2, x)
}

/// `I0(x)`. Overflows to infinity once `e^x` does (x above ~709).
pub fn i0(x: f64) -> Result<f64> {
    Ok(i0_scaled(x)? * x.exp())
}

/// `I1(x)`.
pub fn i1(x: f64) -> Result<f64> {
    Ok(i1_scaled(x)? * x.exp())
}

/// `I_order(x)` for order in {0, 1}.
pub fn bessel_i(order: u8, x: f64) -> Result<f64> {
    match order {
        0 => i0(x),
        1 => i1(x),
        _ => Err(Error::Domain(format!("order must be 0 or 1, got {order}"))),
    }
}

/// `sqrt(2 pi x) * I1(x) * e^-x`, which tends to 1 as `x -> infinity`.
pub fn i1_scaled_asymptotic_ratio(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("x must be > 0, got {x}")));
    }
    Ok((2.0 * std::f64::consts::PI * x).sqrt() * i1_scaled(x)?)
}
