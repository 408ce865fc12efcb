//! Special functions and quadrature used by the analytic layer.
//!
//! All Bessel evaluations go through exponentially scaled primitives
//! `e^-x * I_nu(x)` because every formula in this crate pairs `I_nu` with a
//! matching decaying exponential; the unscaled values are recovered by one
//! multiplication and overflow only where the true product would.

mod bessel;
mod beta;
mod erf;
mod quad;
mod series;

pub use bessel::{
    bessel_i, i0, i0_scaled, i1, i1_scaled, i1_scaled_asymptotic_ratio, i2_scaled,
};
pub use beta::{ln_gamma, reg_inc_beta};
pub use erf::{erf, erfc};
pub use quad::{
    integrate, integrate_segmented, integrate_to_inf, integrate_with_budget, QuadratureResult,
};
pub(crate) use quad::rule15;
pub use series::{sum_series, SeriesSum};
