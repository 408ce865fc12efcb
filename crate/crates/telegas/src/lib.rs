//! Exact event-driven simulation and closed-form laws for systems of
//! interacting telegraph particles.
//!
//! A telegraph particle moves at constant speed `v` and reverses direction at
//! the events of a Poisson process with rate `lambda`. This crate provides:
//!
//! - [`params`]: shared domain types (speeds, switching rates, regime labels,
//!   gas configurations) and closed-form constants,
//! - [`numerics`]: the special functions and quadrature the analytic layer
//!   depends on (modified Bessel `I0`/`I1`, regularized incomplete beta,
//!   adaptive quadrature, truncated series),
//! - [`analytic`]: first-meeting laws of two particles, their Laplace
//!   transforms, the diffusive (Kac) limit, renewal functions for collision
//!   counts, order-statistic position laws, and the reflected-position
//!   density series,
//! - [`sim`]: discretization-free Monte Carlo for single particles, particle
//!   pairs, and n-particle gases with hard collisions and reflecting
//!   boundaries,
//! - [`stats`]: empirical CDFs, atom-aware Kolmogorov-Smirnov tests,
//!   confidence intervals, and tail-exponent estimation.
//!
//! Hard collisions (elastic velocity exchanges) are never simulated by
//! swapping velocities: the labelled particle positions coincide with the
//! order statistics of independent telegraph paths, so collision geometry is
//! read off the sorted independent paths exactly.

pub mod analytic;
pub mod error;
pub mod numerics;
pub mod params;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};
pub use params::{GasConfig, Params, PatternPair, VelocityState};
