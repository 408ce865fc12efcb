//! Exact, discretization-free Monte Carlo for telegraph particles.
//!
//! Every path is piecewise linear between direction switches (and boundary
//! reflections), so all event times are roots of linear equations; no time
//! grid exists anywhere. Replication is reproducible: a [`RngStream`] is a
//! `(seed, stream_id)` pair that fully determines every sample, and distinct
//! stream ids give statistically independent streams.

mod gas;
mod meeting;
mod reflected;

pub use gas::{simulate_gas, EventKind, GasEvent, GasResult};
pub use meeting::{simulate_first_meeting, simulate_pair_collisions, MeetingOutcome};
pub use reflected::{
    reflected_fold, sample_reflected_position, time_average, PathIntegrand, Polynomial,
    QuadratureIntegrand, StartPosition,
};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{Params, VelocityState};

/// Reproducible random stream: `(seed, stream_id)` determines every sample.
/// Replicas use the same seed with their replica index as the stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    /// Generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Exponential variate with the given rate; uses one uniform draw.
pub(crate) fn sample_exp<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    let u: f64 = rng.random();
    -(1.0 - u).ln() / rate
}

/// Fair-coin direction draw.
pub(crate) fn sample_direction<R: Rng + ?Sized>(rng: &mut R) -> VelocityState {
    if rng.random::<bool>() {
        VelocityState::Plus
    } else {
        VelocityState::Minus
    }
}

/// One linear piece of a path: from `(time, position)` onward with the given
/// slope until the next breakpoint (or the horizon).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub time: f64,
    pub position: f64,
    pub slope: f64,
}

/// Piecewise-linear telegraph path on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    breakpoints: Vec<Breakpoint>,
    horizon: f64,
}

impl Trajectory {
    pub fn origin(&self) -> f64 {
        self.breakpoints[0].position
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    fn segment_at(&self, t: f64) -> &Breakpoint {
        let idx = self.breakpoints.partition_point(|bp| bp.time <= t);
        &self.breakpoints[idx.saturating_sub(1)]
    }

    /// Exact position at `t in [0, horizon]`.
    pub fn position_at(&self, t: f64) -> f64 {
        debug_assert!((0.0..=self.horizon).contains(&t));
        let seg = self.segment_at(t);
        seg.position + seg.slope * (t - seg.time)
    }

    /// Slope of the segment containing `t`.
    pub fn slope_at(&self, t: f64) -> f64 {
        self.segment_at(t).slope
    }
}

/// What produced a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) enum PathEventKind {
    Switch,
    Reflect { at_upper: bool },
}

/// Samples one telegraph path with i.i.d. exponential inter-switch times,
/// reflected at `0` and `b` when a boundary is present. Returns the path and
/// its breakpoint provenance.
pub(crate) fn build_path<R: Rng + ?Sized>(
    y0: f64,
    xi0: VelocityState,
    params: Params,
    boundary: Option<f64>,
    horizon: f64,
    rng: &mut R,
) -> (Trajectory, Vec<(f64, PathEventKind)>) {
    let v = params.v();
    let lambda = params.lambda();
    let mut t = 0.0_f64;
    let mut x = y0;
    let mut slope = xi0.velocity(v);
    let mut breakpoints = vec![Breakpoint {
        time: t,
        position: x,
        slope,
    }];
    let mut events = Vec::new();
    let mut next_switch = sample_exp(rng, lambda);
    loop {
        // Next boundary contact on the current heading, if any.
        let t_bounce = boundary.map(|b| {
            let dt = if slope > 0.0 { (b - x) / v } else { x / v };
            t + dt
        });
        let t_next = next_switch
            .min(horizon)
            .min(t_bounce.unwrap_or(f64::INFINITY));
        if t_next >= horizon {
            break;
        }
        if let Some(tb) = t_bounce {
            if tb < next_switch {
                // Land exactly on the wall; velocity sign reverses.
                let b = boundary.unwrap();
                let at_upper = slope > 0.0;
                x = if at_upper { b } else { 0.0 };
                t = tb;
                slope = -slope;
                breakpoints.push(Breakpoint {
                    time: t,
                    position: x,
                    slope,
                });
                events.push((t, PathEventKind::Reflect { at_upper }));
                continue;
            }
        }
        // Direction switch.
        x += slope * (next_switch - t);
        t = next_switch;
        slope = -slope;
        breakpoints.push(Breakpoint {
            time: t,
            position: x,
            slope,
        });
        events.push((t, PathEventKind::Switch));
        next_switch = t + sample_exp(rng, lambda);
    }
    (
        Trajectory {
            breakpoints,
            horizon,
        },
        events,
    )
}

/// Samples a free (unbounded) telegraph path started at `y0` with regime
/// `xi0`: exponential inter-switch times, slope flipping at each switch.
pub fn sample_trajectory<R: Rng + ?Sized>(
    y0: f64,
    xi0: VelocityState,
    params: Params,
    horizon: f64,
    rng: &mut R,
) -> Result<Trajectory> {
    if horizon.is_nan() || horizon <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "horizon must be > 0, got {horizon}"
        )));
    }
    Ok(build_path(y0, xi0, params, None, horizon, rng).0)
}

/// Reflected variant of [`sample_trajectory`] on `[0, b]`.
pub fn sample_reflected_trajectory<R: Rng + ?Sized>(
    y0: f64,
    xi0: VelocityState,
    params: Params,
    b: f64,
    horizon: f64,
    rng: &mut R,
) -> Result<Trajectory> {
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
    Ok(build_path(y0, xi0, params, Some(b), horizon, rng).0)
}
