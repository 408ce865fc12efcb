//! Two-particle kernels driven by the gap process `x2(t) - x1(t)`, which
//! moves at slope `-2v`, `0`, or `+2v` and changes regime at the combined
//! switch rate `2 lambda` (either particle switches, a fair coin picks
//! which). Meeting times are exact roots of linear segments.

use rand::Rng;

use crate::error::{Error, Result};
use crate::params::{Params, PatternPair};

use super::sample_exp;

/// Outcome of one first-meeting replica.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MeetingOutcome {
    /// Meeting instant, or the censor horizon when `censored`.
    pub time: f64,
    /// No meeting happened before `t_max`.
    pub censored: bool,
    /// The meeting happened with zero switches: `time = z/(2v)` exactly.
    pub at_atom: bool,
}

/// Simulates the first meeting of two particles at gap `z > 0` with initial
/// regime pair `pattern`, censored at `t_max`.
pub fn simulate_first_meeting<R: Rng + ?Sized>(
    pattern: PatternPair,
    z: f64,
    params: Params,
    t_max: f64,
    rng: &mut R,
) -> Result<MeetingOutcome> {
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::Domain(format!("z must be > 0, got {z}")));
    }
    if t_max.is_nan() || t_max <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "t_max must be > 0, got {t_max}"
        )));
    }
    let v = params.v();
    let lambda = params.lambda();
    let mut t = 0.0_f64;
    let mut gap = z;
    let mut state = pattern;
    let mut switches = 0u64;
    loop {
        let slope = state.gap_slope_factor() * v;
        let t_event = t + sample_exp(rng, 2.0 * lambda);
        if slope < 0.0 {
            // Meeting is the exact root of the linear gap segment.
            let t_hit = t + gap / (2.0 * v);
            if t_hit <= t_event && t_hit <= t_max {
                return Ok(MeetingOutcome {
                    time: t_hit,
                    censored: false,
                    at_atom: switches == 0,
                });
            }
        }
        if t_event >= t_max {
            return Ok(MeetingOutcome {
                time: t_max,
                censored: true,
                at_atom: false,
            });
        }
        gap += slope * (t_event - t);
        t = t_event;
        if rng.random::<bool>() {
            state.left = state.left.flipped();
        } else {
            state.right = state.right.flipped();
        }
        switches += 1;
    }
}

/// Counts the zero crossings of the gap process up to `horizon`, continuing
/// past each meeting: a hard collision of the labelled pair is exactly a
/// crossing of the two independent paths.
///
/// A tangential landing on zero (gap hits 0 at a switch instant and
/// retreats to the same side) counts as zero crossings.
pub fn simulate_pair_collisions<R: Rng + ?Sized>(
    pattern: PatternPair,
    z: f64,
    params: Params,
    horizon: f64,
    rng: &mut R,
) -> Result<u64> {
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::Domain(format!("z must be > 0, got {z}")));
    }
    if horizon.is_nan() || horizon <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "horizon must be > 0, got {horizon}"
        )));
    }
    let v = params.v();
    let lambda = params.lambda();
    let mut t = 0.0_f64;
    let mut gap = z;
    let mut sign = 1.0_f64; // z > 0
    let mut state = pattern;
    let mut count = 0u64;
    loop {
        let slope = state.gap_slope_factor() * v;
        let t_event = t + sample_exp(rng, 2.0 * lambda);
        let t_end = t_event.min(horizon);
        let gap_end = gap + slope * (t_end - t);
        if gap_end != 0.0 {
            let new_sign = gap_end.signum();
            if new_sign != sign {
                count += 1;
                sign = new_sign;
            }
        }
        if t_event >= horizon {
            return Ok(count);
        }
        gap = gap_end;
        t = t_end;
        if rng.random::<bool>() {
            state.left = state.left.flipped();
        } else {
            state.right = state.right.flipped();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::RngStream;

    fn p11() -> Params {
        Params::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn deterministic_approach_when_switchless() {
        let params = Params::new(2.0, 1e-12).unwrap();
        let mut rng = RngStream::new(1, 0).rng();
        let out =
            simulate_first_meeting(PatternPair::APPROACH, 1.0, params, 10.0, &mut rng).unwrap();
        assert!(!out.censored);
        assert!(out.at_atom);
        assert_eq!(out.time, 1.0 / (2.0 * 2.0));
    }

    #[test]
    fn separating_pair_never_meets_early() {
        let params = p11();
        for i in 0..2_000 {
            let mut rng = RngStream::new(2, i).rng();
            let out =
                simulate_first_meeting(PatternPair::SEPARATE, 1.0, params, 50.0, &mut rng)
                    .unwrap();
            assert!(out.time >= 0.5, "replica {i}: {}", out.time);
            assert!(!out.at_atom);
        }
    }

    #[test]
    fn atom_frequency_matches_analytic_mass() {
        let params = p11();
        let n = 100_000u64;
        let mut hits = 0u64;
        for i in 0..n {
            let mut rng = RngStream::new(3, i).rng();
            let out =
                simulate_first_meeting(PatternPair::APPROACH, 1.0, params, 1.0, &mut rng).unwrap();
            if out.at_atom {
                assert_eq!(out.time, 0.5);
                assert!(!out.censored);
                hits += 1;
            }
        }
        let freq = hits as f64 / n as f64;
        let want = (-1.0f64).exp();
        let three_se = 3.0 * (want * (1.0 - want) / n as f64).sqrt();
        assert!(
            (freq - want).abs() <= three_se,
            "freq {freq} want {want} +- {three_se}"
        );
    }

    #[test]
    fn censoring_below_minimal_meeting_time() {
        let params = p11();
        let mut rng = RngStream::new(4, 0).rng();
        let out =
            simulate_first_meeting(PatternPair::APPROACH, 1.0, params, 0.25, &mut rng).unwrap();
        assert!(out.censored);
        assert_eq!(out.time, 0.25);
    }

    #[test]
    fn collision_count_zero_before_reach() {
        let params = p11();
        for i in 0..500 {
            let mut rng = RngStream::new(5, i).rng();
            let count =
                simulate_pair_collisions(PatternPair::APPROACH, 1.0, params, 0.4, &mut rng)
                    .unwrap();
            assert_eq!(count, 0, "replica {i}");
        }
    }

    #[test]
    fn counts_nondecreasing_in_horizon_under_common_randomness() {
        let params = p11();
        for i in 0..200 {
            let mut prev = 0;
            for &horizon in &[1.0, 2.0, 4.0, 8.0] {
                let mut rng = RngStream::new(6, i).rng();
                let count =
                    simulate_pair_collisions(PatternPair::APPROACH, 1.0, params, horizon, &mut rng)
                        .unwrap();
                assert!(count >= prev, "replica {i} horizon {horizon}");
                prev = count;
            }
        }
    }

    #[test]
    fn validation() {
        let params = p11();
        let mut rng = RngStream::new(7, 0).rng();
        assert!(simulate_first_meeting(PatternPair::APPROACH, 0.0, params, 1.0, &mut rng).is_err());
        assert!(
            simulate_first_meeting(PatternPair::APPROACH, 1.0, params, 0.0, &mut rng).is_err()
        );
        assert!(
            simulate_pair_collisions(PatternPair::APPROACH, -1.0, params, 1.0, &mut rng).is_err()
        );
    }
}
