//! n-particle gas simulation via the order-statistics coupling.
//!
//! The gas is simulated as n independent telegraph paths; the labelled
//! hard-collision positions are their sorted values, so collisions are
//! exactly the pairwise crossings of the independent paths and are never
//! resolved by swapping velocities. Between two consecutive global events
//! (switches and reflections) every path is linear, so each pair admits at
//! most one crossing per interval, found as the root of a linear equation.

use rand::Rng;

use crate::error::{Error, Result};
use crate::params::{GasConfig, InitialRegimes, VelocityState};

use super::{build_path, sample_direction, PathEventKind, Trajectory};

/// One event of a gas run.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum EventKind {
    /// Direction switch of one underlying path.
    Switch { particle: usize },
    /// Boundary reflection of one underlying path.
    Reflect { particle: usize, at_upper: bool },
    /// Crossing of two underlying paths; the labelled gas particles at the
    /// touching adjacent ranks collide. Ranks are 1-based: `(k - 1, k)`.
    Crossing {
        pair: (usize, usize),
        ranks: (usize, usize),
    },
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GasEvent {
    pub time: f64,
    pub kind: EventKind,
}

/// Full record of one gas replica.
#[derive(Debug, Clone, PartialEq)]
pub struct GasResult {
    /// Switches, reflections, and crossings in nondecreasing time order.
    pub events: Vec<GasEvent>,
    /// Free-path time per rank (1-based rank k at index k-1): the first
    /// instant ranks (k-1, k) touch, censored at the horizon. By convention
    /// the first rank's entry is the full horizon. Empty for n = 1.
    pub free_path_times: Vec<f64>,
    /// Censoring flags parallel to `free_path_times`.
    pub free_path_censored: Vec<bool>,
    /// Crossing counts per unordered path pair, lexicographic `(i, j)`,
    /// `i < j`; index via [`pair_index`].
    pub pair_crossing_counts: Vec<u64>,
    /// Underlying independent paths, when requested.
    pub trajectories: Option<Vec<Trajectory>>,
    n: usize,
}

/// Index of the unordered pair `(i, j)`, `i < j`, in lexicographic order.
pub fn pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl GasResult {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Crossings of paths `i` and `j` (either order).
    pub fn pair_count(&self, i: usize, j: usize) -> u64 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.pair_crossing_counts[pair_index(a, b, self.n)]
    }

    /// Total number of crossings, i.e. of labelled hard collisions.
    pub fn total_crossings(&self) -> u64 {
        self.pair_crossing_counts.iter().sum()
    }

    /// Labelled gas positions at `t`: the sorted independent-path values.
    /// Only available when paths were kept.
    pub fn labelled_positions(&self, t: f64) -> Option<Vec<f64>> {
        let trajs = self.trajectories.as_ref()?;
        let mut xs: Vec<f64> = trajs.iter().map(|tr| tr.position_at(t)).collect();
        xs.sort_by(|a, b| a.total_cmp(b));
        Some(xs)
    }
}

/// Runs one gas replica to `horizon`.
pub fn simulate_gas<R: Rng + ?Sized>(
    config: &GasConfig,
    horizon: f64,
    rng: &mut R,
    keep_paths: bool,
) -> Result<GasResult> {
    if !horizon.is_finite() || horizon <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "horizon must be positive and finite, got {horizon}"
        )));
    }
    let n = config.n();
    let params = config.params();
    let regimes: Vec<VelocityState> = match config.initial_regimes() {
        InitialRegimes::Fixed(r) => r.clone(),
        InitialRegimes::Equiprobable => (0..n).map(|_| sample_direction(rng)).collect(),
    };
    // Draw all paths in particle order; a single replica is sequential by
    // contract, so the stream consumption order is fixed.
    let mut trajectories = Vec::with_capacity(n);
    let mut path_events: Vec<(f64, usize, PathEventKind)> = Vec::new();
    for (i, (&y0, &xi0)) in config.positions().iter().zip(&regimes).enumerate() {
        let (traj, events) = build_path(y0, xi0, params, config.boundary(), horizon, rng);
        for (t, kind) in events {
            path_events.push((t, i, kind));
        }
        trajectories.push(traj);
    }
    // Global event order: time, then particle index (the tie rule).
    path_events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut events: Vec<GasEvent> = Vec::with_capacity(path_events.len());
    let mut free_path_times = vec![horizon; if n >= 2 { n } else { 0 }];
    let mut free_path_censored = vec![true; if n >= 2 { n } else { 0 }];
    if n >= 2 {
        // First rank's free path is the horizon by convention, not censoring.
        free_path_censored[0] = false;
    }
    let mut pair_counts = vec![0u64; n * (n - 1) / 2];
    // Last definite sign of x_i - x_j per pair; initial positions are
    // strictly increasing, so every pair starts negative (i below j).
    let mut pair_sign: Vec<f64> = (0..n * (n - 1) / 2).map(|_| -1.0).collect();

    // Sweep the intervals between consecutive global events; every path is
    // linear inside each interval.
    let mut interval_start = 0.0_f64;
    let mut ev_idx = 0usize;
    while interval_start < horizon {
        let interval_end = if ev_idx < path_events.len() {
            path_events[ev_idx].0.min(horizon)
        } else {
            horizon
        };
        if interval_end > interval_start {
            sweep_interval(
                &trajectories,
                interval_start,
                interval_end,
                &mut pair_sign,
                &mut pair_counts,
                &mut free_path_times,
                &mut free_path_censored,
                &mut events,
                horizon,
            );
        }
        // Emit the path events at this instant.
        while ev_idx < path_events.len() && path_events[ev_idx].0 <= interval_end {
            let (t, particle, kind) = path_events[ev_idx];
            if t <= horizon {
                events.push(GasEvent {
                    time: t,
                    kind: match kind {
                        PathEventKind::Switch => EventKind::Switch { particle },
                        PathEventKind::Reflect { at_upper } => EventKind::Reflect {
                            particle,
                            at_upper,
                        },
                    },
                });
            }
            ev_idx += 1;
        }
        if interval_end >= horizon {
            break;
        }
        interval_start = interval_end;
    }
    events.sort_by(|a, b| a.time.total_cmp(&b.time));

    Ok(GasResult {
        events,
        free_path_times,
        free_path_censored,
        pair_crossing_counts: pair_counts,
        trajectories: keep_paths.then_some(trajectories),
        n,
    })
}

#[allow(clippy::too_many_arguments)]
fn sweep_interval(
    trajectories: &[Trajectory],
    t0: f64,
    t1: f64,
    pair_sign: &mut [f64],
    pair_counts: &mut [u64],
    free_path_times: &mut [f64],
    free_path_censored: &mut [bool],
    events: &mut Vec<GasEvent>,
    horizon: f64,
) {
    let n = trajectories.len();
    let start: Vec<(f64, f64)> = trajectories
        .iter()
        .map(|tr| {
            let seg = tr.position_at(t0);
            (seg, tr.slope_at(t0))
        })
        .collect();
    let dt = t1 - t0;
    for i in 0..n {
        for j in (i + 1)..n {
            let idx = pair_index(i, j, n);
            let d0 = start[i].0 - start[j].0;
            let d1 = d0 + (start[i].1 - start[j].1) * dt;
            if d1 == 0.0 {
                // Tangential landing: defer; the sign memory decides later.
                continue;
            }
            let new_sign = d1.signum();
            if new_sign == pair_sign[idx] {
                continue;
            }
            // Sign flipped somewhere in (t0, t1]: exact linear root. If the
            // flip straddles a tangential landing from an earlier interval,
            // d0 may already be zero; the crossing time is then t0.
            let t_cross = if d0 == 0.0 || start[i].1 == start[j].1 {
                t0
            } else {
                t0 + dt * d0 / (d0 - d1)
            };
            pair_sign[idx] = new_sign;
            pair_counts[idx] += 1;
            // Ranks: particles strictly below the crossing point.
            let x_cross = start[i].0 + start[i].1 * (t_cross - t0);
            let mut below = 0usize;
            for (m, traj) in trajectories.iter().enumerate() {
                if m != i && m != j && traj.position_at(t_cross) < x_cross {
                    below += 1;
                }
            }
            let ranks = (below + 1, below + 2);
            events.push(GasEvent {
                time: t_cross,
                kind: EventKind::Crossing { pair: (i, j), ranks },
            });
            let k = ranks.1;
            if free_path_censored[k - 1] && t_cross < free_path_times[k - 1] {
                free_path_times[k - 1] = t_cross.min(horizon);
                free_path_censored[k - 1] = false;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{GasConfig, InitialRegimes, Params, PatternPair};
    use crate::sim::{simulate_first_meeting, RngStream};

    fn p11() -> Params {
        Params::new(1.0, 1.0).unwrap()
    }

    fn config(positions: Vec<f64>, boundary: Option<f64>, regimes: InitialRegimes) -> GasConfig {
        GasConfig::new(positions, boundary, p11(), regimes).unwrap()
    }

    #[test]
    fn single_particle_has_no_pairs() {
        let cfg = config(vec![0.5], Some(1.0), InitialRegimes::Equiprobable);
        let mut rng = RngStream::new(1, 0).rng();
        let res = simulate_gas(&cfg, 5.0, &mut rng, false).unwrap();
        assert!(res.free_path_times.is_empty());
        assert!(res.pair_crossing_counts.is_empty());
        assert_eq!(res.total_crossings(), 0);
        assert!(res
            .events
            .iter()
            .all(|e| !matches!(e.kind, EventKind::Crossing { .. })));
    }

    #[test]
    fn deterministic_reflections_for_switchless_particle() {
        let cfg = GasConfig::new(
            vec![0.5],
            Some(1.0),
            Params::new(1.0, 1e-12).unwrap(),
            InitialRegimes::Fixed(vec![VelocityState::Plus]),
        )
        .unwrap();
        let mut rng = RngStream::new(2, 0).rng();
        let res = simulate_gas(&cfg, 3.2, &mut rng, false).unwrap();
        let reflects: Vec<f64> = res
            .events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::Reflect { .. }))
            .map(|e| e.time)
            .collect();
        assert_eq!(reflects.len(), 3);
        assert!((reflects[0] - 0.5).abs() < 1e-12);
        assert!((reflects[1] - 1.5).abs() < 1e-12);
        assert!((reflects[2] - 2.5).abs() < 1e-12);
    }

    #[test]
    fn byte_identical_reruns() {
        let cfg = config(
            vec![0.1, 0.35, 0.6, 0.8],
            Some(1.0),
            InitialRegimes::Equiprobable,
        );
        let run = |stream: RngStream| {
            let mut rng = stream.rng();
            simulate_gas(&cfg, 10.0, &mut rng, true).unwrap()
        };
        let a = run(RngStream::new(9, 4));
        let b = run(RngStream::new(9, 4));
        assert_eq!(a, b);
        let c = run(RngStream::new(9, 5));
        assert_ne!(a, c);
    }

    #[test]
    fn events_are_time_ordered_and_counts_consistent() {
        let cfg = config(
            vec![0.1, 0.3, 0.5, 0.7, 0.9],
            Some(1.0),
            InitialRegimes::Equiprobable,
        );
        let mut rng = RngStream::new(10, 0).rng();
        let res = simulate_gas(&cfg, 20.0, &mut rng, false).unwrap();
        assert!(res.events.windows(2).all(|w| w[0].time <= w[1].time));
        let crossing_events = res
            .events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::Crossing { .. }))
            .count() as u64;
        assert_eq!(crossing_events, res.total_crossings());
        assert!(res.total_crossings() > 0);
    }

    #[test]
    fn crossing_signs_alternate_per_pair() {
        let cfg = config(vec![0.2, 0.4, 0.6], Some(1.0), InitialRegimes::Equiprobable);
        for s in 0..20 {
            let mut rng = RngStream::new(11, s).rng();
            let res = simulate_gas(&cfg, 15.0, &mut rng, true).unwrap();
            let trajs = res.trajectories.as_ref().unwrap();
            for i in 0..3 {
                for j in (i + 1)..3 {
                    let crossings: Vec<f64> = res
                        .events
                        .iter()
                        .filter_map(|e| match e.kind {
                            EventKind::Crossing { pair, .. } if pair == (i, j) => Some(e.time),
                            _ => None,
                        })
                        .collect();
                    // Between consecutive crossings the sign of S_i - S_j
                    // must alternate; probe midway between events.
                    let mut checkpoints = vec![0.0];
                    checkpoints.extend(&crossings);
                    checkpoints.push(15.0);
                    let mut last_sign = -1.0; // i starts below j
                    for w in checkpoints.windows(2) {
                        let mid = 0.5 * (w[0] + w[1]);
                        let d = trajs[i].position_at(mid) - trajs[j].position_at(mid);
                        if d != 0.0 {
                            assert_eq!(
                                d.signum(),
                                last_sign,
                                "pair ({i},{j}) seed {s} mid {mid}"
                            );
                        }
                        last_sign = -last_sign;
                    }
                }
            }
        }
    }

    #[test]
    fn sorted_positions_are_the_labelled_gas() {
        let cfg = config(
            vec![0.15, 0.4, 0.55, 0.7, 0.95],
            Some(1.0),
            InitialRegimes::Equiprobable,
        );
        let mut rng = RngStream::new(12, 0).rng();
        let res = simulate_gas(&cfg, 10.0, &mut rng, true).unwrap();
        for k in 0..=100 {
            let t = 10.0 * k as f64 / 100.0;
            let xs = res.labelled_positions(t).unwrap();
            assert!(xs.windows(2).all(|w| w[0] <= w[1]), "t = {t}");
            assert!(xs.iter().all(|x| (-1e-12..=1.0 + 1e-12).contains(x)));
        }
    }

    #[test]
    fn two_particle_first_crossing_matches_pair_kernel() {
        // The gas crossing machinery and the dedicated pair kernel sample
        // the same law; compare mean first-crossing times.
        let z = 0.5;
        let n = 4000u64;
        let horizon = 30.0;
        let mut gas_sum = 0.0;
        let mut pair_sum = 0.0;
        let mut gas_seen = 0u64;
        let mut pair_seen = 0u64;
        for i in 0..n {
            let cfg = GasConfig::new(
                vec![0.0, z],
                None,
                p11(),
                InitialRegimes::Fixed(vec![VelocityState::Plus, VelocityState::Minus]),
            )
            .unwrap();
            let mut rng = RngStream::new(13, i).rng();
            let res = simulate_gas(&cfg, horizon, &mut rng, false).unwrap();
            if !res.free_path_censored[1] {
                gas_sum += res.free_path_times[1];
                gas_seen += 1;
            }
            let mut rng = RngStream::new(14, i).rng();
            let out =
                simulate_first_meeting(PatternPair::APPROACH, z, p11(), horizon, &mut rng)
                    .unwrap();
            if !out.censored {
                pair_sum += out.time;
                pair_seen += 1;
            }
        }
        let gas_mean = gas_sum / gas_seen as f64;
        let pair_mean = pair_sum / pair_seen as f64;
        // Heavy-ish tails capped at the horizon; 5 percent agreement is
        // ample for equality of laws at this sample size.
        assert!(
            (gas_mean - pair_mean).abs() / pair_mean < 0.05,
            "gas {gas_mean} pair {pair_mean}"
        );
    }

    #[test]
    fn free_path_convention_and_censoring() {
        let cfg = config(vec![0.3, 0.6], Some(1.0), InitialRegimes::Equiprobable);
        let mut rng = RngStream::new(15, 0).rng();
        let res = simulate_gas(&cfg, 0.001, &mut rng, false).unwrap();
        assert_eq!(res.free_path_times[0], 0.001);
        assert!(!res.free_path_censored[0]);
        // With such a short horizon the second rank almost surely never
        // touches: censored at the horizon.
        assert_eq!(res.free_path_times[1], 0.001);
        assert!(res.free_path_censored[1]);
    }

    #[test]
    fn pair_index_is_lexicographic() {
        let n = 5;
        let mut expect = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                assert_eq!(pair_index(i, j, n), expect);
                expect += 1;
            }
        }
    }
}
