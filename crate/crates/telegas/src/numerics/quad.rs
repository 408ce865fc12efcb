//! Adaptive quadrature on an open (endpoint-avoiding) Gauss-Legendre rule.
//!
//! Panels are refined globally worst-first until the summed error estimate
//! drops below the tolerance. Nodes are strictly interior, so integrands
//! with removable endpoint singularities are never evaluated at the
//! endpoints; callers supply analytic limits where they need them.
//!
//! Infinite upper limits are mapped by `t = a + u/(1-u)` on `u in (0, 1)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton
/// iteration on the Legendre recurrence (machine precision for small n).
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for k in 1..=n {
        let mut x = (std::f64::consts::PI * (k as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // p2 = P_n(x), dp = P_n'(x) by the three-term recurrence.
            let (mut p0, mut p1) = (1.0_f64, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0_f64, x);
        for j in 2..=n {
            let jf = j as f64;
            let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((-x, w)); // negate so nodes come out ascending
    }
    rule
}

/// The 15-point rule on [-1, 1], shared with fixed-rule segment integrals.
pub(crate) fn rule15() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(15))
}

fn rule7() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(7))
}

fn apply_rule<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rule: &[(f64, f64)]) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for &(x, w) in rule {
        acc += w * f(mid + half * x);
    }
    acc * half
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // worst error first; ties broken by left endpoint for determinism
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn make_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let v15 = apply_rule(f, a, b, rule15());
    let v7 = apply_rule(f, a, b, rule7());
    Panel {
        a,
        b,
        value: v15,
        err: (v15 - v7).abs(),
    }
}

const EVALS_PER_PANEL: usize = 22;
const DEFAULT_BUDGET: usize = 2_000_000;

/// Integrates `f` over the finite interval `(a, b)` to absolute tolerance
/// `tol`. Endpoints are never evaluated.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    integrate_with_budget(f, a, b, tol, DEFAULT_BUDGET)
}

/// [`integrate`] with an explicit evaluation budget.
pub fn integrate_with_budget<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    budget: usize,
) -> Result<QuadratureResult> {
    if a.is_nan() || b.is_nan() || a >= b {
        return Err(Error::Domain(format!(
            "integration interval requires a < b, got [{a}, {b}]"
        )));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(
            "integrate expects finite limits; map infinite tails first".into(),
        ));
    }
    let mut heap = BinaryHeap::new();
    let mut evals = EVALS_PER_PANEL;
    heap.push(make_panel(&f, a, b));
    loop {
        let total_err: f64 = heap.iter().map(|p| p.err).sum();
        if total_err <= tol {
            let value = sum_ordered(&heap);
            return Ok(QuadratureResult {
                value,
                abs_error_estimate: total_err,
                evaluations: evals,
            });
        }
        if evals + 2 * EVALS_PER_PANEL > budget {
            let value = sum_ordered(&heap);
            return Err(Error::BudgetExceeded {
                context: format!(
                    "integrate on [{a}, {b}]: error estimate {total_err:.3e} > tol {tol:.3e} \
                     after {evals} evaluations"
                ),
                partial: value,
            });
        }
        let worst = heap.pop().expect("heap non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval no longer splittable in f64; keep its estimate.
            let mut kept = worst;
            kept.err = 0.0;
            heap.push(kept);
            continue;
        }
        heap.push(make_panel(&f, worst.a, mid));
        heap.push(make_panel(&f, mid, worst.b));
        evals += 2 * EVALS_PER_PANEL;
    }
}

/// Sums panel values smallest-interval-first for reproducible rounding.
fn sum_ordered(heap: &BinaryHeap<Panel>) -> f64 {
    let mut parts: Vec<(f64, f64)> = heap.iter().map(|p| (p.a, p.value)).collect();
    parts.sort_by(|x, y| x.0.total_cmp(&y.0));
    parts.iter().map(|p| p.1).sum()
}

/// Integrates `f` over consecutive segments `[pts[0], pts[1]], ...` and sums
/// the pieces. Used when the integrand has well-separated features that a
/// single initial panel would miss entirely (the error estimator cannot see
/// structure narrower than the starting panel).
pub fn integrate_segmented<F: Fn(f64) -> f64>(
    f: F,
    pts: &[f64],
    tol: f64,
) -> Result<QuadratureResult> {
    if pts.len() < 2 {
        return Err(Error::Domain("need at least one segment".into()));
    }
    let seg_tol = tol / (pts.len() - 1) as f64;
    let mut value = 0.0;
    let mut err = 0.0;
    let mut evals = 0;
    for w in pts.windows(2) {
        let r = integrate(&f, w[0], w[1], seg_tol)?;
        value += r.value;
        err += r.abs_error_estimate;
        evals += r.evaluations;
    }
    Ok(QuadratureResult {
        value,
        abs_error_estimate: err,
        evaluations: evals,
    })
}

/// Integrates `f` over `(a, +inf)` to absolute tolerance `tol` via the
/// substitution `t = a + u/(1-u)`.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> Result<QuadratureResult> {
    integrate(
        move |u: f64| {
            let s = 1.0 - u;
            f(a + u / s) / (s * s)
        },
        0.0,
        1.0,
        tol,
    )
}
