//! Truncated series summation with an envelope-based stopping rule.

use crate::error::{Error, Result};

/// A converged partial sum and the number of terms it used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub terms_used: usize,
}

/// Sums `term(n)` for `n = first_index, first_index+1, ...`, stopping once
/// `|envelope(n)| < tol` for three consecutive `n`. The envelope is a
/// caller-supplied bound on the term magnitude; pass `|term|` itself when
/// the terms are their own best bound.
///
/// Returns a budget error carrying the partial sum if `n_max` terms do not
/// satisfy the stopping rule.
pub fn sum_series<T, E>(
    term: T,
    envelope: E,
    first_index: usize,
    tol: f64,
    n_max: usize,
) -> Result<SeriesSum>
where
    T: Fn(usize) -> f64,
    E: Fn(usize) -> f64,
{
    let mut sum = 0.0;
    let mut streak = 0usize;
    for (used, n) in (first_index..first_index + n_max).enumerate() {
        sum += term(n);
        if envelope(n).abs() < tol {
            streak += 1;
            if streak == 3 {
                return Ok(SeriesSum {
                    value: sum,
                    terms_used: used + 1,
                });
            }
        } else {
            streak = 0;
        }
    }
    Err(Error::BudgetExceeded {
        context: format!("series did not settle below {tol} within {n_max} terms"),
        partial: sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric() {
        let r = sum_series(
            |n| 0.5f64.powi(n as i32),
            |n| 0.5f64.powi(n as i32),
            1,
            1e-12,
            1000,
        )
        .unwrap();
        assert!((r.value - 1.0).abs() <= 1e-10);
        assert!(r.terms_used >= 40);
    }

    #[test]
    fn zero_series() {
        let r = sum_series(|_| 0.0, |_| 0.0, 0, 1e-12, 100).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.terms_used, 3);
    }

    #[test]
    fn expected_segment_passages() {
        // sum over n >= 1 of n (e^(-2 n a) - e^(-2 (n+1) a)) = e^(-2a)/(1 - e^(-2a))
        // with a = lambda b / v; here a = 1.
        let term = |n: usize| {
            let nf = n as f64;
            nf * ((-2.0 * nf).exp() - (-2.0 * (nf + 1.0)).exp())
        };
        let r = sum_series(term, term, 1, 1e-14, 10_000).unwrap();
        let want = (-2.0f64).exp() / (1.0 - (-2.0f64).exp());
        assert!((r.value - want).abs() <= 1e-12);
        assert!((want - 0.1565).abs() < 1e-4);
    }

    #[test]
    fn budget_error_keeps_partial() {
        let err = sum_series(|_| 1.0, |_| 1.0, 0, 1e-3, 50).unwrap_err();
        match err {
            Error::BudgetExceeded { partial, .. } => assert_eq!(partial, 50.0),
            other => panic!("unexpected {other:?}"),
        }
    }
}
