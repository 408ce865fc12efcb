//! Position laws of the labelled gas particles via the order-statistics
//! coupling: the r-th particle sits below `x` exactly when at least `r` of
//! the independent paths do.

use crate::error::{Error, Result};
use crate::numerics::reg_inc_beta;

/// CDF of the r-th labelled particle position given the per-path CDF values
/// `P(S_i < x)` at the query point: the probability that at least `r` of
/// the `n` independent values fall below `x`.
///
/// Computed by dynamic programming over the distribution of the below-count
/// (no subset enumeration). With all inputs equal to `p` this reduces to
/// `I_p(r, n - r + 1)`.
pub fn order_statistic_cdf(rank: usize, per_particle_cdf: &[f64]) -> Result<f64> {
    let n = per_particle_cdf.len();
    if n == 0 {
        return Err(Error::InvalidParam("need at least one particle".into()));
    }
    if rank < 1 || rank > n {
        return Err(Error::InvalidParam(format!(
            "rank must be in 1..={n}, got {rank}"
        )));
    }
    if per_particle_cdf
        .iter()
        .any(|p| !(0.0..=1.0).contains(p) || p.is_nan())
    {
        return Err(Error::Domain("cdf values must lie in [0, 1]".into()));
    }
    // counts[k] = P(exactly k of the processed values are below x)
    let mut counts = vec![0.0_f64; n + 1];
    counts[0] = 1.0;
    for (i, &p) in per_particle_cdf.iter().enumerate() {
        for k in (0..=i + 1).rev() {
            let from_below = if k > 0 { counts[k - 1] * p } else { 0.0 };
            counts[k] = counts[k] * (1.0 - p) + from_below;
        }
    }
    Ok(counts[rank..].iter().sum::<f64>().clamp(0.0, 1.0))
}

/// CDF of the k-th labelled particle of a stationary gas on `[0, b]`: the
/// k-th order statistic of n independent uniforms, `I_(x/b)(k, n - k + 1)`.
pub fn uniform_order_statistic_cdf(k: usize, n: usize, x: f64, b: f64) -> Result<f64> {
    if n == 0 || k < 1 || k > n {
        return Err(Error::InvalidParam(format!(
            "rank must be in 1..={n}, got {k}"
        )));
    }
    if !b.is_finite() || b <= 0.0 {
        return Err(Error::InvalidParam(format!("b must be > 0, got {b}")));
    }
    let p = (x / b).clamp(0.0, 1.0);
    reg_inc_beta(p, k as f64, (n - k + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Brute-force oracle over all 2^n outcomes.
    fn brute_force(rank: usize, ps: &[f64]) -> f64 {
        let n = ps.len();
        let mut total = 0.0;
        for mask in 0..(1u32 << n) {
            let mut prob = 1.0;
            let mut below = 0;
            for (i, &p) in ps.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    prob *= p;
                    below += 1;
                } else {
                    prob *= 1.0 - p;
                }
            }
            if below >= rank {
                total += prob;
            }
        }
        total
    }

    #[test]
    fn extreme_ranks_closed_forms() {
        let ps = [0.2, 0.5, 0.9];
        // rank n: product of all.
        let want: f64 = ps.iter().product();
        assert!((order_statistic_cdf(3, &ps).unwrap() - want).abs() < 1e-15);
        // rank 1: 1 - product of complements.
        let want = 1.0 - ps.iter().map(|p| 1.0 - p).product::<f64>();
        assert!((order_statistic_cdf(1, &ps).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn brute_force_heterogeneous() {
        let ps = [0.2, 0.5, 0.9];
        for rank in 1..=3 {
            let got = order_statistic_cdf(rank, &ps).unwrap();
            let want = brute_force(rank, &ps);
            assert!((got - want).abs() <= 1e-12, "rank {rank}");
        }
        let ps = [0.13, 0.42, 0.55, 0.71, 0.99, 0.03];
        for rank in 1..=6 {
            let got = order_statistic_cdf(rank, &ps).unwrap();
            let want = brute_force(rank, &ps);
            assert!((got - want).abs() <= 1e-12, "rank {rank}");
        }
    }

    #[test]
    fn equal_inputs_match_beta_form() {
        for n in 1..=9usize {
            for rank in 1..=n {
                for &p in &[0.1, 0.37, 0.5, 0.88] {
                    let ps = vec![p; n];
                    let a = order_statistic_cdf(rank, &ps).unwrap();
                    let b = reg_inc_beta(p, rank as f64, (n - rank + 1) as f64).unwrap();
                    assert!((a - b).abs() <= 1e-12, "n={n} rank={rank} p={p}");
                }
            }
        }
    }

    #[test]
    fn uniform_closed_forms() {
        let (n, b) = (4usize, 2.0);
        for k in 0..=10 {
            let x = 0.2 * k as f64;
            let p = (x / b).clamp(0.0, 1.0);
            // top rank: p^n; bottom rank: 1 - (1-p)^n
            let top = uniform_order_statistic_cdf(n, n, x, b).unwrap();
            assert!((top - p.powi(n as i32)).abs() < 1e-10);
            let bottom = uniform_order_statistic_cdf(1, n, x, b).unwrap();
            assert!((bottom - (1.0 - (1.0 - p).powi(n as i32))).abs() < 1e-10);
        }
        // x = b: full mass for every rank.
        for k in 1..=n {
            assert_eq!(uniform_order_statistic_cdf(k, n, b, b).unwrap(), 1.0);
        }
    }

    #[test]
    fn validation() {
        assert!(order_statistic_cdf(0, &[0.5]).is_err());
        assert!(order_statistic_cdf(2, &[0.5]).is_err());
        assert!(order_statistic_cdf(1, &[1.5]).is_err());
        assert!(order_statistic_cdf(1, &[]).is_err());
        assert!(uniform_order_statistic_cdf(0, 3, 0.5, 1.0).is_err());
        assert!(uniform_order_statistic_cdf(4, 3, 0.5, 1.0).is_err());
        assert!(uniform_order_statistic_cdf(1, 3, 0.5, 0.0).is_err());
    }
}
