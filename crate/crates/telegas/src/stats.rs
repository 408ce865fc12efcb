//! Estimation and goodness-of-fit: empirical CDFs, atom-aware
//! Kolmogorov-Smirnov tests, Monte Carlo confidence intervals, and
//! log-log tail-exponent estimation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted sample with censoring flags. Censored entries record the censor
/// horizon instead of an observed value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSample {
    values: Vec<f64>,
    censored: Vec<bool>,
}

impl EmpiricalSample {
    /// Fully observed sample.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let censored = vec![false; values.len()];
        Self::with_censoring(values, censored)
    }

    /// Sample with per-value censoring flags; sorts by value.
    pub fn with_censoring(values: Vec<f64>, censored: Vec<bool>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientSample("sample must be non-empty".into()));
        }
        if values.len() != censored.len() {
            return Err(Error::InvalidParam(
                "values and censoring flags must have equal length".into(),
            ));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidParam("sample contains NaN".into()));
        }
        let mut pairs: Vec<(f64, bool)> = values.into_iter().zip(censored).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (values, censored) = pairs.into_iter().unzip();
        Ok(EmpiricalSample { values, censored })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn n_uncensored(&self) -> usize {
        self.censored.iter().filter(|&&c| !c).count()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn censored(&self) -> &[bool] {
        &self.censored
    }

    fn uncensored_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values
            .iter()
            .zip(&self.censored)
            .filter(|(_, &c)| !c)
            .map(|(&v, _)| v)
    }
}

/// Empirical CDF at `x`: the fraction of uncensored values `<= x`. Callers
/// must ensure the censoring fraction is negligible for this to estimate
/// the true CDF.
pub fn ecdf(sample: &EmpiricalSample, x: f64) -> Result<f64> {
    let n = sample.n_uncensored();
    if n == 0 {
        return Err(Error::InsufficientSample(
            "all values are censored".into(),
        ));
    }
    let count = sample.uncensored_values().filter(|&v| v <= x).count();
    Ok(count as f64 / n as f64)
}

/// Significance level of a Kolmogorov-Smirnov test; only the asymptotic
/// thresholds at these two levels are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KsLevel {
    P05,
    P01,
}

impl KsLevel {
    /// Asymptotic critical coefficient `c` in `D_crit = c / sqrt(n)`.
    pub fn coefficient(&self) -> f64 {
        match self {
            KsLevel::P05 => 1.358,
            KsLevel::P01 => 1.628,
        }
    }
}

/// Result of a Kolmogorov-Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub statistic: f64,
    pub n_effective: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Reference distribution for the one-sample test. `cdf_left` is the left
/// limit `P(X < x)`; it differs from `cdf` exactly at atoms, and the
/// default implementation is correct for continuous references.
pub trait ReferenceCdf {
    fn cdf(&self, x: f64) -> f64;
    fn cdf_left(&self, x: f64) -> f64 {
        self.cdf(x)
    }
}

impl<F: Fn(f64) -> f64> ReferenceCdf for F {
    fn cdf(&self, x: f64) -> f64 {
        self(x)
    }
}

const KS_MIN_N: usize = 50;

/// One-sample Kolmogorov-Smirnov test against a reference CDF that may
/// carry atoms. The statistic is the sup over sample points of
/// `max(|Fhat(x) - F(x)|, |Fhat(x-) - F(x-)|)`, which handles point masses
/// correctly. Censored values are excluded; the caller is responsible for
/// keeping the censored fraction negligible.
pub fn ks_one_sample<C: ReferenceCdf + ?Sized>(
    sample: &EmpiricalSample,
    reference: &C,
    level: KsLevel,
) -> Result<KsReport> {
    let values: Vec<f64> = sample.uncensored_values().collect();
    let n = values.len();
    if n < KS_MIN_N {
        return Err(Error::InsufficientSample(format!(
            "asymptotic threshold requires n >= {KS_MIN_N}, got {n}"
        )));
    }
    let nf = n as f64;
    let mut d = 0.0_f64;
    let mut i = 0usize;
    while i < n {
        let x = values[i];
        // Multiplicity of x: empirical CDF jumps by the full tied mass.
        let mut j = i;
        while j < n && values[j] == x {
            j += 1;
        }
        let fhat_right = j as f64 / nf;
        let fhat_left = i as f64 / nf;
        let f_right = reference.cdf(x);
        let f_left = reference.cdf_left(x);
        d = d
            .max((fhat_right - f_right).abs())
            .max((fhat_left - f_left).abs());
        i = j;
    }
    let threshold = level.coefficient() / nf.sqrt();
    Ok(KsReport {
        statistic: d,
        n_effective: nf,
        threshold,
        pass: d <= threshold,
    })
}

/// [`ks_one_sample`] against a pre-tabulated reference: `refs[i]` holds the
/// reference CDF `(right, left)` limits at the i-th sorted uncensored
/// sample value. Useful when each reference evaluation is an expensive
/// quadrature that is cheaper to run incrementally over the whole sample.
pub fn ks_one_sample_tabulated(
    sample: &EmpiricalSample,
    refs: &[(f64, f64)],
    level: KsLevel,
) -> Result<KsReport> {
    let values: Vec<f64> = sample.uncensored_values().collect();
    let n = values.len();
    if n < KS_MIN_N {
        return Err(Error::InsufficientSample(format!(
            "asymptotic threshold requires n >= {KS_MIN_N}, got {n}"
        )));
    }
    if refs.len() != n {
        return Err(Error::InvalidParam(format!(
            "reference table has {} entries for {n} uncensored values",
            refs.len()
        )));
    }
    let nf = n as f64;
    let mut d = 0.0_f64;
    let mut i = 0usize;
    while i < n {
        let x = values[i];
        let mut j = i;
        while j < n && values[j] == x {
            j += 1;
        }
        let fhat_right = j as f64 / nf;
        let fhat_left = i as f64 / nf;
        let (f_right, f_left) = refs[i];
        d = d
            .max((fhat_right - f_right).abs())
            .max((fhat_left - f_left).abs());
        i = j;
    }
    let threshold = level.coefficient() / nf.sqrt();
    Ok(KsReport {
        statistic: d,
        n_effective: nf,
        threshold,
        pass: d <= threshold,
    })
}

/// Two-sample Kolmogorov-Smirnov test with effective size `nm/(n + m)`.
pub fn ks_two_sample(
    a: &EmpiricalSample,
    b: &EmpiricalSample,
    level: KsLevel,
) -> Result<KsReport> {
    let xs: Vec<f64> = a.uncensored_values().collect();
    let ys: Vec<f64> = b.uncensored_values().collect();
    if xs.len() < KS_MIN_N || ys.len() < KS_MIN_N {
        return Err(Error::InsufficientSample(format!(
            "both samples need n >= {KS_MIN_N}, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    // Sweep the merged order statistics.
    let mut d = 0.0_f64;
    let (mut i, mut j) = (0usize, 0usize);
    while i < xs.len() || j < ys.len() {
        let x = match (xs.get(i), ys.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => break,
        };
        while i < xs.len() && xs[i] <= x {
            i += 1;
        }
        while j < ys.len() && ys[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let n_effective = n * m / (n + m);
    let threshold = level.coefficient() / n_effective.sqrt();
    Ok(KsReport {
        statistic: d,
        n_effective,
        threshold,
        pass: d <= threshold,
    })
}

/// Mean with a symmetric confidence half-width `z * sd / sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanCi {
    pub mean: f64,
    pub half_width: f64,
    pub n: usize,
    /// Set when the sample had zero variance.
    pub degenerate: bool,
}

/// Sample mean and normal-approximation confidence interval with the given
/// z-multiplier (e.g. 3.0 for a three-standard-error band). Censored values
/// are included as-is: for horizon-censored observations this estimates the
/// mean of the censored variable `min(X, T)`.
pub fn mean_ci(sample: &EmpiricalSample, z: f64) -> Result<MeanCi> {
    let n = sample.n();
    if n < 30 {
        return Err(Error::InsufficientSample(format!(
            "normal-approximation interval requires n >= 30, got {n}"
        )));
    }
    let nf = n as f64;
    let mean = sample.values.iter().sum::<f64>() / nf;
    let var = sample
        .values
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / (nf - 1.0);
    let degenerate = var == 0.0;
    Ok(MeanCi {
        mean,
        half_width: z * (var / nf).sqrt(),
        n,
        degenerate,
    })
}

/// Least-squares slope of `log(empirical survival)` against `log t` over
/// uncensored values above `t_min`. Censored values still count as
/// exceedances when estimating the survival at each point, so a horizon cap
/// does not bias the estimate below the horizon. For a survival
/// `S(t) ~ t^(-beta)` the estimate converges to `-beta`.
pub fn tail_slope(sample: &EmpiricalSample, t_min: f64) -> Result<f64> {
    let n_total = sample.n() as f64;
    let mut points = Vec::new();
    for (idx, (&v, &c)) in sample.values.iter().zip(&sample.censored).enumerate() {
        if c || v <= t_min || v <= 0.0 {
            continue;
        }
        // Survival just above v: strictly-greater count over the full
        // sample (censored entries beyond v included).
        let greater = n_total - (idx + 1) as f64;
        if greater < 1.0 {
            continue; // log(0)
        }
        points.push((v.ln(), (greater / n_total).ln()));
    }
    if points.len() < 100 {
        return Err(Error::InsufficientSample(format!(
            "tail regression needs at least 100 uncensored values above {t_min}, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientSample(
            "tail regression abscissae are degenerate".into(),
        ));
    }
    Ok(sxy / sxx)
}
