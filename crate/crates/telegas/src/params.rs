//! Shared domain types: motion parameters, regime labels, gas configurations,
//! the diffusive scaling, and closed-form rate/bound constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics;

/// Motion parameters of a telegraph particle: absolute speed `v` and
/// direction-switching intensity `lambda`. Both strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    v: f64,
    lambda: f64,
}

impl Params {
    /// Validates and constructs the parameter pair.
    pub fn new(v: f64, lambda: f64) -> Result<Self> {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidParam(format!("v must be > 0, got {v}")));
        }
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "lambda must be > 0, got {lambda}"
            )));
        }
        Ok(Params { v, lambda })
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Diffusive (Kac) scaling: `lambda = eps^-2`, `v = c / eps`, so that
/// `v^2 / lambda = c^2` exactly. As `eps -> 0` the telegraph particle
/// converges to a Brownian motion with diffusion coefficient `c^2`.
pub fn kac_params(eps: f64, c: f64) -> Result<Params> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidParam(format!("eps must be > 0, got {eps}")));
    }
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::InvalidParam(format!("c must be > 0, got {c}")));
    }
    Params::new(c / eps, eps.powi(-2))
}

/// Direction regime of a telegraph particle: the signed velocity is
/// `v * (-1)^xi`, so `xi = 0` moves right and `xi = 1` moves left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VelocityState {
    /// `xi = 0`: velocity `+v`.
    Plus,
    /// `xi = 1`: velocity `-v`.
    Minus,
}

impl VelocityState {
    /// Regime label in `{0, 1}`.
    pub fn xi(&self) -> u8 {
        match self {
            VelocityState::Plus => 0,
            VelocityState::Minus => 1,
        }
    }

    pub fn from_xi(xi: u8) -> Result<Self> {
        match xi {
            0 => Ok(VelocityState::Plus),
            1 => Ok(VelocityState::Minus),
            _ => Err(Error::InvalidParam(format!(
                "regime label must be 0 or 1, got {xi}"
            ))),
        }
    }

    /// Direction sign `(-1)^xi`.
    pub fn sign(&self) -> f64 {
        match self {
            VelocityState::Plus => 1.0,
            VelocityState::Minus => -1.0,
        }
    }

    /// Signed velocity for speed `v`.
    pub fn velocity(&self, v: f64) -> f64 {
        self.sign() * v
    }

    /// Regime after one direction switch.
    pub fn flipped(&self) -> Self {
        match self {
            VelocityState::Plus => VelocityState::Minus,
            VelocityState::Minus => VelocityState::Plus,
        }
    }
}

/// Initial regime pair `(k1, k2)` of a left and a right particle.
///
/// `(0, 1)` is the approaching pair (left moves right, right moves left);
/// `(1, 0)` is the separating pair; `(0, 0)` and `(1, 1)` translate in
/// parallel until a switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PatternPair {
    pub left: VelocityState,
    pub right: VelocityState,
}

impl PatternPair {
    pub const APPROACH: PatternPair = PatternPair {
        left: VelocityState::Plus,
        right: VelocityState::Minus,
    };
    pub const SEPARATE: PatternPair = PatternPair {
        left: VelocityState::Minus,
        right: VelocityState::Plus,
    };
    pub const BOTH_RIGHT: PatternPair = PatternPair {
        left: VelocityState::Plus,
        right: VelocityState::Plus,
    };
    pub const BOTH_LEFT: PatternPair = PatternPair {
        left: VelocityState::Minus,
        right: VelocityState::Minus,
    };

    /// All four regime pairs, in label order `00, 01, 10, 11`.
    pub const ALL: [PatternPair; 4] = [
        Self::BOTH_RIGHT,
        Self::APPROACH,
        Self::SEPARATE,
        Self::BOTH_LEFT,
    ];

    pub fn new(k1: u8, k2: u8) -> Result<Self> {
        Ok(PatternPair {
            left: VelocityState::from_xi(k1)?,
            right: VelocityState::from_xi(k2)?,
        })
    }

    /// Parses the two-digit label used on the command line: `00|01|10|11`.
    pub fn parse(label: &str) -> Result<Self> {
        match label {
            "00" => Ok(Self::BOTH_RIGHT),
            "01" => Ok(Self::APPROACH),
            "10" => Ok(Self::SEPARATE),
            "11" => Ok(Self::BOTH_LEFT),
            other => Err(Error::InvalidParam(format!(
                "pattern must be one of 00, 01, 10, 11, got {other:?}"
            ))),
        }
    }

    /// Two-digit label `k1 k2`.
    pub fn label(&self) -> String {
        format!("{}{}", self.left.xi(), self.right.xi())
    }

    /// Slope of the gap `x2 - x1` in units of `v`: `-2` approaching,
    /// `+2` separating, `0` parallel.
    pub fn gap_slope_factor(&self) -> f64 {
        self.right.sign() - self.left.sign()
    }

    pub fn is_approaching(&self) -> bool {
        *self == Self::APPROACH
    }
}

impl std::fmt::Display for PatternPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.left.xi(), self.right.xi())
    }
}

/// How initial directions of a gas are assigned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InitialRegimes {
    /// Each particle's initial direction is an independent fair coin.
    Equiprobable,
    /// Fixed regime per particle, in position order.
    Fixed(Vec<VelocityState>),
}

/// Configuration of an n-particle telegraph gas on the line or on a segment
/// `[0, b]` with reflecting boundaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GasConfig {
    positions: Vec<f64>,
    boundary: Option<f64>,
    params: Params,
    initial_regimes: InitialRegimes,
}

impl GasConfig {
    pub fn new(
        positions: Vec<f64>,
        boundary: Option<f64>,
        params: Params,
        initial_regimes: InitialRegimes,
    ) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidParam("positions must be non-empty".into()));
        }
        if positions.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParam("positions must be finite".into()));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParam(
                "positions must be strictly increasing".into(),
            ));
        }
        if let Some(b) = boundary {
            if !b.is_finite() || b <= 0.0 {
                return Err(Error::InvalidParam(format!(
                    "boundary b must be > 0, got {b}"
                )));
            }
            if positions[0] <= 0.0 || *positions.last().unwrap() >= b {
                return Err(Error::InvalidParam(
                    "positions must lie strictly inside (0, b)".into(),
                ));
            }
        }
        if let InitialRegimes::Fixed(regimes) = &initial_regimes {
            if regimes.len() != positions.len() {
                return Err(Error::InvalidParam(format!(
                    "fixed regimes length {} does not match particle count {}",
                    regimes.len(),
                    positions.len()
                )));
            }
        }
        Ok(GasConfig {
            positions,
            boundary,
            params,
            initial_regimes,
        })
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn boundary(&self) -> Option<f64> {
        self.boundary
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn initial_regimes(&self) -> &InitialRegimes {
        &self.initial_regimes
    }
}

/// Bounds `(v/b, 4v/b)` on the per-pair collision rate of a stationary gas
/// on `[0, b]`: the expected number of crossings of two independent
/// stationary particles over `(0, t)` is `c * t` with `v/b <= c <= 4v/b`.
pub fn collision_rate_bounds(v: f64, b: f64) -> Result<(f64, f64)> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::InvalidParam(format!("v must be > 0, got {v}")));
    }
    if !b.is_finite() || b <= 0.0 {
        return Err(Error::InvalidParam(format!("b must be > 0, got {b}")));
    }
    Ok((v / b, 4.0 * v / b))
}

/// Coefficient `C(T) = I0(2*T*lambda) / (2v)` bounding the mean meeting time
/// of a particle pair censored at horizon `T`: for an approaching pair at
/// gap `z`, `E[min(tau, T)] <= C(T) * z`.
///
/// Signals a range error once `exp(2*T*lambda)` overflows; use
/// [`meeting_time_bound_ln`] there.
pub fn meeting_time_bound(horizon: f64, params: Params) -> Result<f64> {
    if !horizon.is_finite() || horizon <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "horizon T must be > 0, got {horizon}"
        )));
    }
    let x = 2.0 * horizon * params.lambda();
    // e^x overflows just above x = 709; the scaled Bessel itself is fine.
    if x > 700.0 {
        return Err(Error::Range(format!(
            "I0({x}) overflows f64; use meeting_time_bound_ln"
        )));
    }
    Ok(numerics::i0_scaled(x)? * x.exp() / (2.0 * params.v()))
}

/// Natural log of [`meeting_time_bound`], usable for any `T * lambda`.
pub fn meeting_time_bound_ln(horizon: f64, params: Params) -> Result<f64> {
    if !horizon.is_finite() || horizon <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "horizon T must be > 0, got {horizon}"
        )));
    }
    let x = 2.0 * horizon * params.lambda();
    Ok(x + numerics::i0_scaled(x)?.ln() - (2.0 * params.v()).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent power-series oracle for I0: sum over m of (x/2)^(2m) / (m!)^2.
    fn i0_series_oracle(x: f64) -> f64 {
        (0..30)
            .map(|m| {
                let mut term = 1.0_f64;
                for j in 1..=m {
                    term *= (x / 2.0) / j as f64;
                }
                term * term
            })
            .sum()
    }

    #[test]
    fn params_validation() {
        let p = Params::new(1.0, 1.0).unwrap();
        assert_eq!(p.v(), 1.0);
        assert_eq!(p.lambda(), 1.0);
        let err = Params::new(0.0, 1.0).unwrap_err();
        assert!(err.to_string().contains("v must be > 0"));
        let err = Params::new(2.0, -1.0).unwrap_err();
        assert!(err.to_string().contains("lambda must be > 0"));
    }

    #[test]
    fn kac_scaling_values() {
        let p = kac_params(1.0, 1.0).unwrap();
        assert_eq!((p.v(), p.lambda()), (1.0, 1.0));
        let p = kac_params(0.5, 1.0).unwrap();
        assert_eq!((p.v(), p.lambda()), (2.0, 4.0));
        let p = kac_params(0.1, 2.0).unwrap();
        assert!((p.v() - 20.0).abs() < 1e-12);
        assert!((p.lambda() - 100.0).abs() < 1e-10);
        assert!((p.v() * p.v() / p.lambda() - 4.0).abs() < 1e-12);
        assert!(kac_params(-1.0, 1.0).is_err());
    }

    #[test]
    fn kac_scaling_identity_on_log_grid() {
        let c = 1.7;
        for k in 0..=30 {
            let eps = 10f64.powf(-3.0 + 3.0 * k as f64 / 30.0);
            let p = kac_params(eps, c).unwrap();
            let rel = (p.v() * p.v() / p.lambda() - c * c).abs() / (c * c);
            assert!(rel <= 1e-12, "eps={eps} rel={rel}");
        }
    }

    #[test]
    fn rate_bounds() {
        assert_eq!(collision_rate_bounds(1.0, 1.0).unwrap(), (1.0, 4.0));
        assert_eq!(collision_rate_bounds(2.0, 4.0).unwrap(), (0.5, 2.0));
        assert!(collision_rate_bounds(1.0, 0.0).is_err());
        let (lo, hi) = collision_rate_bounds(3.3, 0.7).unwrap();
        assert!(lo < hi);
        assert!((hi / lo - 4.0).abs() < 1e-12);
    }

    #[test]
    fn meeting_bound_values() {
        let p = Params::new(1.0, 1.0).unwrap();
        // T=1, v=1, lambda=1 -> I0(2)/2, from the series oracle.
        let want = i0_series_oracle(2.0) / 2.0;
        let got = meeting_time_bound(1.0, p).unwrap();
        assert!((got - want).abs() / want < 1e-10, "got {got} want {want}");
        assert!((want - 1.1398).abs() < 1e-3);

        // T -> 0+: I0(0) = 1, so the bound tends to 1/(2v).
        let tiny = meeting_time_bound(1e-14, p).unwrap();
        assert!((tiny - 0.5).abs() < 1e-10);

        let p2 = Params::new(2.0, 1.0).unwrap();
        let got = meeting_time_bound(1.0, p2).unwrap();
        assert!((got - i0_series_oracle(2.0) / 4.0).abs() < 1e-10);
    }

    #[test]
    fn meeting_bound_overflow_and_log_variant() {
        let p = Params::new(1.0, 1.0).unwrap();
        assert!(matches!(
            meeting_time_bound(400.0, p),
            Err(Error::Range(_))
        ));
        // The log variant agrees with the direct one where both exist.
        let direct = meeting_time_bound(5.0, p).unwrap();
        let ln = meeting_time_bound_ln(5.0, p).unwrap();
        assert!((ln.exp() - direct).abs() / direct < 1e-12);
        // And keeps working far beyond the overflow threshold.
        let big = meeting_time_bound_ln(400.0, p).unwrap();
        assert!(big.is_finite() && big > 700.0);
    }

    #[test]
    fn pattern_conventions() {
        assert_eq!(PatternPair::parse("01").unwrap(), PatternPair::APPROACH);
        assert_eq!(PatternPair::APPROACH.gap_slope_factor(), -2.0);
        assert_eq!(PatternPair::SEPARATE.gap_slope_factor(), 2.0);
        assert_eq!(PatternPair::BOTH_RIGHT.gap_slope_factor(), 0.0);
        assert_eq!(PatternPair::BOTH_LEFT.gap_slope_factor(), 0.0);
        assert!(PatternPair::parse("21").is_err());
        assert_eq!(PatternPair::APPROACH.label(), "01");
        assert_eq!(VelocityState::Plus.velocity(3.0), 3.0);
        assert_eq!(VelocityState::Minus.velocity(3.0), -3.0);
        assert_eq!(VelocityState::Minus.flipped(), VelocityState::Plus);
    }

    #[test]
    fn gas_config_validation() {
        let p = Params::new(1.0, 1.0).unwrap();
        let ok = GasConfig::new(
            vec![0.1, 0.5, 0.9],
            Some(1.0),
            p,
            InitialRegimes::Equiprobable,
        );
        assert!(ok.is_ok());
        assert!(GasConfig::new(vec![], None, p, InitialRegimes::Equiprobable).is_err());
        assert!(
            GasConfig::new(vec![0.5, 0.5], None, p, InitialRegimes::Equiprobable).is_err()
        );
        assert!(GasConfig::new(
            vec![0.1, 1.5],
            Some(1.0),
            p,
            InitialRegimes::Equiprobable
        )
        .is_err());
        assert!(GasConfig::new(
            vec![0.1, 0.2],
            Some(1.0),
            p,
            InitialRegimes::Fixed(vec![VelocityState::Plus])
        )
        .is_err());
    }

    #[test]
    fn plain_value_round_trips() {
        let p = Params::new(1.5, 2.5).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: Params = serde_json::from_str(&s).unwrap();
        assert_eq!(p, back);

        let cfg = GasConfig::new(
            vec![0.25, 0.5],
            Some(1.0),
            p,
            InitialRegimes::Fixed(vec![VelocityState::Plus, VelocityState::Minus]),
        )
        .unwrap();
        let s = serde_json::to_string(&cfg).unwrap();
        let back: GasConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(cfg, back);

        let pat = PatternPair::APPROACH;
        let s = serde_json::to_string(&pat).unwrap();
        let back: PatternPair = serde_json::from_str(&s).unwrap();
        assert_eq!(pat, back);
    }
}
