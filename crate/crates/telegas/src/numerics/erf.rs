//! Error function and complement, used for the Brownian-limit meeting CDF.

/// `erf(x)`: ascending series for small arguments, continued fraction above.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x <= 2.0 {
        erf_series(x)
    } else {
        1.0 - erfc_cf(x)
    }
}

/// `erfc(x) = 1 - erf(x)`, accurate in the far tail.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x <= 2.0 {
        1.0 - erf_series(x)
    } else {
        erfc_cf(x)
    }
}

fn erf_series(x: f64) -> f64 {
    // 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1))
    let mut term = x;
    let mut sum = x;
    for n in 1..200 {
        let nf = n as f64;
        term *= -x * x / nf;
        let add = term / (2.0 * nf + 1.0);
        sum += add;
        if add.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

fn erfc_cf(x: f64) -> f64 {
    // erfc(x) * sqrt(pi) * e^(x^2) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    // i.e. the continued fraction a_1/(b_1 + a_2/(b_2 + ...)) with b_j = x,
    // a_1 = 1, a_j = (j-1)/2. Evaluated by modified Lentz.
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    for j in 1..300 {
        let a = if j == 1 { 1.0 } else { (j - 1) as f64 / 2.0 };
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let del = c * d;
        f *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f * (-x * x).exp() / std::f64::consts::PI.sqrt()
}
