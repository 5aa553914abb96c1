//! Pochhammer symbol and the upper incomplete gamma function for real `c`.
//!
//! ```text
//! G(c; x) = int_x^inf t^(c-1) e^(-t) dt,   x > 0
//! R(c; x) = G(c; x) e^x x^(-c)             (scaled form)
//! ```
//!
//! Branches:
//! - integer `c >= 1`: the finite sum `(c-1)! e^-x sum_{j<c} x^j / j!`.
//! - `c > 1/2, x < c + 1`: `Gamma(c) - gamma(c, x)` with the lower series.
//! - `x >= 1` or `c > 1/2`: Lentz continued fraction for `R`.
//! - `c <= 1/2, x < 1`: anchor at `f = c - ceil(c - 1/2)` in `(-1/2, 1/2]`
//!   from a cancellation-free series, then `R(c) = (x R(c+1) - 1) / c`
//!   downward. The recursion damps errors by `x / |c| < 1` per step.

use super::signed_log::SignedLogValue;
use crate::error::{domain, Result};
use statrs::function::gamma::ln_gamma;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const ZETA: [f64; 9] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_2,
    1.082_323_233_711_138_2,
    1.036_927_755_143_37,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
];

pub fn pochhammer(a: f64, m: u32) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (a + f64::from(i)))
}

pub fn ln_pochhammer(a: f64, m: u32) -> SignedLogValue {
    let mut out = SignedLogValue::ONE;
    for i in 0..m {
        out = out * SignedLogValue::from_f64(a + f64::from(i));
    }
    out
}

fn zeta(k: usize) -> f64 {
    if k <= 10 {
        return ZETA[k - 2];
    }
    let kf = k as f64;
    let n = 10.0f64;
    let head: f64 = (1..10).map(|j| (j as f64).powf(-kf)).sum();
    head + n.powf(1.0 - kf) / (kf - 1.0) + 0.5 * n.powf(-kf) + kf * n.powf(-kf - 1.0) / 12.0
}

/// `(Gamma(1 + f) - 1) / f` for `|f| <= 1/2`, from the series of `ln Gamma(1 + f)`.
fn gamma1pm1_over(f: f64) -> f64 {
    if f == 0.0 {
        return -EULER_GAMMA;
    }
    let mut lg = -EULER_GAMMA * f;
    let mut p = -f;
    for k in 2..64 {
        p *= -f;
        let t = zeta(k) * p / k as f64;
        lg += t;
        if t.abs() < 1e-18 * lg.abs() {
            break;
        }
    }
    lg.exp_m1() / f
}

/// `G(f; x)` for `|f| <= 1/2`, `0 < x < 1`.
fn upper_gamma_small(f: f64, x: f64) -> f64 {
    let lnx = x.ln();
    let pow_term = if f == 0.0 { lnx } else { (f * lnx).exp_m1() / f };
    let mut sum = 0.0;
    let mut t = 1.0;
    for k in 1..200 {
        t *= -x / k as f64;
        let term = t / (f + k as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    gamma1pm1_over(f) - pow_term - (f * lnx).exp() * sum
}

/// Scaled continued fraction `R(c; x)`; converges for every `c` when `x >= 1`
/// and for `x >= c + 1` in general.
pub(crate) fn scaled_upper_cf(c: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - c;
    let mut cc = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..100_000 {
        let an = -(i as f64) * (i as f64 - c);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        cc = b + an / cc;
        if cc.abs() < TINY {
            cc = TINY;
        }
        d = 1.0 / d;
        let del = d * cc;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Lower series `P(c, x) = gamma(c, x) / Gamma(c)` for `c > 0`.
fn lower_regularized_series(c: f64, x: f64) -> f64 {
    let mut ap = c;
    let mut del = 1.0 / c;
    let mut sum = del;
    for _ in 0..10_000 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum * (c * x.ln() - x - ln_gamma(c)).exp()
}

/// Natural log of `G(c; x)`; `G` is positive for every real `c` and `x > 0`.
pub fn ln_upper_incomplete_gamma(c: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("upper incomplete gamma needs x > 0, got {x}"));
    }
    if !c.is_finite() {
        return domain(format!("upper incomplete gamma needs finite c, got {c}"));
    }
    let lnx = x.ln();
    if (1.0..=170.0).contains(&c) && c.fract() == 0.0 && x < 600.0 {
        // G(m; x) = (m-1)! e^-x sum_{j<m} x^j / j!
        let m = c as usize;
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..m {
            term *= x / j as f64;
            sum += term;
        }
        return Ok(ln_gamma(c) - x + sum.ln());
    }
    if c > 0.5 && x < c + 1.0 {
        let p = lower_regularized_series(c, x);
        return Ok(ln_gamma(c) + (-p).ln_1p());
    }
    if x >= 1.0 || c > 0.5 {
        return Ok(scaled_upper_cf(c, x).ln() + c * lnx - x);
    }
    let f = c - (c - 0.5).ceil();
    let steps = (f - c).round() as i64;
    let g = upper_gamma_small(f, x);
    if steps == 0 {
        return Ok(g.ln());
    }
    let mut r = g * (x - f * lnx).exp();
    let mut cur = f;
    for _ in 0..steps {
        cur -= 1.0;
        r = (x * r - 1.0) / cur;
    }
    Ok(r.ln() + c * lnx - x)
}

pub fn upper_incomplete_gamma(c: f64, x: f64) -> Result<f64> {
    ln_upper_incomplete_gamma(c, x).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(0.3, 0), 1.0);
        assert!((pochhammer(0.5, 3) - 1.875).abs() < 1e-15);
        assert_eq!(pochhammer(1.0, 5), 120.0);
        let l = ln_pochhammer(-2.5, 3);
        assert_eq!(l.sign, -1);
        assert!((l.value() - (-2.5 * -1.5 * -0.5)).abs() < 1e-14);
        assert!(ln_pochhammer(-2.0, 3).is_zero());
    }

    #[test]
    fn closed_forms() {
        assert!((upper_incomplete_gamma(1.0, 2.0).unwrap() - (-2.0f64).exp()).abs() < 1e-16);
        let g0 = upper_incomplete_gamma(0.0, 1.0).unwrap();
        assert!((g0 - 0.219_383_934_395_520_3).abs() < 1e-15);
        let gm1 = upper_incomplete_gamma(-1.0, 1.0).unwrap();
        assert!((gm1 - 0.148_495_506_775_922).abs() < 1e-14);
    }

    #[test]
    fn gamma1pm1_matches_direct() {
        let reference = [
            (-0.5, -1.544_907_701_811_032),
            (-0.3, -0.993_517_775_491_859_6),
            (0.25, -0.374_390_091_778_091_7),
            (0.5, -0.227_546_149_094_483_97),
        ];
        for (f, want) in reference {
            let got = gamma1pm1_over(f);
            assert!((got - want).abs() < 1e-14 * want.abs(), "{f}: {got} vs {want}");
        }
    }

    #[test]
    fn rejects_nonpositive_x() {
        assert!(upper_incomplete_gamma(1.0, 0.0).is_err());
        assert!(upper_incomplete_gamma(1.0, -1.0).is_err());
    }
}
