//! Closed-form route at alpha = 1/2.
//!
//! ```text
//! D(n, c) = sum_{s=0}^{n-1} binom(n-1, s) (-1)^s beta^(s/alpha) G(c - s/alpha; beta)
//! V(n, k) = alpha^(k-1) e^beta D(n, k) / Gamma(n)
//! g0      = alpha D(n+1, k+1) / (n D(n, k))
//! g1      = D(n+1, k) / (n D(n, k))
//! ```
//!
//! The sums are first accumulated in double precision as signed-log pools. If
//! the cancellation exceeds `f64_condition_limit` digits the evaluation moves
//! to MPFR with a precision chosen from the measured cancellation.

use super::{check_nk, ln_v_stable, weights_stable, GGParams, WeightPair};
use crate::error::{Error, Result};
use crate::mp::{self, Ladder};
use crate::specfun::{ln_upper_incomplete_gamma, SignedLogSum, SignedLogValue};
use rug::Float;
use statrs::function::factorial::ln_binomial;
use statrs::function::gamma::ln_gamma;

#[derive(Debug, Clone, Copy)]
pub struct ExactConfig {
    /// Largest cancellation (log10) accepted from the double-precision pools.
    pub f64_condition_limit: f64,
    /// Retry in multiprecision when the double-precision pools cancel too much.
    pub multiprecision: bool,
    pub max_bits: u32,
}

impl Default for ExactConfig {
    fn default() -> Self {
        Self { f64_condition_limit: 5.0, multiprecision: true, max_bits: 1 << 15 }
    }
}

fn ln_d_f64(n: usize, c: i64, beta: f64) -> Result<(SignedLogValue, f64)> {
    let ln_beta = beta.ln();
    let mut sum = SignedLogSum::default();
    for s in 0..n {
        let ln_term = ln_binomial(n as u64 - 1, s as u64)
            + 2.0 * s as f64 * ln_beta
            + ln_upper_incomplete_gamma((c - 2 * s as i64) as f64, beta)?;
        sum.add(SignedLogValue::new(if s % 2 == 0 { 1 } else { -1 }, ln_term));
    }
    Ok((sum.total(), sum.condition()))
}

fn positive_ln(v: SignedLogValue) -> Option<f64> {
    (v.sign == 1).then_some(v.log_magnitude)
}

fn refuse(condition: f64, limit: f64) -> Error {
    Error::PrecisionLoss(format!(
        "alternating sums cancel {condition:.1} digits, above the limit of {limit:.1}; use the quadrature route"
    ))
}

/// `D` values at the requested `(n, c)` in multiprecision, with the largest
/// cancellation as log10.
pub(crate) fn mp_d_values(beta: f64, wanted: &[(usize, i64)], max_bits: u32) -> Result<(Vec<Float>, f64)> {
    let c_lo = wanted.iter().map(|&(n, c)| c - 2 * (n as i64 - 1)).min().expect("nonempty");
    let c_hi = wanted.iter().map(|&(_, c)| c).max().expect("nonempty");
    let guard = Ladder::guard_bits(beta, c_lo);
    mp::with_adaptive_precision(guard, max_bits, |prec| {
        let ladder = Ladder::new(beta, c_lo, c_hi, prec);
        let mut worst: f64 = 0.0;
        let vals = wanted
            .iter()
            .map(|&(n, c)| {
                let (v, bits) = mp::alternating_d(&ladder, beta, n as u32, c, prec);
                worst = worst.max(if v.is_sign_positive() && !v.is_zero() { bits } else { f64::INFINITY });
                v
            })
            .collect();
        (vals, worst)
    })
}

pub fn weights_gg_exact(n: usize, k: usize, params: &GGParams) -> Result<WeightPair> {
    weights_gg_exact_with(n, k, params, &ExactConfig::default())
}

pub fn weights_gg_exact_with(n: usize, k: usize, params: &GGParams, cfg: &ExactConfig) -> Result<WeightPair> {
    check_nk(n, k)?;
    params.require_nig("the exact route")?;
    let beta = params.beta();
    if beta == 0.0 {
        return Ok(weights_stable(n, k, params.alpha()));
    }
    let (alpha, nf, ki) = (params.alpha(), n as f64, k as i64);
    let (d, c0) = ln_d_f64(n, ki, beta)?;
    let (d_new, c1) = ln_d_f64(n + 1, ki + 1, beta)?;
    let (d_old, c2) = ln_d_f64(n + 1, ki, beta)?;
    let cond = c0.max(c1).max(c2);
    if cond <= cfg.f64_condition_limit {
        if let (Some(d), Some(d_new), Some(d_old)) = (positive_ln(d), positive_ln(d_new), positive_ln(d_old)) {
            return Ok(WeightPair {
                g0: alpha / nf * (d_new - d).exp(),
                g1: (d_old - d).exp() / nf,
                condition_estimate: cond,
            });
        }
    }
    if !cfg.multiprecision {
        return Err(refuse(cond, cfg.f64_condition_limit));
    }
    let (vals, cond) = mp_d_values(beta, &[(n, ki), (n + 1, ki + 1), (n + 1, ki)], cfg.max_bits)?;
    let g0 = Float::with_val(vals[0].prec(), &vals[1] / &vals[0]) * alpha / nf;
    let g1 = Float::with_val(vals[0].prec(), &vals[2] / &vals[0]) / nf;
    Ok(WeightPair { g0: g0.to_f64(), g1: g1.to_f64(), condition_estimate: cond })
}

/// `ln V(n, k)` by the closed form at alpha = 1/2.
pub fn ln_v_exact(n: usize, k: usize, params: &GGParams) -> Result<f64> {
    check_nk(n, k)?;
    params.require_nig("the exact route")?;
    let beta = params.beta();
    let alpha = params.alpha();
    if beta == 0.0 {
        return Ok(ln_v_stable(n, k, alpha));
    }
    let prefix = (k as f64 - 1.0) * alpha.ln() + beta - ln_gamma(n as f64);
    let cfg = ExactConfig::default();
    let (d, cond) = ln_d_f64(n, k as i64, beta)?;
    if cond <= cfg.f64_condition_limit {
        if let Some(d) = positive_ln(d) {
            return Ok(prefix + d);
        }
    }
    let (vals, _) = mp_d_values(beta, &[(n, k as i64)], cfg.max_bits)?;
    Ok(prefix + mp::ln_f64(&vals[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_constraint() {
        for beta in [0.1, 1.0, 7.0] {
            let p = GGParams::from_beta(beta, 0.5).unwrap();
            let w = weights_gg_exact(1, 1, &p).unwrap();
            assert!(w.constraint_residual(1, 1, 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn refusal_without_multiprecision() {
        let p = GGParams::from_beta(10.0, 0.5).unwrap();
        let cfg = ExactConfig { multiprecision: false, ..ExactConfig::default() };
        assert!(matches!(weights_gg_exact_with(40, 10, &p, &cfg), Err(Error::PrecisionLoss(_))));
        let w = weights_gg_exact(40, 10, &p).unwrap();
        assert!(w.condition_estimate > 12.0);
        assert!(w.constraint_residual(40, 10, 0.5).abs() < 1e-12);
    }

    #[test]
    fn v11_is_one() {
        let p = GGParams::nig(1.0, 1.0).unwrap();
        assert!(ln_v_exact(1, 1, &p).unwrap().abs() < 1e-13);
    }
}
