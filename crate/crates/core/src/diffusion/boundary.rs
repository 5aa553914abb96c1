//! Scale function, speed measure and the stationary-density candidate of
//! `dS = (beta / S) dt + sqrt(S) dB`, with anchors `x0` (scale) and `y0`
//! (the lower limit of the drift integral).
//!
//! ```text
//! s(y) = exp(2 beta / y - 2 beta / y0)
//! m(y) = exp(2 beta / y0 - 2 beta / y) / y
//! ```

use crate::error::{domain, Result};
use crate::specfun::{exp_integral_e1, one_minus_z_ei_scaled};

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return domain(format!("{name} must be positive and finite, got {v}"));
    }
    Ok(())
}

/// Scale density `s(y)`.
pub fn scale_density(y: f64, beta: f64, y0: f64) -> Result<f64> {
    positive("y", y)?;
    positive("beta", beta)?;
    positive("y0", y0)?;
    Ok((2.0 * beta / y - 2.0 * beta / y0).exp())
}

/// Speed density `m(y) = 1 / (sigma^2(y) s(y))`.
pub fn speed_density(y: f64, beta: f64, y0: f64) -> Result<f64> {
    positive("y", y)?;
    positive("beta", beta)?;
    positive("y0", y0)?;
    Ok((2.0 * beta / y0 - 2.0 * beta / y).exp() / y)
}

/// `e^(-2 beta / y0) T(x)` with `T(x) = x e^(2 beta / x) - 2 beta Ei(2 beta / x)`.
fn scaled_antiderivative(x: f64, beta: f64, y0: f64) -> Result<f64> {
    let z = 2.0 * beta / x;
    Ok(x * one_minus_z_ei_scaled(z)? * (z - 2.0 * beta / y0).exp())
}

/// `S(x) = int_{x0}^x s(y) dy`, negative for `x < x0`.
pub fn scale_function(x: f64, beta: f64, x0: f64, y0: f64) -> Result<f64> {
    positive("x", x)?;
    positive("beta", beta)?;
    positive("x0", x0)?;
    positive("y0", y0)?;
    if x == x0 {
        return Ok(0.0);
    }
    Ok(scaled_antiderivative(x, beta, y0)? - scaled_antiderivative(x0, beta, y0)?)
}

/// `M[c, d] = e^(2 beta / y0) [Ei(-2 beta / c) - Ei(-2 beta / d)]`.
pub fn speed_measure(c: f64, d: f64, beta: f64, y0: f64) -> Result<f64> {
    positive("c", c)?;
    positive("beta", beta)?;
    positive("y0", y0)?;
    if !(d > c) {
        return domain(format!("speed measure needs c < d, got c = {c}, d = {d}"));
    }
    let scale = (2.0 * beta / y0).exp();
    let (lo, hi) = (2.0 * beta / d, 2.0 * beta / c);
    // Ei(-u) = -E1(u)
    let diff = exp_integral_e1(lo)? - exp_integral_e1(hi)?;
    Ok(scale * diff)
}

/// `psi(x) = C1 - 2 beta C1 x^-1 e^(-2 beta / x) Ei(2 beta / x) + C2 x^-1 e^(-2 beta / x)`.
pub fn stationary_density_candidate(x: f64, beta: f64, c1: f64, c2: f64) -> Result<f64> {
    positive("x", x)?;
    positive("beta", beta)?;
    let z = 2.0 * beta / x;
    let mut psi = 0.0;
    if c1 != 0.0 {
        psi += c1 * one_minus_z_ei_scaled(z)?;
    }
    if c2 != 0.0 {
        psi += c2 * (-z).exp() / x;
    }
    Ok(psi)
}

/// `int_1^T x^-1 e^(-2 beta / x) dx = E1(2 beta / T) - E1(2 beta)` for `T >= 1`.
pub fn c2_partial_integral(t: f64, beta: f64) -> Result<f64> {
    positive("beta", beta)?;
    if !(t >= 1.0) || !t.is_finite() {
        return domain(format!("upper limit must be >= 1, got {t}"));
    }
    if t == 1.0 {
        return Ok(0.0);
    }
    Ok(exp_integral_e1(2.0 * beta / t)? - exp_integral_e1(2.0 * beta)?)
}

/// Growth of the C2 partial integrals against `ln T`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGrowthCertificate {
    pub upper_limits: Vec<f64>,
    pub partial_integrals: Vec<f64>,
    /// `(I(T_{i+1}) - I(T_i)) / ln(T_{i+1} / T_i)`.
    pub increment_ratios: Vec<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

/// Passes when the partial integrals strictly increase and every increment
/// ratio lies within `tolerance` of 1.
pub fn certify_log_growth(beta: f64, upper_limits: &[f64], tolerance: f64) -> Result<LogGrowthCertificate> {
    if upper_limits.len() < 2 || upper_limits.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("need at least two strictly increasing upper limits");
    }
    let partial_integrals = upper_limits
        .iter()
        .map(|&t| c2_partial_integral(t, beta))
        .collect::<Result<Vec<_>>>()?;
    let increment_ratios: Vec<f64> = partial_integrals
        .windows(2)
        .zip(upper_limits.windows(2))
        .map(|(i, t)| (i[1] - i[0]) / (t[1] / t[0]).ln())
        .collect();
    let increasing = partial_integrals.windows(2).all(|w| w[1] > w[0]);
    let passed = increasing && increment_ratios.iter().all(|r| (r - 1.0).abs() <= tolerance);
    Ok(LogGrowthCertificate {
        upper_limits: upper_limits.to_vec(),
        partial_integrals,
        increment_ratios,
        tolerance,
        passed,
    })
}
