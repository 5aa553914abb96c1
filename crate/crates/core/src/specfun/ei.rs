//! Exponential integrals.
//!
//! ```text
//! Ei(z) = -PV int_{-z}^inf e^(-t)/t dt,   E1(x) = G(0; x) = -Ei(-x)
//! ```

use super::gamma::{scaled_upper_cf, EULER_GAMMA};
use crate::error::{domain, Result};

const ASYMPTOTIC_FROM: f64 = 40.0;

/// `E1(x)` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("E1 needs x > 0, got {x}"));
    }
    if x >= 1.0 {
        return Ok(scaled_upper_cf(0.0, x) * (-x).exp());
    }
    let mut sum = 0.0;
    let mut t = 1.0;
    for k in 1..100 {
        t *= -x / k as f64;
        let term = t / k as f64;
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    Ok(-EULER_GAMMA - x.ln() - sum)
}

/// Positive series `sum_{k>=1} z^k / (k k!)`.
fn ei_series_tail(z: f64) -> f64 {
    let mut sum = 0.0;
    let mut t = 1.0;
    for k in 1..500 {
        t *= z / k as f64;
        let term = t / k as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// `sum_{k>=0} k! / z^k`, truncated at the smallest term.
fn asymptotic_sum(z: f64) -> f64 {
    1.0 + asymptotic_tail(z)
}

/// `sum_{k>=1} k! / z^k`, truncated at the smallest term.
fn asymptotic_tail(z: f64) -> f64 {
    let mut sum = 0.0;
    let mut t = 1.0;
    for k in 1..200 {
        let next = t * k as f64 / z;
        if next > t {
            break;
        }
        t = next;
        sum += t;
        if t < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// `Ei(z)` for real `z != 0`.
pub fn exp_integral_ei(z: f64) -> Result<f64> {
    if z == 0.0 || z.is_nan() {
        return domain("Ei has a logarithmic singularity at 0");
    }
    if z < 0.0 {
        return exp_integral_e1(-z).map(|v| -v);
    }
    if z < ASYMPTOTIC_FROM {
        Ok(EULER_GAMMA + z.ln() + ei_series_tail(z))
    } else {
        Ok(z.exp() / z * asymptotic_sum(z))
    }
}

/// `e^(-z) Ei(z)` for `z > 0`; finite for all `z`.
pub fn ei_scaled(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return domain(format!("scaled Ei needs z > 0, got {z}"));
    }
    if z < ASYMPTOTIC_FROM {
        Ok((-z).exp() * (EULER_GAMMA + z.ln() + ei_series_tail(z)))
    } else {
        Ok(asymptotic_sum(z) / z)
    }
}

/// `1 - z e^(-z) Ei(z)` for `z > 0`, without the cancellation at large `z`.
pub fn one_minus_z_ei_scaled(z: f64) -> Result<f64> {
    if z < ASYMPTOTIC_FROM {
        return Ok(1.0 - z * ei_scaled(z)?);
    }
    Ok(-asymptotic_tail(z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert!((exp_integral_ei(1.0).unwrap() - 1.895_117_816_355_937).abs() < 1e-14);
        assert!((exp_integral_ei(-1.0).unwrap() + 0.219_383_934_395_520_3).abs() < 1e-15);
        assert!((exp_integral_ei(10.0).unwrap() / 2492.228_976_241_877_7 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn branches_meet() {
        let below = EULER_GAMMA + 40f64.ln() + ei_series_tail(40.0);
        let above = 40f64.exp() / 40.0 * asymptotic_sum(40.0);
        assert!((below / above - 1.0).abs() < 1e-13);
        let a = exp_integral_e1(1.0 - 1e-12).unwrap();
        let b = exp_integral_e1(1.0).unwrap();
        assert!((a - b).abs() < 1e-11);
    }

    #[test]
    fn zero_is_rejected() {
        assert!(exp_integral_ei(0.0).is_err());
    }
}
