//! Action of the limiting generator on power sums `phi_m(z) = sum_i z_i^m`.
//!
//! With `theta = beta / s` the `z`-part of the generator is
//!
//! ```text
//! (1/2) sum_ij z_i (delta_ij - z_j) d_ij - (1/2) sum_i (theta z_i + alpha) d_i
//! ```
//!
//! and `phi_m` does not depend on `s`, so
//!
//! ```text
//! A phi_m = (m / 2) [ (m - 1 - alpha) phi_{m-1} - (m - 1 + theta) phi_m ].
//! ```

use super::SimplexPoint;
use crate::error::{domain, Result};
use crate::gibbs::GGParams;

/// Coefficients `(c_{m-1}, c_m)` of `A phi_m = c_{m-1} phi_{m-1} + c_m phi_m`.
pub fn generator_power_sum_coefficients(m: u32, s: f64, params: &GGParams) -> Result<(f64, f64)> {
    if m < 2 {
        return domain(format!("power-sum degree must be >= 2, got {m}"));
    }
    if !(s > 0.0) || !s.is_finite() {
        return domain(format!("s must be positive, got {s}"));
    }
    let theta = params.beta() / s;
    let mf = m as f64;
    let alpha = params.alpha();
    Ok((0.5 * mf * (mf - 1.0 - alpha), -0.5 * mf * (mf - 1.0 + theta)))
}

/// `A phi_m` at `(s, point)`; the coordinates must sum to 1.
pub fn generator_action_power_sum(m: u32, s: f64, point: &SimplexPoint, params: &GGParams) -> Result<f64> {
    let (lower, same) = generator_power_sum_coefficients(m, s, params)?;
    let total: f64 = point.coords().iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return domain(format!("generator is evaluated on points summing to 1, got {total}"));
    }
    let m = m as i32;
    Ok(lower * point.power_sum(m - 1) + same * point.power_sum(m))
}
