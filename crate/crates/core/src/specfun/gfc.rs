//! Generalized factorial coefficients.
//!
//! ```text
//! C(n, k; a) = (1/k!) sum_{j=0}^k (-1)^j binom(k, j) (-j a)_n
//! C(n+1, k)  = a C(n, k-1) + (n - k a) C(n, k)
//! ```
//!
//! The defining sum cancels badly for small `a`; the recurrence has positive
//! terms for `a` in (0, 1) and is run in log space.

use super::signed_log::{log_add_exp, SignedLogValue};
use crate::error::{domain, Result};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        domain(format!("alpha must lie in (0, 1), got {alpha}"))
    }
}

/// Rows `0..=n_max` of `ln C(n, k; alpha)`, row `n` holding `k = 0..=n`.
pub fn ln_gen_factorial_table(n_max: usize, alpha: f64) -> Result<Vec<Vec<f64>>> {
    check_alpha(alpha)?;
    let ln_a = alpha.ln();
    let mut rows = Vec::with_capacity(n_max + 1);
    rows.push(vec![0.0]);
    for n in 0..n_max {
        let prev: &Vec<f64> = &rows[n];
        let mut next = vec![f64::NEG_INFINITY; n + 2];
        for (k, slot) in next.iter_mut().enumerate().skip(1) {
            let from_new = ln_a + prev[k - 1];
            let from_old = if k <= n {
                (n as f64 - k as f64 * alpha).ln() + prev[k]
            } else {
                f64::NEG_INFINITY
            };
            *slot = log_add_exp(from_new, from_old);
        }
        rows.push(next);
    }
    Ok(rows)
}

pub fn ln_gen_factorial_coeff(n: usize, k: usize, alpha: f64) -> Result<SignedLogValue> {
    check_alpha(alpha)?;
    if k > n {
        return Ok(SignedLogValue::ZERO);
    }
    let rows = ln_gen_factorial_table(n, alpha)?;
    Ok(SignedLogValue::from_ln(rows[n][k]))
}

pub fn gen_factorial_coeff(n: usize, k: usize, alpha: f64) -> Result<f64> {
    ln_gen_factorial_coeff(n, k, alpha).map(SignedLogValue::value)
}
