//! Law of the number of singleton blocks `M1` among `n` draws.
//!
//! ```text
//! P(M1 = m) = sum_j (-1)^j n! / (m! j! N!) sum_k C(N, k; alpha) alpha^(-k) V(n, k + m + j),  N = n - m - j
//! E[(M1)_[r]] = sum_k (n)_[r] alpha^(r-k) C(n - r, k - r; alpha) V(n, k)
//! ```
//!
//! The pmf alternates in `j`. At alpha = 1/2 (and at beta = 0) it is evaluated
//! in multiprecision from the exact `V`; other alpha use quadrature `V` in
//! double precision and refuse when the cancellation passes 8 digits.

use super::exact::mp_d_values;
use super::{ln_v, ln_v_quadrature, GGParams};
use crate::error::{domain, Error, Result};
use crate::mp::{self, PoolSum};
use crate::specfun::{ln_gen_factorial_table, LogSumExp, SignedLogSum, SignedLogValue};
use rug::ops::Pow;
use rug::Float;
use statrs::function::factorial::ln_factorial;

#[derive(Debug, Clone, Copy)]
pub struct M1Config {
    /// Largest `n` accepted by the pmf.
    pub max_n: usize,
    pub f64_condition_limit: f64,
    pub max_bits: u32,
}

impl Default for M1Config {
    fn default() -> Self {
        Self { max_n: 40, f64_condition_limit: 8.0, max_bits: 1 << 14 }
    }
}

pub fn m1_pmf(n: usize, m: usize, params: &GGParams) -> Result<f64> {
    m1_pmf_with(n, m, params, &M1Config::default())
}

pub fn m1_pmf_with(n: usize, m: usize, params: &GGParams, cfg: &M1Config) -> Result<f64> {
    if n == 0 || m > n {
        return domain(format!("need 0 <= m <= n and n >= 1, got n = {n}, m = {m}"));
    }
    if n > cfg.max_n {
        return Err(Error::PrecisionLoss(format!(
            "singleton pmf refused for n = {n} > {}; use m1_factorial_moment",
            cfg.max_n
        )));
    }
    if m + 1 == n {
        // exactly one non-singleton item is impossible
        return Ok(0.0);
    }
    if params.beta() == 0.0 || params.is_nig() {
        pmf_multiprecision(n, m, params, cfg)
    } else {
        pmf_f64(n, m, params, cfg)
    }
}

fn mp_binom3(n: usize, m: usize, j: usize, big_n: usize, prec: u32) -> Float {
    let f = |x: usize| Float::with_val(prec, Float::factorial(x as u32));
    f(n) / (f(m) * f(j) * f(big_n))
}

fn mp_gfc_table(n: usize, alpha: &Float, prec: u32) -> Vec<Vec<Float>> {
    let mut rows = vec![vec![Float::with_val(prec, 1)]];
    for r in 0..n {
        let prev = &rows[r];
        let mut next = vec![Float::new(prec); r + 2];
        for (k, slot) in next.iter_mut().enumerate().skip(1) {
            let mut v = Float::with_val(prec, alpha * &prev[k - 1]);
            if k <= r {
                let coef = Float::with_val(prec, r) - Float::with_val(prec, alpha * k as u32);
                v += coef * &prev[k];
            }
            *slot = v;
        }
        rows.push(next);
    }
    rows
}

/// `V(n, c)` for `c = 1..=n` (index `c - 1`).
fn mp_v_row(n: usize, params: &GGParams, prec: u32, max_bits: u32) -> Result<(Vec<Float>, f64)> {
    let alpha = Float::with_val(prec, params.alpha());
    let fact = Float::with_val(prec, Float::factorial(n as u32 - 1));
    let beta = params.beta();
    if beta == 0.0 {
        let row = (1..=n)
            .map(|c| {
                let a = Float::with_val(prec, (&alpha).pow((c - 1) as u32));
                a * Float::with_val(prec, Float::factorial(c as u32 - 1)) / &fact
            })
            .collect();
        return Ok((row, 0.0));
    }
    let wanted: Vec<(usize, i64)> = (1..=n).map(|c| (n, c as i64)).collect();
    let (d, cond) = mp_d_values(beta, &wanted, max_bits.max(prec))?;
    let eb = Float::with_val(prec, beta).exp();
    let row = d
        .into_iter()
        .enumerate()
        .map(|(i, dv)| {
            let a = Float::with_val(prec, (&alpha).pow(i as u32));
            Float::with_val(prec, a * &eb) * Float::with_val(prec, dv) / &fact
        })
        .collect();
    Ok((row, cond))
}

fn pmf_multiprecision(n: usize, m: usize, params: &GGParams, cfg: &M1Config) -> Result<f64> {
    let (out, _) = mp::with_adaptive_precision(0, cfg.max_bits, |prec| {
        let (v, _) = match mp_v_row(n, params, prec, cfg.max_bits) {
            Ok(x) => x,
            Err(_) => return (None, f64::INFINITY),
        };
        let alpha = Float::with_val(prec, params.alpha());
        let gfc = mp_gfc_table(n, &alpha, prec);
        let inv_alpha = Float::with_val(prec, alpha.recip_ref());
        let mut outer = PoolSum::new(prec);
        for j in 0..=(n - m) {
            let big_n = n - m - j;
            let mut inner = Float::new(prec);
            let mut pw = Float::with_val(prec, 1);
            for k in 0..=big_n {
                let c = k + m + j;
                if c >= 1 && !gfc[big_n][k].is_zero() {
                    inner += Float::with_val(prec, &gfc[big_n][k] * &pw) * &v[c - 1];
                }
                pw *= &inv_alpha;
            }
            let mut t = mp_binom3(n, m, j, big_n, prec) * inner;
            if j % 2 == 1 {
                t = -t;
            }
            outer.add(t);
        }
        (Some(outer.value().to_f64()), outer.cancellation_bits())
    })?;
    out.ok_or_else(|| Error::PrecisionLoss("V row could not be evaluated".into()))
}

fn pmf_f64(n: usize, m: usize, params: &GGParams, cfg: &M1Config) -> Result<f64> {
    let alpha = params.alpha();
    let ln_v_row: Vec<f64> = (1..=n).map(|c| ln_v_quadrature(n, c, params)).collect::<Result<_>>()?;
    let gfc = ln_gen_factorial_table(n, alpha)?;
    let ln_alpha = alpha.ln();
    let mut outer = SignedLogSum::default();
    for j in 0..=(n - m) {
        let big_n = n - m - j;
        let mut inner = LogSumExp::default();
        for k in 0..=big_n {
            let c = k + m + j;
            if c >= 1 {
                inner.add(gfc[big_n][k] - k as f64 * ln_alpha + ln_v_row[c - 1]);
            }
        }
        let ln_coef = ln_factorial(n as u64) - ln_factorial(m as u64) - ln_factorial(j as u64) - ln_factorial(big_n as u64);
        outer.add(SignedLogValue::new(if j % 2 == 0 { 1 } else { -1 }, ln_coef + inner.ln()));
    }
    let cond = outer.condition();
    if cond > cfg.f64_condition_limit {
        return Err(Error::PrecisionLoss(format!(
            "singleton pmf cancels {cond:.1} digits at n = {n}, m = {m}"
        )));
    }
    Ok(outer.total().value())
}

/// `E[M1 (M1 - 1) ... (M1 - r + 1)]`; every term is positive.
pub fn m1_factorial_moment(n: usize, r: usize, params: &GGParams) -> Result<f64> {
    if r == 0 || r > n {
        return domain(format!("need 1 <= r <= n, got n = {n}, r = {r}"));
    }
    let alpha = params.alpha();
    let gfc = ln_gen_factorial_table(n - r, alpha)?;
    let ln_falling = ln_factorial(n as u64) - ln_factorial((n - r) as u64);
    let mut acc = LogSumExp::default();
    for k in r..=n {
        let c = gfc[n - r][k - r];
        if c == f64::NEG_INFINITY {
            continue;
        }
        acc.add(ln_falling + (r as f64 - k as f64) * alpha.ln() + c + ln_v(n, k, params)?);
    }
    Ok(acc.ln().exp())
}
