//! Integral route for `V(n, k)`:
//!
//! ```text
//! V(n, k) = a^k / Gamma(n) int_0^inf x^(n-1) exp{-(a/alpha)[(tau+x)^alpha - tau^alpha]} (tau+x)^(alpha k - n) dx
//! ```
//!
//! Substituting `x = e^u` gives a log-concave integrand `exp(h(u))` with a
//! single mode, located by bisection on `h'`. The integral is taken on both
//! sides of the mode after shifting by `h(u*)`.

use super::{check_nk, ln_v_stable, weights_stable, GGParams, WeightPair};
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadConfig};
use statrs::function::gamma::ln_gamma;

const CUTOFF: f64 = 80.0;

struct Integrand {
    n: f64,
    m: f64,
    a: f64,
    tau: f64,
    alpha: f64,
    ln_tau: f64,
    tau_alpha: f64,
}

impl Integrand {
    fn new(n: usize, k: usize, p: &GGParams) -> Self {
        Self {
            n: n as f64,
            m: n as f64 - p.alpha() * k as f64,
            a: p.a(),
            tau: p.tau(),
            alpha: p.alpha(),
            ln_tau: p.tau().ln(),
            tau_alpha: p.tau().powf(p.alpha()),
        }
    }

    fn h(&self, u: f64) -> f64 {
        let r = u.exp() / self.tau;
        let l1p = r.ln_1p();
        let incr = self.tau_alpha * (self.alpha * l1p).exp_m1();
        self.n * u - self.a / self.alpha * incr - self.m * (self.ln_tau + l1p)
    }

    fn dh(&self, u: f64) -> f64 {
        let x = u.exp();
        let tx = self.tau + x;
        self.n - x * (self.a * tx.powf(self.alpha - 1.0) + self.m / tx)
    }

    fn mode(&self) -> f64 {
        let mut lo = 0.0;
        while self.dh(lo) <= 0.0 {
            lo -= 4.0;
        }
        let mut hi = lo + 4.0;
        while self.dh(hi) > 0.0 {
            hi += 4.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.dh(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Width scale `1 / sqrt(-h''(u*))` from a central difference of `h'`.
    fn width(&self, u: f64) -> f64 {
        let d = 1e-4;
        let curv = (self.dh(u - d) - self.dh(u + d)) / (2.0 * d);
        if curv > 0.0 { 1.0 / curv.sqrt() } else { 1.0 }
    }

    fn edge(&self, u0: f64, h0: f64, dir: f64, width: f64) -> f64 {
        let mut step = width;
        let mut u = u0 + dir * step;
        while self.h(u) - h0 > -CUTOFF {
            step *= 2.0;
            u = u0 + dir * step;
        }
        u
    }

    /// `(h(u*), ln int exp(h - h(u*)) weight(u) du)`.
    fn ln_integral(&self, weight: impl Fn(f64) -> f64) -> Result<(f64, f64)> {
        let u0 = self.mode();
        let h0 = self.h(u0);
        let w = self.width(u0);
        let lo = self.edge(u0, h0, -1.0, w);
        let hi = self.edge(u0, h0, 1.0, w);
        let cfg = QuadConfig { abs_tol: 0.0, rel_tol: 1e-13, max_intervals: 4000 };
        let f = |u: f64| (self.h(u) - h0).exp() * weight(u);
        let left = integrate(f, lo, u0, cfg)?;
        let right = integrate(f, u0, hi, cfg)?;
        let total = left.value + right.value;
        if !(total > 0.0) {
            return Err(Error::Numerical(format!(
                "integral for V is not positive: {total:e} (mode {u0}, range [{lo}, {hi}])"
            )));
        }
        Ok((h0, total.ln()))
    }
}

/// `ln V(n, k)` by quadrature.
pub fn ln_v_quadrature(n: usize, k: usize, params: &GGParams) -> Result<f64> {
    check_nk(n, k)?;
    if params.a() == 0.0 {
        return Ok(ln_v_stable(n, k, params.alpha()));
    }
    let f = Integrand::new(n, k, params);
    let (h0, ln_i) = f.ln_integral(|_| 1.0)?;
    Ok(k as f64 * params.a().ln() - ln_gamma(n as f64) + h0 + ln_i)
}

/// Weights from three independent quadratures of `V`.
pub fn weights_gg_quadrature(n: usize, k: usize, params: &GGParams) -> Result<WeightPair> {
    check_nk(n, k)?;
    if params.a() == 0.0 {
        return Ok(weights_stable(n, k, params.alpha()));
    }
    let v = ln_v_quadrature(n, k, params)?;
    let v_new = ln_v_quadrature(n + 1, k + 1, params)?;
    let v_old = ln_v_quadrature(n + 1, k, params)?;
    Ok(WeightPair {
        g0: (v_new - v).exp(),
        g1: (v_old - v).exp(),
        condition_estimate: 0.0,
    })
}

/// `w(n, k)` in `g0 = 1 - (1 - alpha k / n) w(n, k)`, i.e. the average of
/// `x / (tau + x)` under the `V(n, k)` integrand; returns `(w, 1 - w)`.
pub fn decomposition_w(n: usize, k: usize, params: &GGParams) -> Result<(f64, f64)> {
    check_nk(n, k)?;
    if params.a() == 0.0 {
        let w = 1.0;
        return Ok((w, 0.0));
    }
    let f = Integrand::new(n, k, params);
    let tau = params.tau();
    let (_, base) = f.ln_integral(|_| 1.0)?;
    let (_, near) = f.ln_integral(|u| tau / (tau + u.exp()))?;
    let one_minus_w = (near - base).exp();
    Ok((1.0 - one_minus_w, one_minus_w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v11_is_one() {
        for (a, tau, alpha) in [(1.0, 1.0, 0.5), (3.0, 0.2, 0.5), (0.5, 2.0, 0.3)] {
            let p = GGParams::new(a, tau, alpha).unwrap();
            assert!(ln_v_quadrature(1, 1, &p).unwrap().abs() < 1e-11);
        }
    }

    #[test]
    fn w_lies_in_unit_interval() {
        let p = GGParams::nig(1.0, 1.0).unwrap();
        let (w, c) = decomposition_w(30, 10, &p).unwrap();
        assert!(w > 0.0 && w < 1.0 && (w + c - 1.0).abs() < 1e-15);
    }
}
