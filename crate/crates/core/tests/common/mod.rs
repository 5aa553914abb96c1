//! Test oracles that share no code with the library.
#![allow(dead_code)]

/// Tanh-sinh quadrature on `[a, b]`, halving the step until two successive
/// levels agree to `1e-15` relative.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let node = |t: f64| {
        let s = half_pi * t.sinh();
        let x = s.tanh();
        let w = half_pi * t.cosh() / (s.cosh() * s.cosh());
        (x, w)
    };
    let eval = |t: f64| {
        let (x, w) = node(t);
        let mut acc = 0.0;
        for xx in [x, -x] {
            let p = c + r * xx;
            if p > a && p < b {
                acc += w * f(p);
            }
        }
        acc
    };
    let tmax = 3.2;
    let mut h = 0.5;
    let mut sum = half_pi * f(c);
    let mut t = h;
    while t <= tmax {
        sum += eval(t);
        t += h;
    }
    let mut prev = sum * h * r;
    for _ in 0..12 {
        h *= 0.5;
        let mut t = h;
        while t <= tmax {
            sum += eval(t);
            t += 2.0 * h;
        }
        let est = sum * h * r;
        if (est - prev).abs() <= 1e-15 * est.abs() {
            return est;
        }
        prev = est;
    }
    prev
}

/// Tanh-sinh over `pieces` equal subintervals of `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, pieces: usize) -> f64 {
    let w = (b - a) / pieces as f64;
    (0..pieces).map(|i| tanh_sinh(&f, a + i as f64 * w, a + (i + 1) as f64 * w)).sum()
}

/// `int_x^inf t^(c-1) e^-t dt` through `t = x e^v`.
pub fn upper_gamma(c: f64, x: f64) -> f64 {
    let vmax = ((x + c.max(0.0) * 3.0 + 120.0) / x).ln();
    let f = |v: f64| (c * (x.ln() + v) - x * v.exp()).exp();
    let pieces = (vmax * 8.0).ceil() as usize;
    integrate(f, 0.0, vmax, pieces)
}

/// `Ei(z)`: `-E1(-z)` for `z < 0`; `gamma + ln z + int_0^z (e^t - 1)/t dt` for `z > 0`.
pub fn ei(z: f64) -> f64 {
    const EG: f64 = 0.577_215_664_901_532_9;
    if z < 0.0 {
        return -upper_gamma(0.0, -z);
    }
    let f = |t: f64| if t == 0.0 { 1.0 } else { t.exp_m1() / t };
    EG + z.ln() + integrate(f, 0.0, z, (z.ceil() as usize).max(1) * 2)
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

/// `V(n, k)` integrand in `x`, integrated on a log grid; returns `ln V`.
pub fn ln_v(n: usize, k: usize, a: f64, tau: f64, alpha: f64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    let h = |u: f64| {
        let x: f64 = u.exp();
        nf * u - a / alpha * ((tau + x).powf(alpha) - tau.powf(alpha)) + (alpha * kf - nf) * (tau + x).ln()
    };
    let mut best = f64::NEG_INFINITY;
    let mut ub = 0.0;
    let mut u = -60.0;
    while u < 60.0 {
        let v = h(u);
        if v > best {
            best = v;
            ub = u;
        }
        u += 0.01;
    }
    let mut lo = ub;
    while h(lo) - best > -90.0 {
        lo -= 0.25;
    }
    let mut hi = ub;
    while h(hi) - best > -90.0 {
        hi += 0.25;
    }
    let pieces = ((hi - lo) * 6.0).ceil() as usize;
    let i = integrate(|u| (h(u) - best).exp(), lo, hi, pieces);
    let ln_gamma_n: f64 = (1..n).map(|j| (j as f64).ln()).sum();
    kf * a.ln() - ln_gamma_n + best + i.ln()
}
