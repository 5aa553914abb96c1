//! Discretizations of `dS = (beta / S) dt + sqrt(S) dB`.

use super::DiversityPath;
use crate::error::{domain, Result};
use rand::Rng;
use rand_distr::StandardNormal;

/// Lower bound on `s` in the drift denominator of the full-truncation scheme.
pub const FLOOR_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SdeScheme {
    /// Euler-Maruyama, drift `beta / max(s, FLOOR_GUARD)`, noise `sqrt(max(s, 0))`, clamped at 0.
    #[default]
    FullTruncation,
    /// Implicit in the drift: solves `s' = s + sqrt(s) dW + beta dt / s'` for the positive root.
    /// Stays positive for `beta > 0`, including from `s = 0`.
    DriftImplicit,
}

/// One step given the Brownian increment `dw`.
pub fn sde_increment(s: f64, dt: f64, beta: f64, dw: f64, scheme: SdeScheme) -> f64 {
    if beta == 0.0 && s <= 0.0 {
        return 0.0;
    }
    let root = s.max(0.0).sqrt();
    match scheme {
        SdeScheme::FullTruncation => {
            let next = s + beta / s.max(FLOOR_GUARD) * dt + root * dw;
            next.max(0.0)
        }
        SdeScheme::DriftImplicit => {
            let c = s + root * dw;
            let disc = c * c + 4.0 * beta * dt;
            if c >= 0.0 {
                0.5 * (c + disc.sqrt())
            } else {
                // Same root, written without cancellation.
                2.0 * beta * dt / (disc.sqrt() - c)
            }
            .max(0.0)
        }
    }
}

fn check(s: f64, dt: f64, beta: f64) -> Result<()> {
    if !(dt > 0.0) || !(beta >= 0.0) || !(s >= 0.0) || !s.is_finite() {
        return domain(format!("sde step needs s >= 0, dt > 0, beta >= 0; got s = {s}, dt = {dt}, beta = {beta}"));
    }
    Ok(())
}

pub fn sde_step_with<R: Rng + ?Sized>(s: f64, dt: f64, beta: f64, scheme: SdeScheme, rng: &mut R) -> Result<f64> {
    check(s, dt, beta)?;
    let xi: f64 = rng.sample(StandardNormal);
    Ok(sde_increment(s, dt, beta, xi * dt.sqrt(), scheme))
}

pub fn sde_step<R: Rng + ?Sized>(s: f64, dt: f64, beta: f64, rng: &mut R) -> Result<f64> {
    sde_step_with(s, dt, beta, SdeScheme::FullTruncation, rng)
}

/// Simulates to `t_max` (rounded down to whole steps), recording every
/// `record_every` steps and at the end.
pub fn simulate_sde<R: Rng + ?Sized>(
    s0: f64,
    beta: f64,
    dt: f64,
    t_max: f64,
    scheme: SdeScheme,
    record_every: u64,
    rng: &mut R,
) -> Result<DiversityPath> {
    check(s0, dt, beta)?;
    if !(t_max >= 0.0) {
        return domain(format!("t_max must be nonnegative, got {t_max}"));
    }
    let steps = (t_max / dt + 1e-9).floor() as u64;
    let record_every = record_every.max(1);
    let sd = dt.sqrt();
    let mut path = DiversityPath { space_exponent: 0.5, time_exponent: 1.5, ..Default::default() };
    let mut s = s0;
    path.push(0, 0.0, s);
    for m in 1..=steps {
        let xi: f64 = rng.sample(StandardNormal);
        s = sde_increment(s, dt, beta, xi * sd, scheme);
        if m % record_every == 0 || m == steps {
            path.push(m, m as f64 * dt, s);
        }
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_absorbing_without_drift() {
        for scheme in [SdeScheme::FullTruncation, SdeScheme::DriftImplicit] {
            assert_eq!(sde_increment(0.0, 1e-3, 0.0, 0.7, scheme), 0.0);
        }
    }

    #[test]
    fn implicit_root_solves_step_equation() {
        for &(s, dw) in &[(0.0, 0.1), (1.0, -3.0), (0.01, -0.5), (4.0, 0.02)] {
            let (dt, beta) = (1e-3, 2.0);
            let next = sde_increment(s, dt, beta, dw, SdeScheme::DriftImplicit);
            assert!(next > 0.0);
            let rhs = s + f64::sqrt(s) * dw + beta * dt / next;
            assert!((next - rhs).abs() <= 1e-12 * next.max(1.0), "{s} {dw}: {next} vs {rhs}");
        }
    }
}
