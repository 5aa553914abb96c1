//! Euler-Maruyama simulation of the finite-dimensional generator
//!
//! ```text
//! A_n f = (1/2) s f_ss + (beta / s) f_s + (1/2) sum_ij a_ij f_ij + (1/2) sum_i b_i f_i
//! a_ij  = (z_i - eps)(delta_ij (1 - n eps) - (z_j - eps))
//! b_i   = beta (1 - z_i) / (s (n - 1)) - beta z_i / s - alpha (1 - exp(-(z_i - eps) e^(1/eps)))
//! ```
//!
//! on `(s, z_1..z_n)` with `z_i >= eps` and `sum z_i = 1`.

use super::sde::{sde_increment, SdeScheme};
use super::SimplexPoint;
use crate::error::{domain, Error, Result};
use crate::gibbs::GGParams;
use rand::Rng;
use rand_distr::StandardNormal;

/// `eps_n = n^-2`.
pub fn default_eps(n: usize) -> f64 {
    let nf = n as f64;
    1.0 / (nf * nf)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDimState {
    pub s: f64,
    pub z: Vec<f64>,
    pub eps: f64,
}

impl FiniteDimState {
    pub fn new(s: f64, z: Vec<f64>, eps: f64) -> Result<Self> {
        let n = z.len();
        if n < 2 {
            return domain("finite-dimensional state needs n >= 2");
        }
        if !(eps > 0.0) || !(eps * (n as f64) < 1.0) {
            return domain(format!("eps must lie in (0, 1/n), got {eps} for n = {n}"));
        }
        if !(s >= 0.0) || !s.is_finite() {
            return domain(format!("s must be nonnegative, got {s}"));
        }
        if z.iter().any(|&zi| !(zi >= eps)) {
            return domain("every z_i must be >= eps");
        }
        let total: f64 = z.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return domain(format!("z must sum to 1, got {total}"));
        }
        Ok(Self { s, z, eps })
    }

    /// `z = (1/n, ..., 1/n)` with `eps = n^-2`.
    pub fn symmetric(s: f64, n: usize) -> Result<Self> {
        Self::new(s, vec![1.0 / n as f64; n], default_eps(n))
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }
}

/// `a_ij`.
pub fn finite_dim_covariance(z: &[f64], eps: f64, i: usize, j: usize) -> f64 {
    let c = 1.0 - z.len() as f64 * eps;
    let delta = if i == j { c } else { 0.0 };
    (z[i] - eps) * (delta - (z[j] - eps))
}

/// `(1 - exp(-(z - eps) e^(1/eps)))`, evaluated through logs.
fn occupancy(zi: f64, eps: f64) -> f64 {
    let excess = zi - eps;
    if excess <= 0.0 {
        return 0.0;
    }
    let rate = (excess.ln() + 1.0 / eps).exp();
    -(-rate).exp_m1()
}

/// The vector `b` of the generator; the SDE drift of `z` is `b / 2`.
pub fn finite_dim_drift(state: &FiniteDimState, params: &GGParams) -> Vec<f64> {
    let n = state.n() as f64;
    let theta = if params.beta() == 0.0 { 0.0 } else { params.beta() / state.s };
    let alpha = params.alpha();
    state
        .z
        .iter()
        .map(|&zi| theta * (1.0 - zi) / (n - 1.0) - theta * zi - alpha * occupancy(zi, state.eps))
        .collect()
}

/// One Euler-Maruyama step of length `dt`, followed by clipping at `eps`
/// and renormalization.
///
/// The `s` component uses the drift-implicit step, which keeps `s > 0` when
/// `beta > 0`. The `z` noise is drawn as `c (sqrt(p) xi - p <sqrt(p), xi>)`
/// with `c = 1 - n eps` and `p = (z - eps) / c`, an exact square root of `a`.
pub fn finite_dim_step<R: Rng + ?Sized>(
    state: &FiniteDimState,
    params: &GGParams,
    dt: f64,
    rng: &mut R,
) -> Result<FiniteDimState> {
    params.require_nig("finite-dimensional diffusion")?;
    if !(dt > 0.0) {
        return domain(format!("dt must be positive, got {dt}"));
    }
    let n = state.n();
    let eps = state.eps;
    let sd = dt.sqrt();
    let b = finite_dim_drift(state, params);

    let ds: f64 = rng.sample(StandardNormal);
    let s = sde_increment(state.s, dt, params.beta(), ds * sd, SdeScheme::DriftImplicit);
    if params.beta() > 0.0 && !(s > 0.0) {
        return Err(Error::Numerical(format!("s left (0, inf): {s} from {}", state.s)));
    }

    let mass: f64 = state.z.iter().map(|&zi| zi - eps).sum();
    let c = 1.0 - n as f64 * eps;
    let xi: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let p: Vec<f64> = state.z.iter().map(|&zi| (zi - eps) / mass).collect();
    let dot: f64 = p.iter().zip(&xi).map(|(pi, x)| pi.sqrt() * x).sum();

    let mut z: Vec<f64> = state
        .z
        .iter()
        .zip(&b)
        .zip(p.iter().zip(&xi))
        .map(|((&zi, &bi), (&pi, &x))| {
            let noise = c * (pi.sqrt() * x - pi * dot);
            (zi + 0.5 * bi * dt + noise * sd).max(eps)
        })
        .collect();
    let excess: f64 = z.iter().map(|&zi| zi - eps).sum();
    if !(excess > 0.0) || !excess.is_finite() {
        return Err(Error::Numerical(format!(
            "renormalization failed: excess mass {excess}; state s = {}, z = {:?}",
            state.s, state.z
        )));
    }
    let scale = c / excess;
    for zi in &mut z {
        *zi = eps + (*zi - eps) * scale;
    }
    Ok(FiniteDimState { s, z, eps })
}

/// `(s, z_(1) >= z_(2) >= ...)`.
pub fn project_ordered(state: &FiniteDimState) -> (f64, SimplexPoint) {
    (state.s, SimplexPoint::from_unsorted(state.z.clone()))
}
