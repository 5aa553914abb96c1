//! Gibbs-type predictive weights for generalized-gamma random measures.
//!
//! A Gibbs-type partition of `n` items into blocks of sizes `n_1..n_k` has
//! probability `V(n, k) prod_j (1 - alpha)_(n_j - 1)`, and the predictive rule
//! puts mass
//!
//! ```text
//! g0(n, k) = V(n+1, k+1) / V(n, k)                on a new block
//! g1(n, k) (n_j - alpha),  g1 = V(n+1, k) / V(n, k)  on block j
//! ```
//!
//! with `g0 + (n - alpha k) g1 = 1`. Three routes evaluate the weights for the
//! generalized-gamma family: closed-form alternating sums ([`weights_gg_exact`],
//! alpha = 1/2 only), a one-dimensional integral ([`weights_gg_quadrature`]) and
//! second-order asymptotics ([`weights_gg_asymptotic`]).

mod eppf;
mod exact;
mod quadrature;
mod singletons;
mod table;

pub use eppf::{eppf, ln_eppf};
pub use exact::{ln_v_exact, weights_gg_exact, weights_gg_exact_with, ExactConfig};
pub use quadrature::{decomposition_w, ln_v_quadrature, weights_gg_quadrature};
pub use singletons::{m1_factorial_moment, m1_pmf, m1_pmf_with, M1Config};
pub use table::VTable;

use crate::error::{domain, Error, Result};
use statrs::function::gamma::ln_gamma;

/// Generalized-gamma parameters. `beta = a tau^alpha / alpha` is always
/// recomputed from the three stored fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GGParams {
    a: f64,
    tau: f64,
    alpha: f64,
}

impl GGParams {
    /// `a = 0` gives the normalized stable process (`beta = 0`).
    pub fn new(a: f64, tau: f64, alpha: f64) -> Result<Self> {
        if !(a >= 0.0 && a.is_finite()) {
            return domain(format!("a must be finite and nonnegative, got {a}"));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return domain(format!("tau must be positive, got {tau}"));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return domain(format!("alpha must lie in (0, 1), got {alpha}"));
        }
        Ok(Self { a, tau, alpha })
    }

    /// Parameters with `tau = 1` and the given `beta`.
    pub fn from_beta(beta: f64, alpha: f64) -> Result<Self> {
        Self::new(beta * alpha, 1.0, alpha)
    }

    pub fn nig(a: f64, tau: f64) -> Result<Self> {
        Self::new(a, tau, 0.5)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.a * self.tau.powf(self.alpha) / self.alpha
    }

    pub fn is_nig(&self) -> bool {
        self.alpha == 0.5
    }

    pub(crate) fn require_nig(&self, what: &str) -> Result<()> {
        if self.is_nig() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{what} requires alpha = 1/2, got {}", self.alpha)))
        }
    }
}

/// Two-parameter (Pitman-Yor) parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PDParams {
    theta: f64,
    alpha: f64,
}

impl PDParams {
    pub fn new(theta: f64, alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return domain(format!("alpha must lie in [0, 1), got {alpha}"));
        }
        if !(theta > -alpha) || !theta.is_finite() {
            return domain(format!("theta must exceed -alpha, got theta = {theta}, alpha = {alpha}"));
        }
        Ok(Self { theta, alpha })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightPair {
    pub g0: f64,
    pub g1: f64,
    /// log10 of the cancellation in the evaluating sums; 0 for routes without
    /// alternating sums.
    pub condition_estimate: f64,
}

impl WeightPair {
    /// `g0 + (n - alpha k) g1 - 1`.
    pub fn constraint_residual(&self, n: usize, k: usize, alpha: f64) -> f64 {
        self.g0 + (n as f64 - alpha * k as f64) * self.g1 - 1.0
    }
}

/// A source of predictive weights at `(n, k)`.
pub trait PredictiveWeights: Sync {
    fn alpha(&self) -> f64;
    fn weights(&self, n: usize, k: usize) -> Result<WeightPair>;
}

pub(crate) fn check_nk(n: usize, k: usize) -> Result<()> {
    if n == 0 || k == 0 || k > n {
        return domain(format!("need 1 <= k <= n, got n = {n}, k = {k}"));
    }
    Ok(())
}

pub fn weights_pd(n: usize, k: usize, params: &PDParams) -> Result<WeightPair> {
    check_nk(n, k)?;
    let denom = params.theta + n as f64;
    Ok(WeightPair {
        g0: (params.theta + params.alpha * k as f64) / denom,
        g1: 1.0 / denom,
        condition_estimate: 0.0,
    })
}

impl PredictiveWeights for PDParams {
    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn weights(&self, n: usize, k: usize) -> Result<WeightPair> {
        weights_pd(n, k, self)
    }
}

/// `ln V(n, k)` of the normalized stable process (`beta = 0`).
pub(crate) fn ln_v_stable(n: usize, k: usize, alpha: f64) -> f64 {
    (k as f64 - 1.0) * alpha.ln() + ln_gamma(k as f64) - ln_gamma(n as f64)
}

pub(crate) fn weights_stable(n: usize, k: usize, alpha: f64) -> WeightPair {
    WeightPair {
        g0: alpha * k as f64 / n as f64,
        g1: 1.0 / n as f64,
        condition_estimate: 0.0,
    }
}

/// `ln V(n, k)`: closed form at `beta = 0`, the exact route at alpha = 1/2 for
/// `n <= 60`, quadrature otherwise.
pub fn ln_v(n: usize, k: usize, params: &GGParams) -> Result<f64> {
    check_nk(n, k)?;
    if params.beta() == 0.0 {
        return Ok(ln_v_stable(n, k, params.alpha));
    }
    if params.is_nig() && n <= 60 {
        return ln_v_exact(n, k, params);
    }
    ln_v_quadrature(n, k, params)
}

/// Second-order weights at alpha = 1/2:
///
/// ```text
/// g0 = alpha k / n + (beta / s_n) / n,  g1 = 1/n - (beta / s_n) / n^2,  s_n = k / n^alpha
/// ```
pub fn weights_gg_asymptotic(n: usize, k: usize, params: &GGParams) -> Result<WeightPair> {
    check_nk(n, k)?;
    params.require_nig("asymptotic weights")?;
    let nf = n as f64;
    let s_n = k as f64 / nf.powf(params.alpha);
    let corr = params.beta() / s_n;
    Ok(WeightPair {
        g0: params.alpha * k as f64 / nf + corr / nf,
        g1: 1.0 / nf - corr / (nf * nf),
        condition_estimate: 0.0,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct AsymptoticWeights(pub GGParams);

impl PredictiveWeights for AsymptoticWeights {
    fn alpha(&self) -> f64 {
        self.0.alpha
    }

    fn weights(&self, n: usize, k: usize) -> Result<WeightPair> {
        weights_gg_asymptotic(n, k, &self.0)
    }
}

/// Weights from the integral representation, evaluated on demand.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureWeights(pub GGParams);

impl PredictiveWeights for QuadratureWeights {
    fn alpha(&self) -> f64 {
        self.0.alpha
    }

    fn weights(&self, n: usize, k: usize) -> Result<WeightPair> {
        weights_gg_quadrature(n, k, &self.0)
    }
}
