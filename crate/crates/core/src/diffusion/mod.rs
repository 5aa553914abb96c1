//! The cluster-count chain, its diffusion limit
//!
//! ```text
//! dS = (beta / S) dt + sqrt(S) dB
//! ```
//!
//! boundary analytics for that diffusion, the finite-dimensional generator
//! `A_n` on `(s, z_1..z_n)`, and generator actions on power sums.
//!
//! The diffusion code fixes alpha = 1/2, where the limiting variance
//! coefficient `2 alpha s` equals the `s` of the SDE.

mod boundary;
mod chain;
mod finite_dim;
mod generator;
mod sde;

pub use boundary::{
    c2_partial_integral, certify_log_growth, scale_density, scale_function, speed_density, speed_measure,
    stationary_density_candidate, LogGrowthCertificate,
};
pub use chain::{
    chain_increment_moments, chain_transition_probs, simulate_chain, simulate_chain_with, ChainKernel, ChainMode,
    IncrementMoments, TransitionProbs,
};
pub use finite_dim::{
    default_eps, finite_dim_covariance, finite_dim_drift, finite_dim_step, project_ordered, FiniteDimState,
};
pub use generator::{generator_action_power_sum, generator_power_sum_coefficients};
pub use sde::{sde_increment, sde_step, sde_step_with, simulate_sde, SdeScheme, FLOOR_GUARD};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainState {
    pub k: usize,
    pub n: usize,
}

impl ChainState {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if n < 2 || k == 0 || k > n {
            return domain(format!("chain state needs n >= 2 and 1 <= k <= n, got k = {k}, n = {n}"));
        }
        Ok(Self { k, n })
    }
}

/// A time-indexed path of a rescaled process.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiversityPath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Event or step index of each record.
    pub steps: Vec<u64>,
    pub space_exponent: f64,
    pub time_exponent: f64,
}

impl DiversityPath {
    pub fn push(&mut self, step: u64, time: f64, value: f64) {
        self.steps.push(step);
        self.times.push(time);
        self.values.push(value);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A point of the ordered simplex, truncated to its nonzero coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    coords: Vec<f64>,
}

impl SimplexPoint {
    pub fn from_unsorted(mut coords: Vec<f64>) -> Self {
        coords.sort_unstable_by(|a, b| b.total_cmp(a));
        Self { coords }
    }

    /// Checks nonnegativity, ordering and `sum <= 1`.
    pub fn from_sorted(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|&c| !(c >= 0.0)) {
            return domain("simplex coordinates must be nonnegative");
        }
        if coords.windows(2).any(|w| w[0] < w[1]) {
            return domain("simplex coordinates must be sorted decreasingly");
        }
        let total: f64 = coords.iter().sum();
        if total > 1.0 + 1e-12 {
            return domain(format!("simplex coordinates sum to {total} > 1"));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn truncation_len(&self) -> usize {
        self.coords.len()
    }

    /// The first `len` coordinates, zero-padded.
    pub fn padded(&self, len: usize) -> Vec<f64> {
        let mut out: Vec<f64> = self.coords.iter().copied().take(len).collect();
        out.resize(len, 0.0);
        out
    }

    /// `phi_m = sum_i z_i^m`.
    pub fn power_sum(&self, m: i32) -> f64 {
        self.coords.iter().map(|z| z.powi(m)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_checks() {
        assert!(SimplexPoint::from_sorted(vec![0.5, 0.6]).is_err());
        assert!(SimplexPoint::from_sorted(vec![0.7, 0.6]).is_err());
        let p = SimplexPoint::from_unsorted(vec![0.2, 0.5, 0.3]);
        assert_eq!(p.coords(), &[0.5, 0.3, 0.2]);
        assert_eq!(p.padded(5), vec![0.5, 0.3, 0.2, 0.0, 0.0]);
        assert!((p.power_sum(2) - 0.38).abs() < 1e-15);
    }
}
