//! The cluster-count chain `K_n(m)` on `{1, ..., n}`:
//!
//! ```text
//! p_up   = (1 - alpha k / n) g0(n-1, k)
//! p_down = (alpha k / n) g1(n-1, k-1) (n - 1 - alpha (k-1))
//! ```
//!
//! with `p_down = 0` at `k = 1` and `p_up = 0` at `k = n`. Paths are recorded
//! as `k / n^alpha` against `t = m / n^(1 + alpha)`.

use super::{ChainState, DiversityPath};
use crate::error::{domain, Error, Result};
use crate::gibbs::{AsymptoticWeights, GGParams, PredictiveWeights, QuadratureWeights};
use rand::Rng;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainMode {
    /// Weights from the integral representation of `V`.
    Exact,
    /// Second-order weights; alpha = 1/2 only.
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionProbs {
    pub p_up: f64,
    pub p_down: f64,
    pub p_stay: f64,
}

fn weights_for(params: &GGParams, mode: ChainMode) -> Result<Box<dyn PredictiveWeights + Send>> {
    Ok(match mode {
        ChainMode::Exact => Box::new(QuadratureWeights(*params)),
        ChainMode::Asymptotic => {
            params.require_nig("asymptotic chain weights")?;
            Box::new(AsymptoticWeights(*params))
        }
    })
}

fn probs_from(state: ChainState, w: &(dyn PredictiveWeights + Send)) -> Result<TransitionProbs> {
    let ChainState { k, n } = state;
    let alpha = w.alpha();
    let (nf, kf) = (n as f64, k as f64);
    let p_up = if k == n { 0.0 } else { (1.0 - alpha * kf / nf) * w.weights(n - 1, k)?.g0 };
    let p_down = if k == 1 {
        0.0
    } else {
        alpha * kf / nf * w.weights(n - 1, k - 1)?.g1 * (nf - 1.0 - alpha * (kf - 1.0))
    };
    let p_stay = 1.0 - p_up - p_down;
    let ok = |p: f64| (0.0..=1.0).contains(&p);
    if !(ok(p_up) && ok(p_down) && p_stay >= -1e-12) {
        return Err(Error::Consistency(format!(
            "chain probabilities out of range at k = {k}, n = {n}: up {p_up}, down {p_down}"
        )));
    }
    Ok(TransitionProbs { p_up, p_down, p_stay: p_stay.max(0.0) })
}

pub fn chain_transition_probs(state: ChainState, params: &GGParams, mode: ChainMode) -> Result<TransitionProbs> {
    let w = weights_for(params, mode)?;
    probs_from(state, w.as_ref())
}

/// Transition probabilities for one `n`, computed on first use per `k`.
pub struct ChainKernel {
    n: usize,
    alpha: f64,
    weights: Box<dyn PredictiveWeights + Send>,
    cache: Vec<OnceLock<TransitionProbs>>,
}

impl ChainKernel {
    pub fn new(n: usize, params: &GGParams, mode: ChainMode) -> Result<Self> {
        ChainState::new(1, n)?;
        Ok(Self {
            n,
            alpha: params.alpha(),
            weights: weights_for(params, mode)?,
            cache: (0..=n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn probs(&self, k: usize) -> Result<TransitionProbs> {
        let state = ChainState::new(k, self.n)?;
        if let Some(p) = self.cache[k].get() {
            return Ok(*p);
        }
        let p = probs_from(state, self.weights.as_ref())?;
        Ok(*self.cache[k].get_or_init(|| p))
    }
}

/// Runs `steps` transitions from `k0`, recording every `record_every` steps
/// and at the end.
pub fn simulate_chain_with<R: Rng + ?Sized>(
    kernel: &ChainKernel,
    steps: u64,
    k0: usize,
    record_every: u64,
    rng: &mut R,
) -> Result<DiversityPath> {
    let n = kernel.n;
    if k0 == 0 || k0 > n {
        return domain(format!("k0 must lie in [1, {n}], got {k0}"));
    }
    let record_every = record_every.max(1);
    let nf = n as f64;
    let space = nf.powf(kernel.alpha);
    let time = nf.powf(1.0 + kernel.alpha);
    let mut path = DiversityPath { space_exponent: kernel.alpha, time_exponent: 1.0 + kernel.alpha, ..Default::default() };
    let mut k = k0;
    path.push(0, 0.0, k as f64 / space);
    for m in 1..=steps {
        let p = kernel.probs(k)?;
        let u: f64 = rng.gen();
        if u < p.p_up {
            k += 1;
        } else if u < p.p_up + p.p_down {
            k -= 1;
        }
        if m % record_every == 0 || m == steps {
            path.push(m, m as f64 / time, k as f64 / space);
        }
    }
    Ok(path)
}

pub fn simulate_chain<R: Rng + ?Sized>(
    n: usize,
    steps: u64,
    k0: usize,
    params: &GGParams,
    mode: ChainMode,
    record_every: u64,
    rng: &mut R,
) -> Result<DiversityPath> {
    let kernel = ChainKernel::new(n, params, mode)?;
    simulate_chain_with(&kernel, steps, k0, record_every, rng)
}

/// One-step moments of the increment of `k / n^alpha`, with the diffusion
/// predictions `(beta / s_n) / n^(1+alpha)` and `2 alpha s_n / n^(1+alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementMoments {
    pub mean: f64,
    pub second_moment: f64,
    pub predicted_mean: f64,
    pub predicted_second_moment: f64,
}

pub fn chain_increment_moments(state: ChainState, params: &GGParams, mode: ChainMode) -> Result<IncrementMoments> {
    let p = chain_transition_probs(state, params, mode)?;
    let alpha = params.alpha();
    let nf = state.n as f64;
    let step = nf.powf(-alpha);
    let s_n = state.k as f64 * step;
    let time = nf.powf(1.0 + alpha);
    Ok(IncrementMoments {
        mean: (p.p_up - p.p_down) * step,
        second_moment: (p.p_up + p.p_down) * step * step,
        predicted_mean: params.beta() / s_n / time,
        predicted_second_moment: 2.0 * alpha * s_n / time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barriers() {
        let p = GGParams::from_beta(2.0, 0.5).unwrap();
        for mode in [ChainMode::Exact, ChainMode::Asymptotic] {
            let lo = chain_transition_probs(ChainState::new(1, 50).unwrap(), &p, mode).unwrap();
            assert_eq!(lo.p_down, 0.0);
            let hi = chain_transition_probs(ChainState::new(50, 50).unwrap(), &p, mode).unwrap();
            assert_eq!(hi.p_up, 0.0);
        }
    }

    #[test]
    fn lower_barrier_mean() {
        let p = GGParams::from_beta(2.0, 0.5).unwrap();
        let s = ChainState::new(1, 100).unwrap();
        let m = chain_increment_moments(s, &p, ChainMode::Exact).unwrap();
        let t = chain_transition_probs(s, &p, ChainMode::Exact).unwrap();
        assert!((m.mean - t.p_up / 10.0).abs() <= 1e-16 * t.p_up);
    }
}
