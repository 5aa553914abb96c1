//! Moran-type particle system.
//!
//! Each event removes a uniformly chosen particle and reinserts it by the
//! predictive rule of the remaining `n - 1`: a fresh type with probability
//! `g0(n-1, k)`, otherwise a copy of type `j` with probability
//! `g1(n-1, k) (n_j - alpha)`. The conditioned variant keeps the number of
//! types fixed: a removed singleton is always replaced by a fresh type and any
//! other removal by a copy chosen proportionally to `n_j - alpha`.
//!
//! Types live in slots; a slot is recycled once its type dies out, while type
//! ids keep increasing.

use crate::diffusion::{DiversityPath, SimplexPoint};
use crate::error::{domain, Error, Result};
use crate::gibbs::{ln_v_quadrature, GGParams, PredictiveWeights};
use crate::urn::PartitionState;
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use std::sync::OnceLock;

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSystem {
    slot: Vec<usize>,
    sizes: Vec<usize>,
    ids: Vec<u64>,
    free: Vec<usize>,
    k: usize,
    next_fresh_id: u64,
    sum_sq: u64,
}

impl ParticleSystem {
    pub fn from_partition(state: &PartitionState) -> Result<Self> {
        if state.n() < 2 {
            return domain("particle system needs n >= 2");
        }
        let slot = state.labels().to_vec();
        let sizes = state.block_sizes().to_vec();
        let ids = state.block_ids().to_vec();
        let next_fresh_id = ids.iter().max().map_or(0, |&m| m + 1);
        let sum_sq = sizes.iter().map(|&m| (m * m) as u64).sum();
        Ok(Self { slot, sizes, ids, free: Vec::new(), k: state.k(), next_fresh_id, sum_sq })
    }

    /// Particles with the given type labels.
    pub fn from_assignments(types: &[u64]) -> Result<Self> {
        Self::from_partition(&PartitionState::from_assignments(types)?)
    }

    pub fn n(&self) -> usize {
        self.slot.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn next_fresh_id(&self) -> u64 {
        self.next_fresh_id
    }

    /// Type id of every particle.
    pub fn assignments(&self) -> Vec<u64> {
        self.slot.iter().map(|&s| self.ids[s]).collect()
    }

    /// Sizes of the live types, in slot order.
    pub fn type_sizes(&self) -> Vec<usize> {
        self.sizes.iter().copied().filter(|&m| m > 0).collect()
    }

    pub fn singletons(&self) -> usize {
        self.sizes.iter().filter(|&&m| m == 1).count()
    }

    /// `phi_2 = sum_j (n_j / n)^2`.
    pub fn phi2(&self) -> f64 {
        let n = self.n() as f64;
        self.sum_sq as f64 / (n * n)
    }

    /// `K / n^alpha`.
    pub fn diversity(&self, alpha: f64) -> f64 {
        self.k as f64 / (self.n() as f64).powf(alpha)
    }

    pub fn ordered_frequencies(&self) -> SimplexPoint {
        let n = self.n() as f64;
        SimplexPoint::from_unsorted(self.type_sizes().into_iter().map(|m| m as f64 / n).collect())
    }

    /// Partition recounted from the assignments.
    pub fn partition(&self) -> PartitionState {
        PartitionState::from_assignments(&self.assignments()).expect("n >= 2")
    }

    /// Compares the maintained counts with a recount of the assignments.
    pub fn check_consistency(&self) -> Result<()> {
        let mut recount = vec![0usize; self.sizes.len()];
        for &s in &self.slot {
            recount[s] += 1;
        }
        let live = recount.iter().filter(|&&m| m > 0).count();
        let sum_sq: u64 = recount.iter().map(|&m| (m * m) as u64).sum();
        let free_ok = self.free.iter().all(|&s| recount[s] == 0);
        let ids_ok = self.ids.iter().all(|&id| id < self.next_fresh_id);
        let partition = self.partition();
        partition.check_invariants()?;
        let mut derived: Vec<(u64, usize)> =
            partition.block_ids().iter().copied().zip(partition.block_sizes().iter().copied()).collect();
        let mut held: Vec<(u64, usize)> =
            self.ids.iter().copied().zip(self.sizes.iter().copied()).filter(|&(_, m)| m > 0).collect();
        derived.sort_unstable();
        held.sort_unstable();
        if recount != self.sizes || live != self.k || sum_sq != self.sum_sq || !free_ok || !ids_ok || derived != held {
            return Err(Error::Consistency(format!(
                "particle system out of sync: K = {} (recount {live}), sum of squares {} (recount {sum_sq})",
                self.k, self.sum_sq
            )));
        }
        Ok(())
    }

    fn remove(&mut self, i: usize) -> (usize, bool) {
        let s = self.slot[i];
        let m = self.sizes[s];
        self.sizes[s] = m - 1;
        self.sum_sq -= (2 * m - 1) as u64;
        let singleton = m == 1;
        if singleton {
            self.k -= 1;
            self.free.push(s);
        }
        (s, singleton)
    }

    fn insert_fresh(&mut self, i: usize) -> u64 {
        let id = self.next_fresh_id;
        self.next_fresh_id += 1;
        let s = match self.free.pop() {
            Some(s) => {
                self.ids[s] = id;
                self.sizes[s] = 1;
                s
            }
            None => {
                self.ids.push(id);
                self.sizes.push(1);
                self.sizes.len() - 1
            }
        };
        self.slot[i] = s;
        self.k += 1;
        self.sum_sq += 1;
        id
    }

    /// Copies a type of the particles other than `i`, chosen with probability
    /// proportional to `n_j - alpha`: a uniform other particle is proposed and
    /// its type accepted with probability `(n_j - alpha) / n_j`.
    fn insert_copy<R: Rng + ?Sized>(&mut self, i: usize, alpha: f64, rng: &mut R) -> u64 {
        let n = self.n();
        let s = loop {
            let mut r = rng.gen_range(0..n - 1);
            if r >= i {
                r += 1;
            }
            let s = self.slot[r];
            let m = self.sizes[s] as f64;
            if rng.gen::<f64>() * m < m - alpha {
                break s;
            }
        };
        let m = self.sizes[s];
        self.sizes[s] = m + 1;
        self.sum_sq += (2 * m + 1) as u64;
        self.slot[i] = s;
        self.ids[s]
    }
}

enum KernelSource {
    /// `ln V(n, k)` for `k = 1..=n`, filled on demand.
    Row { params: GGParams, ln_v: Vec<OnceLock<f64>> },
    Weights(Box<dyn PredictiveWeights + Send>),
}

/// Fresh-type probabilities `g0(n - 1, k)` for one `n`, computed on first use.
pub struct MoranKernel {
    n: usize,
    alpha: f64,
    source: KernelSource,
    g0: Vec<OnceLock<f64>>,
}

impl MoranKernel {
    /// Gibbs weights from the `V(n, .)` row alone, using
    /// `V(n-1, k) = (n-1-alpha k) V(n, k) + V(n, k+1)`; the urn probabilities
    /// then sum to 1 to rounding.
    pub fn new(n: usize, params: &GGParams) -> Result<Self> {
        Self::check_n(n)?;
        Ok(Self {
            n,
            alpha: params.alpha(),
            source: KernelSource::Row { params: *params, ln_v: (0..=n).map(|_| OnceLock::new()).collect() },
            g0: (0..n).map(|_| OnceLock::new()).collect(),
        })
    }

    /// Any weight source; normalization is checked to 1e-9 on use.
    pub fn from_weights(n: usize, weights: Box<dyn PredictiveWeights + Send>) -> Result<Self> {
        Self::check_n(n)?;
        Ok(Self {
            n,
            alpha: weights.alpha(),
            source: KernelSource::Weights(weights),
            g0: (0..n).map(|_| OnceLock::new()).collect(),
        })
    }

    fn check_n(n: usize) -> Result<()> {
        if n < 2 {
            return domain(format!("Moran kernel needs n >= 2, got {n}"));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `g0(n - 1, k)` for `1 <= k <= n - 1`.
    pub fn g0(&self, k: usize) -> Result<f64> {
        if k == 0 || k >= self.n {
            return domain(format!("k must lie in [1, {}], got {k}", self.n - 1));
        }
        if let Some(&g) = self.g0[k].get() {
            return Ok(g);
        }
        let g = self.compute_g0(k)?;
        Ok(*self.g0[k].get_or_init(|| g))
    }

    fn compute_g0(&self, k: usize) -> Result<f64> {
        let m = self.n - 1;
        match &self.source {
            KernelSource::Row { params, ln_v } => {
                let entry = |j: usize| -> Result<f64> {
                    if let Some(&v) = ln_v[j].get() {
                        return Ok(v);
                    }
                    let v = ln_v_quadrature(self.n, j, params)?;
                    Ok(*ln_v[j].get_or_init(|| v))
                };
                let stay = (m as f64 - self.alpha * k as f64).ln() + entry(k)? - entry(k + 1)?;
                Ok(1.0 / (1.0 + stay.exp()))
            }
            KernelSource::Weights(w) => {
                let pair = w.weights(m, k)?;
                let resid = pair.constraint_residual(m, k, self.alpha);
                if !(resid.abs() <= 1e-9) {
                    return Err(Error::Consistency(format!(
                        "Moran probabilities sum to 1 + {resid:e} at n - 1 = {m}, k = {k}"
                    )));
                }
                Ok(pair.g0)
            }
        }
    }
}

/// What happened in one event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoranEvent {
    pub removed: usize,
    pub removed_singleton: bool,
    pub fresh: bool,
    /// Type id given to the reinserted particle.
    pub new_type: u64,
    pub k_before: usize,
    pub k_after: usize,
    /// Fresh-type probability used for this event.
    pub g0: f64,
}

pub fn moran_step<R: Rng + ?Sized>(sys: &mut ParticleSystem, kernel: &MoranKernel, rng: &mut R) -> Result<MoranEvent> {
    let n = sys.n();
    if kernel.n != n {
        return domain(format!("kernel built for n = {}, system has n = {n}", kernel.n));
    }
    let k_before = sys.k;
    let i = rng.gen_range(0..n);
    let (_, removed_singleton) = sys.remove(i);
    let g0 = kernel.g0(sys.k)?;
    let fresh = rng.gen::<f64>() < g0;
    let new_type = if fresh { sys.insert_fresh(i) } else { sys.insert_copy(i, kernel.alpha, rng) };
    Ok(MoranEvent { removed: i, removed_singleton, fresh, new_type, k_before, k_after: sys.k, g0 })
}

/// One event of the dynamics conditioned on a constant number of types.
///
/// At `k = 1` no singleton exists and at `k = n` every particle is one, so
/// neither boundary needs special handling.
pub fn conditioned_step<R: Rng + ?Sized>(sys: &mut ParticleSystem, alpha: f64, rng: &mut R) -> Result<MoranEvent> {
    let n = sys.n();
    let k_before = sys.k;
    let i = rng.gen_range(0..n);
    let (_, removed_singleton) = sys.remove(i);
    let new_type = if removed_singleton { sys.insert_fresh(i) } else { sys.insert_copy(i, alpha, rng) };
    if sys.k != k_before {
        return Err(Error::Consistency(format!("conditioned step changed K from {k_before} to {}", sys.k)));
    }
    Ok(MoranEvent {
        removed: i,
        removed_singleton,
        fresh: removed_singleton,
        new_type,
        k_before,
        k_after: sys.k,
        g0: f64::NAN,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClockMode {
    /// Event `m` happens at time `m`.
    #[default]
    Discrete,
    /// Events at the jumps of a unit-rate Poisson process.
    Exponential,
}

/// Observables of [`simulate_rescaled`] on a grid of rescaled times `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct RescaledPath {
    /// `K / sqrt(n)` at event time `n^(3/2) t`.
    pub diversity: DiversityPath,
    pub frequency_times: Vec<f64>,
    /// `K / sqrt(n)` at event time `n^2 t / 2`.
    pub frequency_diversity: Vec<f64>,
    /// Ordered frequencies at event time `n^2 t / 2`, truncated.
    pub frequencies: Vec<SimplexPoint>,
    pub events: u64,
}

/// Runs the Moran dynamics once and reads the two rescaled observables off
/// the same event stream. `grid` must be nondecreasing and nonnegative.
pub fn simulate_rescaled<R: Rng + ?Sized>(
    sys0: &ParticleSystem,
    kernel: &MoranKernel,
    grid: &[f64],
    clock: ClockMode,
    truncation: usize,
    rng: &mut R,
) -> Result<RescaledPath> {
    if grid.iter().any(|&t| !(t >= 0.0) || !t.is_finite()) || grid.windows(2).any(|w| w[1] < w[0]) {
        return domain("time grid must be finite, nonnegative and nondecreasing");
    }
    let n = sys0.n() as f64;
    let alpha = kernel.alpha;
    let k_scale = n.powf(1.0 + alpha);
    let f_scale = 0.5 * n * n;
    // Merge the two sets of real-time targets.
    let mut targets: Vec<(f64, bool, usize)> = Vec::with_capacity(2 * grid.len());
    for (g, &t) in grid.iter().enumerate() {
        targets.push((k_scale * t, true, g));
        targets.push((f_scale * t, false, g));
    }
    targets.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut sys = sys0.clone();
    let mut diversity = DiversityPath { space_exponent: alpha, time_exponent: 1.0 + alpha, ..Default::default() };
    let mut frequency_diversity = vec![0.0; grid.len()];
    let mut frequencies = vec![SimplexPoint::from_unsorted(Vec::new()); grid.len()];
    let mut k_records = vec![(0u64, 0.0); grid.len()];
    let mut events = 0u64;
    let mut next_event = match clock {
        ClockMode::Discrete => 1.0,
        ClockMode::Exponential => Exp1.sample(rng),
    };
    for (target, is_k, g) in targets {
        while next_event <= target {
            moran_step(&mut sys, kernel, rng)?;
            events += 1;
            next_event += match clock {
                ClockMode::Discrete => 1.0,
                ClockMode::Exponential => Exp1.sample(rng),
            };
        }
        if is_k {
            k_records[g] = (events, sys.diversity(alpha));
        } else {
            frequency_diversity[g] = sys.diversity(alpha);
            let full = sys.ordered_frequencies();
            let mut coords = full.coords().to_vec();
            coords.truncate(truncation);
            frequencies[g] = SimplexPoint::from_unsorted(coords);
        }
    }
    for (g, &t) in grid.iter().enumerate() {
        diversity.push(k_records[g].0, t, k_records[g].1);
    }
    Ok(RescaledPath { diversity, frequency_times: grid.to_vec(), frequency_diversity, frequencies, events })
}
