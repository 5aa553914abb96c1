//! Sequential sampling of exchangeable partitions.
//!
//! [`urn_step`] adds one item: a new block with probability `g0`, otherwise
//! block `j` with probability `g1 (n_j - alpha)`. The existing-block choice is
//! made by picking a uniform item and accepting its block with probability
//! `(n_j - alpha) / n_j`, which is O(1) per step on average.

use crate::diffusion::SimplexPoint;
use crate::error::{domain, Error, Result};
use crate::gibbs::{PDParams, PredictiveWeights, WeightPair};
use rand::Rng;
use rand_distr::{Beta, Distribution};
use std::collections::BTreeMap;

/// A partition of `n` items into blocks carrying stable ids.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionState {
    block_sizes: Vec<usize>,
    block_ids: Vec<u64>,
    /// Block index of every item.
    labels: Vec<usize>,
    /// `multiplicity[j]` = number of blocks of size `j`.
    multiplicity: Vec<usize>,
    next_id: u64,
}

impl PartitionState {
    /// One item in one block.
    pub fn singleton() -> Self {
        Self {
            block_sizes: vec![1],
            block_ids: vec![0],
            labels: vec![0],
            multiplicity: vec![0, 1],
            next_id: 1,
        }
    }

    pub fn from_block_sizes(sizes: &[usize]) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return domain("block sizes must be a nonempty list of positive integers");
        }
        let n: usize = sizes.iter().sum();
        let mut labels = Vec::with_capacity(n);
        let mut multiplicity = vec![0; n + 1];
        for (b, &m) in sizes.iter().enumerate() {
            labels.extend(std::iter::repeat_n(b, m));
            multiplicity[m] += 1;
        }
        Ok(Self {
            block_sizes: sizes.to_vec(),
            block_ids: (0..sizes.len() as u64).collect(),
            labels,
            multiplicity,
            next_id: sizes.len() as u64,
        })
    }

    /// Blocks in order of first appearance, with the type labels as block ids.
    pub fn from_assignments(types: &[u64]) -> Result<Self> {
        if types.is_empty() {
            return domain("assignments must be nonempty");
        }
        let mut index: std::collections::HashMap<u64, usize> = std::collections::HashMap::new();
        let mut block_sizes = Vec::new();
        let mut block_ids = Vec::new();
        let mut labels = Vec::with_capacity(types.len());
        for &t in types {
            let b = *index.entry(t).or_insert_with(|| {
                block_sizes.push(0);
                block_ids.push(t);
                block_sizes.len() - 1
            });
            block_sizes[b] += 1;
            labels.push(b);
        }
        let mut multiplicity = vec![0; types.len() + 1];
        for &m in &block_sizes {
            multiplicity[m] += 1;
        }
        let next_id = block_ids.iter().max().map_or(0, |&m| m + 1);
        Ok(Self { block_sizes, block_ids, labels, multiplicity, next_id })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn block_ids(&self) -> &[u64] {
        &self.block_ids
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// `M_j`: the number of blocks of size `j`.
    pub fn multiplicity(&self, j: usize) -> usize {
        self.multiplicity.get(j).copied().unwrap_or(0)
    }

    pub fn multiplicity_profile(&self) -> BTreeMap<usize, usize> {
        self.multiplicity
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(j, &m)| (j, m))
            .collect()
    }

    /// Block sizes in decreasing order.
    pub fn shape(&self) -> Vec<usize> {
        let mut s = self.block_sizes.clone();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    fn bump_multiplicity(&mut self, from: usize, to: usize) {
        if self.multiplicity.len() <= to {
            self.multiplicity.resize(to + 1, 0);
        }
        if from > 0 {
            self.multiplicity[from] -= 1;
        }
        self.multiplicity[to] += 1;
    }

    pub fn push_new_block(&mut self) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        self.labels.push(self.block_sizes.len());
        self.block_sizes.push(1);
        self.block_ids.push(id);
        self.bump_multiplicity(0, 1);
        id
    }

    pub fn push_to_block(&mut self, b: usize) {
        let m = self.block_sizes[b];
        self.block_sizes[b] = m + 1;
        self.labels.push(b);
        self.bump_multiplicity(m, m + 1);
    }

    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n();
        let sum: usize = self.block_sizes.iter().sum();
        let m_total: usize = self.multiplicity.iter().sum();
        let m_weighted: usize = self.multiplicity.iter().enumerate().map(|(j, &m)| j * m).sum();
        let mut recount = vec![0usize; self.k()];
        for &l in &self.labels {
            recount[l] += 1;
        }
        if sum != n || m_total != self.k() || m_weighted != n || recount != self.block_sizes {
            return Err(Error::Consistency(format!(
                "partition invariants violated: n = {n}, sum = {sum}, K = {}, sum M = {m_total}, sum jM = {m_weighted}",
                self.k()
            )));
        }
        Ok(())
    }
}

/// Adds one item using weights evaluated at `(state.n(), state.k())`.
pub fn urn_step<R: Rng + ?Sized>(
    state: &mut PartitionState,
    weights: &WeightPair,
    alpha: f64,
    rng: &mut R,
) -> Result<()> {
    let (n, k) = (state.n(), state.k());
    let resid = weights.constraint_residual(n, k, alpha);
    if !(resid.abs() <= 1e-9) {
        return Err(Error::Consistency(format!(
            "urn probabilities sum to 1 + {resid:e} at n = {n}, k = {k}"
        )));
    }
    if rng.gen::<f64>() < weights.g0 {
        state.push_new_block();
    } else {
        loop {
            let b = state.labels[rng.gen_range(0..n)];
            let m = state.block_sizes[b] as f64;
            if rng.gen::<f64>() * m < m - alpha {
                state.push_to_block(b);
                break;
            }
        }
    }
    // Full recount at powers of two keeps the amortized cost O(1).
    if cfg!(debug_assertions) && state.n().is_power_of_two() {
        state.check_invariants()?;
    }
    Ok(())
}

/// Runs the urn from one item to `n` items.
pub fn sample_partition<W, R>(n: usize, source: &W, rng: &mut R) -> Result<PartitionState>
where
    W: PredictiveWeights + ?Sized,
    R: Rng + ?Sized,
{
    if n == 0 {
        return domain("sample_partition needs n >= 1");
    }
    let alpha = source.alpha();
    let mut state = PartitionState::singleton();
    while state.n() < n {
        let w = source.weights(state.n(), state.k())?;
        urn_step(&mut state, &w, alpha, rng)?;
    }
    Ok(state)
}

/// Stick-breaking weights with the residual mass left when sampling stopped.
#[derive(Debug, Clone)]
pub struct GemWeights {
    pub weights: Vec<f64>,
    pub residual: f64,
}

impl GemWeights {
    pub fn sorted(&self) -> SimplexPoint {
        SimplexPoint::from_unsorted(self.weights.clone())
    }

    pub fn power_sum(&self, m: i32) -> f64 {
        self.weights.iter().map(|w| w.powi(m)).sum()
    }
}

pub const DEFAULT_GEM_EPSILON: f64 = 1e-4;

/// `W_i ~ Beta(1 - alpha, theta + i alpha)`, `V_i = W_i prod_{j<i} (1 - W_j)`,
/// until the residual mass drops below `epsilon`.
pub fn sample_gem<R: Rng + ?Sized>(params: &PDParams, epsilon: f64, rng: &mut R) -> Result<GemWeights> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return domain(format!("epsilon must lie in (0, 1), got {epsilon}"));
    }
    let (theta, alpha) = (params.theta(), params.alpha());
    let mut weights = Vec::new();
    let mut residual = 1.0;
    let mut i = 1.0;
    while residual >= epsilon {
        let beta = Beta::new(1.0 - alpha, theta + i * alpha)
            .map_err(|e| Error::Domain(format!("stick-breaking Beta: {e}")))?;
        let w = beta.sample(rng);
        weights.push(residual * w);
        residual *= 1.0 - w;
        i += 1.0;
    }
    Ok(GemWeights { weights, residual })
}

/// Relative block frequencies in decreasing order.
pub fn ordered_frequencies(state: &PartitionState) -> SimplexPoint {
    let n = state.n() as f64;
    SimplexPoint::from_unsorted(state.block_sizes.iter().map(|&m| m as f64 / n).collect())
}
