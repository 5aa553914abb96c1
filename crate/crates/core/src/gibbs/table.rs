//! Table of `ln V(n, k)` for sequential sampling at large `n`.
//!
//! The top row is computed by quadrature; lower rows follow from
//! `V(n, k) = (n - alpha k) V(n+1, k) + V(n+1, k+1)`, whose terms are positive,
//! so the backward sweep loses no accuracy. Row `n` stores `k <= cap(n)` with
//! `cap(n) = min(n, 8 sqrt(n) + 16)`; entries outside fall back to quadrature.

use super::{check_nk, ln_v_quadrature, ln_v_stable, GGParams, PredictiveWeights, WeightPair};
use crate::error::Result;
use crate::specfun::log_add_exp;
use rayon::prelude::*;

pub struct VTable {
    params: GGParams,
    rows: Vec<Vec<f64>>,
}

fn cap(n: usize) -> usize {
    n.min((8.0 * (n as f64).sqrt()).ceil() as usize + 16)
}

impl VTable {
    /// Table serving weights at every `n <= n_max`.
    pub fn new(params: GGParams, n_max: usize) -> Result<Self> {
        if params.beta() == 0.0 {
            return Ok(Self { params, rows: Vec::new() });
        }
        let top = n_max + 1;
        let alpha = params.alpha();
        let top_row: Vec<f64> = (1..=cap(top))
            .into_par_iter()
            .map(|k| ln_v_quadrature(top, k, &params))
            .collect::<Result<_>>()?;
        // entries (n + 1, cap(n) + 1) missing from row n + 1
        let edges: Vec<(usize, f64)> = (1..top)
            .into_par_iter()
            .filter(|&n| cap(n) + 1 > cap(n + 1))
            .map(|n| ln_v_quadrature(n + 1, cap(n) + 1, &params).map(|v| (n, v)))
            .collect::<Result<_>>()?;
        let mut edge_iter = edges.into_iter().rev().peekable();
        let mut rows = vec![Vec::new(); top + 1];
        rows[top] = top_row;
        for n in (1..top).rev() {
            let edge = match edge_iter.peek() {
                Some(&(m, v)) if m == n => {
                    edge_iter.next();
                    Some(v)
                }
                _ => None,
            };
            let above = &rows[n + 1];
            let row: Vec<f64> = (1..=cap(n))
                .map(|k| {
                    let stay = (n as f64 - alpha * k as f64).ln() + above[k - 1];
                    let new = if k < above.len() { above[k] } else { edge.expect("edge entry") };
                    log_add_exp(stay, new)
                })
                .collect();
            rows[n] = row;
        }
        Ok(Self { params, rows })
    }

    pub fn params(&self) -> &GGParams {
        &self.params
    }

    pub fn ln_v(&self, n: usize, k: usize) -> Result<f64> {
        check_nk(n, k)?;
        if self.params.beta() == 0.0 {
            return Ok(ln_v_stable(n, k, self.params.alpha()));
        }
        match self.rows.get(n).and_then(|r| r.get(k - 1)) {
            Some(&v) => Ok(v),
            None => ln_v_quadrature(n, k, &self.params),
        }
    }
}

impl PredictiveWeights for VTable {
    fn alpha(&self) -> f64 {
        self.params.alpha()
    }

    fn weights(&self, n: usize, k: usize) -> Result<WeightPair> {
        let v = self.ln_v(n, k)?;
        Ok(WeightPair {
            g0: (self.ln_v(n + 1, k + 1)? - v).exp(),
            g1: (self.ln_v(n + 1, k)? - v).exp(),
            condition_estimate: 0.0,
        })
    }
}
