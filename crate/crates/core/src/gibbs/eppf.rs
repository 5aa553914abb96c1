use super::{ln_v, GGParams};
use crate::error::{domain, Result};
use crate::specfun::ln_pochhammer;

/// `ln [V(n, k) prod_j (1 - alpha)_(n_j - 1)]`.
pub fn ln_eppf(block_sizes: &[usize], params: &GGParams) -> Result<f64> {
    if block_sizes.is_empty() {
        return domain("EPPF needs at least one block");
    }
    if block_sizes.contains(&0) {
        return domain("block sizes must be positive");
    }
    let mut sizes = block_sizes.to_vec();
    sizes.sort_unstable();
    let n: usize = sizes.iter().sum();
    let alpha = params.alpha();
    let ln_prod: f64 = sizes
        .iter()
        .map(|&m| ln_pochhammer(1.0 - alpha, m as u32 - 1).log_magnitude)
        .sum();
    Ok(ln_v(n, sizes.len(), params)? + ln_prod)
}

pub fn eppf(block_sizes: &[usize], params: &GGParams) -> Result<f64> {
    ln_eppf(block_sizes, params).map(f64::exp)
}
