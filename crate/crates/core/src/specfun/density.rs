//! Positive-stable density at index 1/2 and the alpha-diversity density.
//!
//! ```text
//! f(x; 1/2) = x^(-3/2) exp(-1/(4x)) / (2 sqrt(pi))
//! g_S(s)    = exp(beta - (beta/s)^(1/a)) f(s^(-1/a); a) / (a s^(1 + 1/a)),  a = 1/2
//! ```

use crate::error::{domain, Error, Result};
use crate::gibbs::GGParams;

pub fn ln_stable_half_density(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("stable density needs x > 0, got {x}"));
    }
    let ln_norm = (2.0 * std::f64::consts::PI.sqrt()).ln();
    Ok(-ln_norm - 1.5 * x.ln() - 0.25 / x)
}

pub fn stable_half_density(x: f64) -> Result<f64> {
    ln_stable_half_density(x).map(f64::exp)
}

pub fn ln_alpha_diversity_density(s: f64, params: &GGParams) -> Result<f64> {
    if !(s > 0.0) {
        return domain(format!("alpha-diversity density needs s > 0, got {s}"));
    }
    if !params.is_nig() {
        return Err(Error::Unsupported(format!(
            "alpha-diversity density is implemented for alpha = 1/2, got {}",
            params.alpha()
        )));
    }
    let beta = params.beta();
    let ratio = beta / s;
    Ok(beta - ratio * ratio + ln_stable_half_density(1.0 / (s * s))? - 0.5f64.ln() - 3.0 * s.ln())
}

pub fn alpha_diversity_density(s: f64, params: &GGParams) -> Result<f64> {
    ln_alpha_diversity_density(s, params).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_tail_decays() {
        let a = stable_half_density(1e4).unwrap();
        let b = stable_half_density(1e6).unwrap();
        assert!(b < a && b < 1e-9);
        assert!(stable_half_density(0.0).is_err());
    }

    #[test]
    fn unsupported_alpha() {
        let p = GGParams::new(1.0, 1.0, 0.3).unwrap();
        assert!(matches!(alpha_diversity_density(1.0, &p), Err(Error::Unsupported(_))));
    }
}
