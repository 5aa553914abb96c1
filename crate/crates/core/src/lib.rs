//! Gibbs-type random partitions for generalized-gamma random measures, the
//! alpha-diversity chain and its diffusion limit, and Moran-type particle
//! systems.
//!
//! Modules, bottom up:
//!
//! - [`specfun`]: incomplete gamma, exponential integral, generalized factorial
//!   coefficients, stable densities, signed-log accumulation.
//! - [`quad`]: adaptive Gauss-Kronrod quadrature.
//! - [`mp`]: multiprecision evaluation of the alternating sums.
//! - [`gibbs`]: predictive weights, EPPF, singleton law.
//! - [`urn`]: Polya-urn and stick-breaking samplers.
//! - [`diffusion`]: the cluster-count chain, the SDE, boundary analytics and the
//!   finite-dimensional generator.
//! - [`particle`]: the Moran particle system and its conditioned variant.

pub mod diffusion;
pub mod error;
pub mod gibbs;
pub mod mp;
pub mod particle;
pub mod quad;
pub mod rng;
pub mod specfun;
pub mod urn;

pub use error::{Error, Result};
