//! Special functions used by the partition and diffusion code.

mod density;
mod ei;
mod gamma;
mod gfc;
mod signed_log;

pub use density::{alpha_diversity_density, ln_alpha_diversity_density, ln_stable_half_density, stable_half_density};
pub use ei::{ei_scaled, exp_integral_e1, exp_integral_ei, one_minus_z_ei_scaled};
pub use gamma::{ln_pochhammer, ln_upper_incomplete_gamma, pochhammer, upper_incomplete_gamma, EULER_GAMMA};
pub use gfc::{gen_factorial_coeff, ln_gen_factorial_coeff, ln_gen_factorial_table};
pub use signed_log::{log_add_exp, LogSumExp, SignedLogSum, SignedLogValue};
