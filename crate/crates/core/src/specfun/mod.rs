//! Special functions and Gauss quadrature.

mod gamma;
mod laguerre;
mod quadrature;

pub use gamma::{gamma, gamma_ratio, ln_gamma_difference, log_gamma, pochhammer};
pub use laguerre::{laguerre, laguerre_derivative, laguerre_sequence};
pub(crate) use laguerre::{laguerre_sequence_unchecked, laguerre_series, laguerre_unchecked};
pub use quadrature::{gauss_jacobi, gauss_laguerre, gauss_legendre, QuadratureRule, RuleKind};
