//! Generalized Laguerre function spectral methods for tempered fractional
//! differential equations on the half line and the whole line.

pub mod approx;
pub mod error;
pub mod glf;
pub mod oracle;
pub mod solvers;
pub mod specfun;

pub use error::{Error, Result};
