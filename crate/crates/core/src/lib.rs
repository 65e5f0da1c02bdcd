//! Uniform large-order asymptotic expansions of the Legendre functions
//! p_μ^n(x), q_μ^n(x) and of the modified Bessel functions I_n(nλ), K_n(nλ),
//! built from exactly generated WKB coefficients and validated against an
//! arbitrary-precision reference oracle.

pub mod bessel;
pub mod checks;
pub mod cli;
pub mod error;
pub mod errtable;
pub mod kernel;
pub mod legendre;
pub mod oracle;
pub mod scaled;
pub mod stirling;

pub use error::{Error, Result};

/// Highest expansion order for which coefficients are generated.
pub const K_MAX: usize = 6;
