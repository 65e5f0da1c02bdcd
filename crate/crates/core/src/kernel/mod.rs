//! Exact symbolic engine for the expansion coefficients, with a numeric
//! spectral fallback.

pub mod expr;
pub mod integrate;
pub mod scalar;
pub mod spectral;

pub use expr::{delta, expr_arith, CoeffExpr, CompiledExpr, ExprJson, ExprOp, Monomial};
pub use integrate::{integrate_step_bessel, integrate_step_legendre, Integrand};
pub use scalar::{
    format_rational, parse_rational, rat, rational_from_f64, rational_to_f64, scalar_arith, ExactScalar,
    QuadField, Rational, ScalarOp,
};
pub use spectral::{spectral_sequence, spectral_step, Family, SpectralCoeff};
