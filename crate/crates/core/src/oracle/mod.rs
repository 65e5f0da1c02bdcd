//! Arbitrary-precision reference values for p_μ^n, q_μ^n, I_n and K_n.
//!
//! p comes from the Gauss hypergeometric series (switching to Taylor-series
//! integration of the differential equation close to x = −1), q from
//! reduction of order, checked against direct integration of the
//! differential equation, I_n from its power series and K_n from trapezoidal
//! quadrature of its integral representation.

pub mod big;
mod bessel_ref;
mod hyper;
mod legendre_ref;
mod limit;
mod ode;
mod quad;

pub use bessel_ref::{bessel_i_reference, bessel_k_reference, bessel_ode_residual, BesselRefDetails};
pub use legendre_ref::{
    legendre_ode_residual, p_reference, p_reference_angle, p_reference_details, q_reference,
    q_reference_angle, q_reference_ode, q_reference_quadrature, OracleArg, PDetails,
};
pub use limit::{limit_check_bessel, LimitReport};

use crate::error::{Error, Result};
use crate::scaled::Scaled;
use big::{ln_abs, to_f64, Big, Prec};

/// Environment variable that overrides [`OracleConfig::digits`].
pub const DIGITS_ENV: &str = "LEGENDRE_ORACLE_DIGITS";

/// When q is cross-validated by direct integration of the differential
/// equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossCheck {
    /// Only while nγ stays below [`OracleConfig::cross_check_max_ngamma`];
    /// the integration cost grows linearly with nγ.
    Auto,
    Always,
    Never,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// Working precision in decimal digits.
    pub digits: u32,
    /// Relative truncation tolerance of series and quadratures.
    pub series_tol: f64,
    /// Term budget of a single series or Taylor step.
    pub max_terms: usize,
    /// Relative truncation tolerance of one Taylor step of the ODE integrator.
    pub ode_tol: f64,
    pub cross_check: CrossCheck,
    pub cross_check_max_ngamma: f64,
    /// Required agreement between the two q constructions.
    pub cross_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            digits: 60,
            series_tol: 1e-40,
            max_terms: 200_000,
            ode_tol: 1e-40,
            cross_check: CrossCheck::Auto,
            cross_check_max_ngamma: 500.0,
            cross_tol: 1e-25,
        }
    }
}

impl OracleConfig {
    /// Defaults, with the digit count taken from [`DIGITS_ENV`] when set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = Self::default();
        if let Ok(s) = std::env::var(DIGITS_ENV) {
            cfg.digits = s
                .trim()
                .parse()
                .map_err(|_| Error::usage(format!("{DIGITS_ENV}={s:?} is not a digit count")))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_digits(mut self, digits: u32) -> Self {
        self.digits = digits;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.digits < 30 {
            return Err(Error::usage(format!(
                "oracle precision of {} digits is below the minimum of 30",
                self.digits
            )));
        }
        for (name, v) in [
            ("series_tol", self.series_tol),
            ("ode_tol", self.ode_tol),
            ("cross_tol", self.cross_tol),
        ] {
            if !(v > 0.0) {
                return Err(Error::usage(format!("{name} must be positive")));
            }
        }
        if self.max_terms == 0 {
            return Err(Error::usage("max_terms must be positive"));
        }
        Ok(())
    }

    pub(crate) fn prec(&self) -> big::Prec {
        big::Prec::from_digits(self.digits)
    }

    /// Effective relative tolerance: the configured one, but never below the
    /// working precision.
    pub(crate) fn log2_tol(&self, tol: f64) -> f64 {
        tol.log2().max(self.prec().log2_eps() + 8.0)
    }
}

/// A high-precision value with its derivative and an estimate of the
/// relative error of the method.
#[derive(Debug, Clone)]
pub struct OracleValue {
    pub value: Big,
    pub derivative: Big,
    pub err_estimate: f64,
}

impl OracleValue {
    pub fn value_f64(&self) -> f64 {
        to_f64(&self.value)
    }

    pub fn derivative_f64(&self) -> f64 {
        to_f64(&self.derivative)
    }

    /// ln|value|, usable when the value leaves the double range.
    pub fn ln_abs(&self) -> f64 {
        ln_abs(&self.value)
    }
}

/// The scaled double `approx` as a big float at `prec`.
pub fn scaled_to_big(approx: &Scaled, prec: Prec) -> Big {
    let v = prec.f(approx.value);
    match approx.log_scale {
        None => v,
        Some(e) => v * prec.f(e).exp(),
    }
}

/// Signed relative error (reference − approx)/reference.
pub fn relative_error(reference: &Big, approx: &Scaled) -> f64 {
    let prec = Prec(reference.precision().max(64));
    let a = scaled_to_big(approx, prec);
    to_f64(&((reference - &a) / reference))
}
