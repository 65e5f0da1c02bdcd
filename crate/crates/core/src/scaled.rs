//! Assembly of prefactor × series with overflow protection.

/// Exponent magnitude beyond which a result is returned in scaled form.
pub const OVERFLOW_EXPONENT: f64 = 700.0;

/// A real number sign·s·e^E. When `log_scale` is `Some(E)`, `value` holds
/// sign·s and the true value is `value·e^E`; otherwise `value` is the plain
/// number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub value: f64,
    pub log_scale: Option<f64>,
}

impl Scaled {
    pub fn assemble(sign: f64, ln_prefactor: f64, sum: f64) -> Self {
        if ln_prefactor.abs() > OVERFLOW_EXPONENT {
            Scaled {
                value: sign * sum,
                log_scale: Some(ln_prefactor),
            }
        } else {
            Scaled {
                value: sign * ln_prefactor.exp() * sum,
                log_scale: None,
            }
        }
    }

    /// ln|value| including the scale.
    pub fn ln_abs(&self) -> f64 {
        self.value.abs().ln() + self.log_scale.unwrap_or(0.0)
    }

    /// The plain double, which may be infinite or zero for scaled results.
    pub fn to_f64(&self) -> f64 {
        match self.log_scale {
            None => self.value,
            Some(e) => self.value * e.exp(),
        }
    }
}
