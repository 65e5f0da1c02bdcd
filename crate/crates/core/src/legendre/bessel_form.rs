//! The expansion rewritten in the shape of the Debye formulas, at x = cos θ
//! and γ = λ/sin θ, plus the large-γ comparison with the Debye coefficients.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bessel::{omega, t_of_lambda};
use crate::error::{Error, Result};
use crate::kernel::rational_to_f64;
use crate::scaled::Scaled;
use crate::K_MAX;

use super::coeffs::{chain, exact_params};
use super::eval::{mu_of, vmap, Argument, LegendreEval, LegendreKind};

/// Cone-angle parametrisation: x = cos θ, γ = λ/sin θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeAngleParams {
    pub theta: f64,
    pub lambda: f64,
}

impl ConeAngleParams {
    pub fn new(theta: f64, lambda: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 0.5 * PI) {
            return Err(Error::domain(format!("theta = {theta} must lie in (0, π/2)")));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::domain(format!("lambda = {lambda} must be positive")));
        }
        Ok(ConeAngleParams { theta, lambda })
    }

    pub fn gamma(&self) -> f64 {
        self.lambda / self.theta.sin()
    }

    pub fn x(&self) -> f64 {
        self.theta.cos()
    }

    pub fn t(&self) -> f64 {
        1.0 / self.lambda.hypot(1.0)
    }

    /// v = t·cos θ.
    pub fn v(&self) -> f64 {
        self.t() * self.theta.cos()
    }

    pub fn argument(&self) -> Argument {
        Argument::from_angle(self.theta).expect("validated angle")
    }
}

/// η̃ = ln[λ/(√(1+λ²) + cos θ)] − (λ/sin θ)[arctan(sin θ/λ) − arctan(tan θ/(λt))] + 1.
pub fn eta_tilde(lambda: f64, theta: f64) -> Result<f64> {
    let c = ConeAngleParams::new(theta, lambda)?;
    let t = c.t();
    let (s, co) = theta.sin_cos();
    let bracket = (s / lambda).atan() - (theta.tan() / (lambda * t)).atan();
    Ok((lambda / (lambda.hypot(1.0) + co)).ln() - lambda / s * bracket + 1.0)
}

/// η̃ assembled instead as 1 + ln γ + S₋₁(v), the same quantity arranged
/// through the phase of the Legendre expansion.
pub fn eta_tilde_via_phase(lambda: f64, theta: f64) -> Result<f64> {
    let c = ConeAngleParams::new(theta, lambda)?;
    let gamma = c.gamma();
    let vm = vmap(&c.argument(), gamma);
    let g = gamma * gamma;
    let delta = (gamma * vm.one_minus_v).atan2(1.0 + g * vm.v);
    let s = 0.5 * (vm.one_minus_v / (vm.one_plus_v * (1.0 + g))).ln() + gamma * delta;
    Ok(1.0 + gamma.ln() + s)
}

/// The rewritten expansion of p, q, (1/n)dp/dx or (1/n)dq/dx at x = cos θ,
/// summed with the Stirling-adjusted coefficients ψ_k⁺ (ψ̄_k⁺).
pub fn eval_bessel_form(
    n: u32,
    lambda: f64,
    theta: f64,
    xi: f64,
    m: usize,
    kind: LegendreKind,
) -> Result<LegendreEval> {
    let cone = ConeAngleParams::new(theta, lambda)?;
    if n == 0 {
        return Err(Error::domain("order n must be at least 1"));
    }
    if m > K_MAX {
        return Err(Error::usage(format!("order {m} exceeds K_max = {K_MAX}")));
    }
    let gamma = cone.gamma();
    let (g, zeta) = exact_params(gamma, xi)?;
    let ch = chain(&g, &zeta)?;
    let coeffs = if kind.is_derivative() {
        ch.psi_bar_plus_upto(m)?
    } else {
        ch.psi_plus_upto(m)?
    };
    let vm = vmap(&cone.argument(), gamma);
    let nf = f64::from(n);
    let t = t_of_lambda(lambda)?;
    let et = eta_tilde(lambda, theta)?;
    let ln_ratio = (theta.sin() / (lambda * nf)).ln();
    let ln_sin2 = 2.0 * theta.sin().ln();
    let (sign, ln_prefactor) = match kind {
        LegendreKind::P => (1.0, 0.5 * (t / (2.0 * PI * nf)).ln() + nf * et + nf * ln_ratio),
        LegendreKind::Q => (1.0, 0.5 * (PI * t / (2.0 * nf)).ln() - nf * et - nf * ln_ratio),
        LegendreKind::Dp => (
            -1.0,
            -0.5 * (2.0 * PI * nf * t).ln() + nf * et + nf * ln_ratio - ln_sin2,
        ),
        LegendreKind::Dq => (
            1.0,
            0.5 * (PI / (2.0 * nf * t)).ln() - nf * et - nf * ln_ratio - ln_sin2,
        ),
    };
    let step = if kind.is_p() { 1.0 / nf } else { -1.0 / nf };
    let mut weight = 1.0;
    let mut terms = Vec::with_capacity(m + 1);
    for c in &coeffs {
        terms.push(weight * c.compile(gamma)?.eval(vm.v)?);
        weight *= step;
    }
    let sum: f64 = terms.iter().sum();
    let sc = Scaled::assemble(sign, ln_prefactor, sum);
    Ok(LegendreEval {
        value: sc.value,
        log_scale: sc.log_scale,
        terms,
        v: vm.v,
        s: et - 1.0 - gamma.ln(),
        mu: mu_of(n, gamma, xi),
        ln_prefactor,
    })
}

/// Large-γ comparison of ψ_k(0) with the Debye value ω_k(1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossRelation {
    pub k: usize,
    pub gamma: f64,
    pub xi: f64,
    pub psi_at_zero: f64,
    pub omega_at_one: f64,
    /// |ψ_k(0)| − |ω_k(1)|.
    pub magnitude_gap: f64,
    /// Sign of ψ_k(0)/ω_k(1), or 0 when either side vanishes.
    pub observed_sign: i32,
    /// Whether the observed sign equals (−1)^k.
    pub sign_is_minus_one_pow_k: bool,
}

/// Evaluates ψ_k(0) at γ = `gamma_large` (exact coefficients) and compares it
/// with ω_k(1).
pub fn cross_relation_check(k: usize, gamma_large: f64, xi: f64) -> Result<CrossRelation> {
    if !(gamma_large >= 100.0) {
        return Err(Error::domain(format!(
            "gamma = {gamma_large} is too small for the large-gamma comparison (need >= 100)"
        )));
    }
    let (g, zeta) = exact_params(gamma_large, xi)?;
    let psi = chain(&g, &zeta)?.psi(k)?;
    let psi0 = psi.eval(gamma_large, 0.0)?;
    let om = omega(k)?.value_at_one()?;
    let om1 = rational_to_f64(om.rational_part());
    let observed_sign = if psi0 == 0.0 || om1 == 0.0 {
        0
    } else if (psi0 > 0.0) == (om1 > 0.0) {
        1
    } else {
        -1
    };
    let expected = if k % 2 == 0 { 1 } else { -1 };
    Ok(CrossRelation {
        k,
        gamma: gamma_large,
        xi,
        psi_at_zero: psi0,
        omega_at_one: om1,
        magnitude_gap: psi0.abs() - om1.abs(),
        observed_sign,
        sign_is_minus_one_pow_k: observed_sign == expected,
    })
}
