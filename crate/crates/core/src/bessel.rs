//! Debye expansions of I_n(nλ), K_n(nλ) and their derivatives.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::expr::polynomial_field;
use crate::kernel::{integrate_step_bessel, rat, CoeffExpr, CompiledExpr, Rational};
use crate::scaled::Scaled;
use crate::K_MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BesselKind {
    I,
    K,
    /// I′_n(nλ), the derivative with respect to the argument z = nλ.
    #[serde(rename = "dI")]
    DI,
    /// K′_n(nλ).
    #[serde(rename = "dK")]
    DK,
}

impl std::str::FromStr for BesselKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(BesselKind::I),
            "K" => Ok(BesselKind::K),
            "dI" => Ok(BesselKind::DI),
            "dK" => Ok(BesselKind::DK),
            _ => Err(Error::usage(format!("unknown Bessel kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselParams {
    pub n: u32,
    pub lambda: f64,
    /// Truncation order: the series is summed over k = 0..=m.
    pub m: usize,
    pub kind: BesselKind,
}

impl BesselParams {
    pub fn new(n: u32, lambda: f64, m: usize, kind: BesselKind) -> Result<Self> {
        let p = BesselParams { n, lambda, m, kind };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("order n must be at least 1"));
        }
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(Error::domain(format!("lambda = {} must be positive", self.lambda)));
        }
        if self.m > K_MAX {
            return Err(Error::usage(format!(
                "order {} exceeds K_max = {K_MAX}",
                self.m
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BesselEval {
    pub value: f64,
    pub log_scale: Option<f64>,
    /// n^{−k}ω_k(t) (or the ω̄_k and (−n)^{−k} variants), k = 0..=m.
    pub terms: Vec<f64>,
    pub t: f64,
    pub eta: f64,
    /// ln|prefactor| including the exponential e^{±nη}.
    pub ln_prefactor: f64,
    pub m: usize,
}

impl BesselEval {
    pub fn scaled(&self) -> Scaled {
        Scaled {
            value: self.value,
            log_scale: self.log_scale,
        }
    }
}

/// t = 1/√(1+λ²).
pub fn t_of_lambda(lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::domain(format!("lambda = {lambda} must be nonnegative")));
    }
    Ok(1.0 / lambda.hypot(1.0))
}

/// η(λ) = √(1+λ²) + ln(λ/(1+√(1+λ²))).
pub fn eta(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::domain(format!("lambda = {lambda} must be positive")));
    }
    let r = lambda.hypot(1.0);
    Ok(r + (lambda / (1.0 + r)).ln())
}

struct Tables {
    omega: Vec<CoeffExpr>,
    omega_bar: Vec<CoeffExpr>,
    compiled: Vec<CompiledExpr>,
    compiled_bar: Vec<CompiledExpr>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let field = polynomial_field();
        let zero = Rational::from_integer(0.into());
        let mut omega = vec![CoeffExpr::one(&field, &zero)];
        for k in 0..K_MAX {
            let next = integrate_step_bessel(&omega[k]).expect("Debye recurrence on polynomials");
            omega.push(next);
        }
        let mut omega_bar = vec![omega[0].clone()];
        for k in 1..=K_MAX {
            omega_bar.push(bar_step(&omega[k], &omega[k - 1]));
        }
        let compile = |e: &CoeffExpr| e.compile(1.0).expect("g = 1 field");
        Tables {
            compiled: omega.iter().map(compile).collect(),
            compiled_bar: omega_bar.iter().map(compile).collect(),
            omega,
            omega_bar,
        }
    })
}

/// ω̄_k = ω_k + ½t(t²−1)ω_{k−1} + t²(t²−1)ω̇_{k−1}.
fn bar_step(omega_k: &CoeffExpr, omega_prev: &CoeffExpr) -> CoeffExpr {
    let a = omega_prev.mul_poly(&[rat(0, 1), rat(-1, 2), rat(0, 1), rat(1, 2)]);
    let b = omega_prev
        .derivative_poly()
        .expect("polynomial")
        .mul_poly(&[rat(0, 1), rat(0, 1), rat(-1, 1), rat(0, 1), rat(1, 1)]);
    omega_k
        .checked_add(&a)
        .and_then(|s| s.checked_add(&b))
        .expect("shared polynomial field")
}

fn check_k(k: usize) -> Result<()> {
    if k > K_MAX {
        return Err(Error::usage(format!("order {k} exceeds K_max = {K_MAX}")));
    }
    Ok(())
}

/// The Debye polynomial ω_k(t).
pub fn omega(k: usize) -> Result<&'static CoeffExpr> {
    check_k(k)?;
    Ok(&tables().omega[k])
}

/// The derivative-expansion polynomial ω̄_k(t).
pub fn omega_bar(k: usize) -> Result<&'static CoeffExpr> {
    check_k(k)?;
    Ok(&tables().omega_bar[k])
}

pub fn eval_bessel(p: &BesselParams) -> Result<BesselEval> {
    p.validate()?;
    let n = f64::from(p.n);
    let t = t_of_lambda(p.lambda)?;
    let eta = eta(p.lambda)?;
    let tabs = tables();
    let (sign, ln_prefactor, coeffs, alternate) = match p.kind {
        BesselKind::I => (1.0, 0.5 * (t / (2.0 * PI * n)).ln() + n * eta, &tabs.compiled, false),
        BesselKind::K => (1.0, 0.5 * (PI * t / (2.0 * n)).ln() - n * eta, &tabs.compiled, true),
        BesselKind::DI => (
            1.0,
            -0.5 * (2.0 * PI * n * t).ln() - p.lambda.ln() + n * eta,
            &tabs.compiled_bar,
            false,
        ),
        BesselKind::DK => (
            -1.0,
            0.5 * (PI / (2.0 * n * t)).ln() - p.lambda.ln() - n * eta,
            &tabs.compiled_bar,
            true,
        ),
    };
    let step = if alternate { -1.0 / n } else { 1.0 / n };
    let mut weight = 1.0;
    let mut terms = Vec::with_capacity(p.m + 1);
    for c in coeffs.iter().take(p.m + 1) {
        terms.push(weight * c.eval(t)?);
        weight *= step;
    }
    let sum: f64 = terms.iter().sum();
    let s = Scaled::assemble(sign, ln_prefactor, sum);
    Ok(BesselEval {
        value: s.value,
        log_scale: s.log_scale,
        terms,
        t,
        eta,
        ln_prefactor,
        m: p.m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[(i64, i64)]) -> CoeffExpr {
        let f = polynomial_field();
        let c: Vec<Rational> = c.iter().map(|&(p, q)| rat(p, q)).collect();
        CoeffExpr::polynomial(&f, &rat(0, 1), &c)
    }

    #[test]
    fn t_and_eta() {
        assert_eq!(t_of_lambda(0.0).unwrap(), 1.0);
        assert!((t_of_lambda(1.0).unwrap() - 0.5f64.sqrt()).abs() < 2e-16);
        assert!(t_of_lambda(1e8).unwrap() < 1e-7);
        assert!(t_of_lambda(-1.0).is_err());
        assert!((eta(1.0).unwrap() - 0.532_839_975_353_552).abs() < 1e-14);
        let r = 101f64.sqrt();
        assert!((eta(10.0).unwrap() - (r + (10.0 / (1.0 + r)).ln())).abs() < 1e-14);
        assert!((eta(1e6).unwrap() - 1e6).abs() < 1e-5);
        assert!(eta(0.0).is_err());
        assert!(eta(1e-300).unwrap() < -600.0);
    }

    #[test]
    fn debye_polynomials() {
        assert_eq!(omega(0).unwrap(), &poly(&[(1, 1)]));
        assert_eq!(omega(1).unwrap(), &poly(&[(0, 1), (3, 24), (0, 1), (-5, 24)]));
        assert_eq!(
            omega(2).unwrap(),
            &poly(&[(0, 1), (0, 1), (81, 1152), (0, 1), (-462, 1152), (0, 1), (385, 1152)])
        );
        assert_eq!(omega(1).unwrap().value_at_one().unwrap().rational_part(), &rat(-1, 12));
        assert_eq!(omega(2).unwrap().value_at_one().unwrap().rational_part(), &rat(1, 288));
        assert_eq!(omega_bar(0).unwrap(), &poly(&[(1, 1)]));
        assert_eq!(omega_bar(1).unwrap(), &poly(&[(0, 1), (-9, 24), (0, 1), (7, 24)]));
        assert_eq!(omega_bar(1).unwrap().value_at_one().unwrap().rational_part(), &rat(-1, 12));
        assert!(matches!(omega(K_MAX + 1), Err(Error::Usage(_))));
    }

    #[test]
    fn degree_and_parity() {
        for k in 0..=K_MAX {
            let w = omega(k).unwrap();
            assert_eq!(w.degree_v(), Some(3 * k as u32));
            assert!(w.terms().all(|(m, _)| (m.a as usize) % 2 == k % 2));
        }
    }

    #[test]
    fn third_debye_polynomial() {
        // u_3 from the classical tables.
        let expected = poly(&[
            (0, 1),
            (0, 1),
            (0, 1),
            (30375, 414720),
            (0, 1),
            (-369603, 414720),
            (0, 1),
            (765765, 414720),
            (0, 1),
            (-425425, 414720),
        ]);
        assert_eq!(omega(3).unwrap(), &expected);
    }

    fn bessel_i_series(n: u32, z: f64) -> f64 {
        let mut term = (0.5 * z).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
        let mut s = term;
        for j in 1..200 {
            term *= 0.25 * z * z / (j as f64 * (j + n) as f64);
            s += term;
        }
        s
    }

    #[test]
    fn matches_series_at_moderate_order() {
        let p = BesselParams::new(4, 2.0, 3, BesselKind::I).unwrap();
        let e = eval_bessel(&p).unwrap();
        let exact = bessel_i_series(4, 8.0);
        assert!(((e.value - exact) / exact).abs() < 1e-4);
        assert_eq!(e.terms.len(), 4);
        let sum: f64 = e.terms.iter().sum();
        assert_eq!(e.value, e.ln_prefactor.exp() * sum);
    }

    #[test]
    fn prefactor_product() {
        for (n, lambda) in [(3u32, 0.5), (10, 2.0), (40, 7.0)] {
            let i = eval_bessel(&BesselParams::new(n, lambda, 0, BesselKind::I).unwrap()).unwrap();
            let k = eval_bessel(&BesselParams::new(n, lambda, 0, BesselKind::K).unwrap()).unwrap();
            let t = i.t;
            assert!((i.value * k.value - t / (2.0 * f64::from(n))).abs() < 1e-14 * t);
        }
    }

    #[test]
    fn overflow_is_scaled() {
        let e = eval_bessel(&BesselParams::new(2000, 3.0, 2, BesselKind::I).unwrap()).unwrap();
        assert!(e.log_scale.is_some());
        assert!(e.value.is_finite());
        let k = eval_bessel(&BesselParams::new(2000, 3.0, 2, BesselKind::K).unwrap()).unwrap();
        assert!(k.log_scale.unwrap() < -700.0);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(BesselParams::new(0, 1.0, 0, BesselKind::I).is_err());
        assert!(BesselParams::new(1, -1.0, 0, BesselKind::I).is_err());
        assert!(matches!(
            BesselParams::new(1, 1.0, 99, BesselKind::I),
            Err(Error::Usage(_))
        ));
    }
}
