//! Assembly of the expansions of p, q, dp and dq.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scaled::Scaled;
use crate::stirling::ln_factorial;
use crate::K_MAX;

use super::coeffs::{chain, exact_params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LegendreKind {
    P,
    Q,
    /// (1/n)·dp/dx.
    Dp,
    /// (1/n)·dq/dx.
    Dq,
}

impl std::str::FromStr for LegendreKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(LegendreKind::P),
            "q" => Ok(LegendreKind::Q),
            "dp" => Ok(LegendreKind::Dp),
            "dq" => Ok(LegendreKind::Dq),
            _ => Err(Error::usage(format!("unknown Legendre kind {s:?}"))),
        }
    }
}

impl LegendreKind {
    /// Whether the series uses ψ̄_k rather than ψ_k.
    pub fn is_derivative(self) -> bool {
        matches!(self, LegendreKind::Dp | LegendreKind::Dq)
    }

    /// Whether the kind is the solution recessive at x = 1 (p and dp).
    pub fn is_p(self) -> bool {
        matches!(self, LegendreKind::P | LegendreKind::Dp)
    }
}

/// The argument x together with accurately computed 1 ∓ x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Argument {
    pub x: f64,
    pub one_minus_x: f64,
    pub one_plus_x: f64,
}

impl Argument {
    pub fn new(x: f64) -> Result<Self> {
        if !(x.abs() < 1.0) {
            return Err(Error::domain(format!("|x| = {} must be below 1", x.abs())));
        }
        Ok(Argument {
            x,
            one_minus_x: 1.0 - x,
            one_plus_x: 1.0 + x,
        })
    }

    /// x = cos θ, with 1 − x = 2 sin²(θ/2) kept to full relative accuracy.
    pub fn from_angle(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < std::f64::consts::PI) {
            return Err(Error::domain(format!("theta = {theta} must lie in (0, π)")));
        }
        let h = (0.5 * theta).sin();
        let c = (0.5 * theta).cos();
        Ok(Argument {
            x: theta.cos(),
            one_minus_x: 2.0 * h * h,
            one_plus_x: 2.0 * c * c,
        })
    }

    /// 1 − x².
    pub fn one_minus_x2(&self) -> f64 {
        self.one_minus_x * self.one_plus_x
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreParams {
    pub n: u32,
    pub gamma: f64,
    pub xi: f64,
    pub arg: Argument,
    /// Truncation order: the series is summed over k = 0..=m.
    pub m: usize,
    pub kind: LegendreKind,
}

impl LegendreParams {
    pub fn new(n: u32, gamma: f64, xi: f64, x: f64, m: usize, kind: LegendreKind) -> Result<Self> {
        let p = LegendreParams {
            n,
            gamma,
            xi,
            arg: Argument::new(x)?,
            m,
            kind,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn at_angle(n: u32, gamma: f64, xi: f64, theta: f64, m: usize, kind: LegendreKind) -> Result<Self> {
        let p = LegendreParams {
            n,
            gamma,
            xi,
            arg: Argument::from_angle(theta)?,
            m,
            kind,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn x(&self) -> f64 {
        self.arg.x
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("order n must be at least 1"));
        }
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::domain(format!("gamma = {} must be positive", self.gamma)));
        }
        if !self.xi.is_finite() {
            return Err(Error::domain("xi must be finite"));
        }
        if !(self.arg.x.abs() < 1.0) {
            return Err(Error::domain(format!("|x| = {} must be below 1", self.arg.x.abs())));
        }
        if self.m > K_MAX {
            return Err(Error::usage(format!("order {} exceeds K_max = {K_MAX}", self.m)));
        }
        if self.gamma < 0.05 {
            log::warn!(
                "gamma = {} is small; floating evaluation of the coefficients loses accuracy",
                self.gamma
            );
        }
        Ok(())
    }
}

/// The degree μ = −1/2 + √(1 − 8ξ − 4n²γ²)/2, principal root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LegendreIndex {
    pub re: f64,
    pub im: f64,
}

impl LegendreIndex {
    pub fn is_real(&self) -> bool {
        self.im == 0.0
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

pub fn mu_of(n: u32, gamma: f64, xi: f64) -> LegendreIndex {
    let nf = f64::from(n);
    let disc = 1.0 - 8.0 * xi - 4.0 * nf * nf * gamma * gamma;
    if disc >= 0.0 {
        LegendreIndex {
            re: -0.5 + 0.5 * disc.sqrt(),
            im: 0.0,
        }
    } else {
        LegendreIndex {
            re: -0.5,
            im: 0.5 * (-disc).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LegendreEval {
    pub value: f64,
    pub log_scale: Option<f64>,
    /// Per-order contributions (±n)^{−k}·ψ_k(v) (ψ̄_k for derivatives).
    pub terms: Vec<f64>,
    pub v: f64,
    #[serde(rename = "S")]
    pub s: f64,
    pub mu: LegendreIndex,
    /// ln|prefactor| including the factorial and exponential.
    #[serde(skip)]
    pub ln_prefactor: f64,
}

impl LegendreEval {
    pub fn scaled(&self) -> Scaled {
        Scaled {
            value: self.value,
            log_scale: self.log_scale,
        }
    }
}

/// Intermediate quantities of the v-map at one argument.
#[derive(Debug, Clone, Copy)]
pub(crate) struct VMap {
    pub v: f64,
    pub one_minus_v: f64,
    pub one_plus_v: f64,
    /// s = √(1 + γ²(1−x²)); then (1+γ²v²)/(1+γ²) = 1/s².
    pub s: f64,
}

pub(crate) fn vmap(arg: &Argument, gamma: f64) -> VMap {
    let g = gamma * gamma;
    let w = arg.one_minus_x2();
    let s = (1.0 + g * w).sqrt();
    let x = arg.x;
    // 1 ∓ v = (1 − x²)(1 + γ²)/(s(s ± x)), free of cancellation.
    let num = w * (1.0 + g);
    let (one_minus_v, one_plus_v) = if x >= 0.0 {
        (num / (s * (s + x)), 1.0 + x / s)
    } else {
        (1.0 - x / s, num / (s * (s - x)))
    };
    VMap {
        v: x / s,
        one_minus_v,
        one_plus_v,
        s,
    }
}

/// v = x/√(1 + γ²(1 − x²)).
pub fn v_of_x(x: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::domain(format!("gamma = {gamma} must be positive")));
    }
    Ok(vmap(&Argument::new(x)?, gamma).v)
}

fn s_minus1_parts(one_minus_v: f64, one_plus_v: f64, v: f64, gamma: f64) -> f64 {
    let g = gamma * gamma;
    let delta = (gamma * one_minus_v).atan2(1.0 + g * v);
    0.5 * (one_minus_v / (one_plus_v * (1.0 + g))).ln() + gamma * delta
}

/// S₋₁(v) = ½ ln[(1−v)/((1+v)(1+γ²))] − γ[arctan γv − arctan γ].
pub fn s_minus1(v: f64, gamma: f64) -> Result<f64> {
    if !(v.abs() < 1.0) {
        return Err(Error::domain(format!("|v| = {} must be below 1", v.abs())));
    }
    if !(gamma > 0.0) {
        return Err(Error::domain(format!("gamma = {gamma} must be positive")));
    }
    Ok(s_minus1_parts(1.0 - v, 1.0 + v, v, gamma))
}

pub fn eval_legendre(p: &LegendreParams) -> Result<LegendreEval> {
    p.validate()?;
    let (g, zeta) = exact_params(p.gamma, p.xi)?;
    let ch = chain(&g, &zeta)?;
    let coeffs = if p.kind.is_derivative() {
        ch.psi_bar_upto(p.m)?
    } else {
        ch.psi_upto(p.m)?
    };
    let vm = vmap(&p.arg, p.gamma);
    let s_val = s_minus1_parts(vm.one_minus_v, vm.one_plus_v, vm.v, p.gamma);

    let n = f64::from(p.n);
    let nn = u64::from(p.n);
    let ln_norm = if p.kind.is_p() {
        -ln_factorial(nn)
    } else {
        ln_factorial(nn - 1) - std::f64::consts::LN_2
    };
    let exponent = if p.kind.is_p() { n * s_val } else { -n * s_val };
    // [(1+γ²v²)/(1+γ²)]^{1/4} = s^{−1/2}; the derivative form carries
    // s^{−3/2}·(1+γ²)/(1−v²) = s^{1/2}/(1−x²).
    let ln_shape = if p.kind.is_derivative() {
        0.5 * vm.s.ln() - p.arg.one_minus_x2().ln()
    } else {
        -0.5 * vm.s.ln()
    };
    let sign = if p.kind == LegendreKind::Dp { -1.0 } else { 1.0 };
    let ln_prefactor = ln_norm + ln_shape + exponent;

    let step = if p.kind.is_p() { 1.0 / n } else { -1.0 / n };
    let mut weight = 1.0;
    let mut terms = Vec::with_capacity(p.m + 1);
    for c in &coeffs {
        terms.push(weight * c.compile(p.gamma)?.eval(vm.v)?);
        weight *= step;
    }
    let sum: f64 = terms.iter().sum();
    let sc = Scaled::assemble(sign, ln_prefactor, sum);
    Ok(LegendreEval {
        value: sc.value,
        log_scale: sc.log_scale,
        terms,
        v: vm.v,
        s: s_val,
        mu: mu_of(p.n, p.gamma, p.xi),
        ln_prefactor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v_map() {
        assert_eq!(v_of_x(0.0, 1.0).unwrap(), 0.0);
        assert!((v_of_x(0.5, 1.0).unwrap() - 0.377_964_473_009_227_2).abs() < 1e-15);
        assert!(v_of_x(1.0 - 1e-12, 3.0).unwrap() < 1.0);
        assert!(v_of_x(1.0 - 1e-12, 3.0).unwrap() > 0.999_999);
        assert!((v_of_x(-0.3, 2.0).unwrap() + v_of_x(0.3, 2.0).unwrap()).abs() < 1e-16);
        assert!(v_of_x(1.0, 1.0).is_err());
        let a = Argument::from_angle(1e-6).unwrap();
        let vm = vmap(&a, 2.0);
        // 1 − v ≈ (1 − x²)(1 + γ²)/2 for x → 1
        assert!((vm.one_minus_v / (1e-12 * 5.0 / 2.0) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn index() {
        let mu = mu_of(2, 0.1, 0.0);
        assert!(mu.is_real());
        assert!((mu.re - (-0.5 + 0.5 * 0.84f64.sqrt())).abs() < 1e-15);
        assert!((mu.re + 0.041_742).abs() < 1e-6);
        let mu = mu_of(4, 1.0, 0.0);
        assert_eq!(mu.re, -0.5);
        assert!((mu.im - 63f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((mu_of(3, 1e-9, 0.125).re + 0.5).abs() < 1e-8);
    }

    #[test]
    fn phase() {
        let s = s_minus1(0.0, 1.0).unwrap();
        assert!((s - (-0.5 * 2f64.ln() + std::f64::consts::FRAC_PI_4)).abs() < 1e-15);
        assert!((s - 0.438_824_573_117_476).abs() < 1e-12);
        assert!(s_minus1(1.0 - 1e-15, 1.0).unwrap() < -15.0);
        let mut prev = f64::INFINITY;
        for j in 0..50 {
            let v = -0.98 + 0.04 * j as f64;
            let s = s_minus1(v, 2.5).unwrap();
            assert!(s < prev);
            prev = s;
        }
        assert!(s_minus1(1.0, 1.0).is_err());
    }

    #[test]
    fn leading_term_near_one() {
        for kind in [LegendreKind::P, LegendreKind::Q] {
            let p = LegendreParams::new(4, 1.0, 0.0, 0.995, 0, kind).unwrap();
            let e = eval_legendre(&p).unwrap();
            let vm = vmap(&p.arg, 1.0);
            let expect = match kind {
                LegendreKind::P => (4.0 * e.s).exp() / vm.s.sqrt() / 24.0,
                _ => (-4.0 * e.s).exp() / vm.s.sqrt() * 3.0,
            };
            assert!((e.value / expect - 1.0).abs() < 1e-14);
        }
        // x → 1: p·(2/(1−x))^{n/2}·n! → 1
        let p = LegendreParams::at_angle(3, 1.5, 0.3, 1e-5, 3, LegendreKind::P).unwrap();
        let e = eval_legendre(&p).unwrap();
        let r = e.value * (2.0 / p.arg.one_minus_x).powf(1.5) * 6.0;
        assert!((r - 1.0).abs() < 1e-8);
        let q = LegendreParams::at_angle(3, 1.5, 0.3, 1e-5, 3, LegendreKind::Q).unwrap();
        let e = eval_legendre(&q).unwrap();
        let r = e.value * (p.arg.one_minus_x / 2.0).powf(1.5) * 2.0 / 2.0;
        assert!((r - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(LegendreParams::new(0, 1.0, 0.0, 0.5, 0, LegendreKind::P).is_err());
        assert!(LegendreParams::new(1, 0.0, 0.0, 0.5, 0, LegendreKind::P).is_err());
        assert!(LegendreParams::new(1, 1.0, 0.0, -1.0, 0, LegendreKind::P).is_err());
        assert!(matches!(
            LegendreParams::new(1, 1.0, 0.0, 0.5, 99, LegendreKind::P),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn huge_order_is_scaled() {
        let p = LegendreParams::new(5000, 1.0, 0.0, 0.5, 2, LegendreKind::Q).unwrap();
        let e = eval_legendre(&p).unwrap();
        assert!(e.log_scale.is_some());
        assert!(e.value.is_finite() && e.value > 0.0);
    }
}
