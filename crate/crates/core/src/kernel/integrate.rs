//! Exact integration steps for the Bessel and Legendre coefficient
//! recurrences.
//!
//! The antiderivative engine works on integrands of the form
//! `P(v, δ) + R(v, δ)/(1 + γ²v²)` with polynomial P and R. It uses a closed
//! rule set:
//!
//! * `∫ v^a δ^b dv = v^{a+1}δ^b/(a+1) + bγ/(a+1) ∫ v^{a+1}δ^{b−1}/(1+γ²v²) dv`
//! * `v^c/(1+γ²v²) = v^{c−2}/γ² − v^{c−2}/(γ²(1+γ²v²))` for c ≥ 2
//! * `∫ δ^b/(1+γ²v²) dv = −δ^{b+1}/(γ(b+1))`
//! * `∫ v/(1+γ²v²) dv = L/(2γ²)`
//!
//! Terms are processed from the highest δ-power down so that every
//! contribution to a given `v·δ^b/(1+γ²v²)` slot is collected before that slot
//! is integrated. A nonzero slot with b ≥ 1 has no antiderivative in the
//! basis and is reported as an integrity error.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::expr::{CoeffExpr, Monomial};
use super::scalar::{rat, ExactScalar, QuadField, Rational};
use crate::error::{Error, Result};

/// Integrand `Σ p_{a,b} v^a δ^b + Σ r_{c,b} v^c δ^b / (1 + γ²v²)`.
#[derive(Debug, Clone)]
pub struct Integrand {
    field: Arc<QuadField>,
    zeta: Rational,
    // keyed by (b, a)
    poly: BTreeMap<(u32, u32), ExactScalar>,
    // keyed by (b, c)
    rational: BTreeMap<(u32, u32), ExactScalar>,
}

fn accumulate(map: &mut BTreeMap<(u32, u32), ExactScalar>, key: (u32, u32), c: ExactScalar) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(e) => {
            let s = &*e + &c;
            if s.is_zero() {
                map.remove(&key);
            } else {
                *e = s;
            }
        }
        None => {
            map.insert(key, c);
        }
    }
}

impl Integrand {
    pub fn new(field: &Arc<QuadField>, zeta: &Rational) -> Self {
        Integrand {
            field: Arc::clone(field),
            zeta: zeta.clone(),
            poly: BTreeMap::new(),
            rational: BTreeMap::new(),
        }
    }

    /// Adds `e` to the polynomial part.
    pub fn add_polynomial_part(&mut self, e: &CoeffExpr) -> Result<()> {
        self.check(e)?;
        for (m, c) in e.terms() {
            accumulate(&mut self.poly, (m.b, m.a), c.clone());
        }
        Ok(())
    }

    /// Adds `e / (1 + γ²v²)`.
    pub fn add_rational_part(&mut self, e: &CoeffExpr) -> Result<()> {
        self.check(e)?;
        for (m, c) in e.terms() {
            accumulate(&mut self.rational, (m.b, m.a), c.clone());
        }
        Ok(())
    }

    fn check(&self, e: &CoeffExpr) -> Result<()> {
        if !QuadField::same(&self.field, e.field()) || &self.zeta != e.zeta() {
            return Err(Error::usage("integrand parameter mismatch"));
        }
        if !e.is_log_free() {
            return Err(Error::usage("integrands must be free of log terms"));
        }
        Ok(())
    }

    fn max_b(&self) -> Option<u32> {
        let p = self.poly.keys().map(|k| k.0).max();
        let r = self.rational.keys().map(|k| k.0).max();
        p.max(r)
    }

    /// An antiderivative in the {v^a δ^b L^l} basis (arbitrary constant).
    pub fn antiderivative(mut self) -> Result<CoeffExpr> {
        let field = Arc::clone(&self.field);
        let g = field.g().clone();
        let g_inv = g.recip();
        let gamma = ExactScalar::gamma(&field);
        let mut out = CoeffExpr::zero(&field, &self.zeta);

        let Some(top) = self.max_b() else {
            return Ok(out);
        };
        for b in (0..=top).rev() {
            // polynomial division of v^c/(1+γ²v²), c ≥ 2
            while let Some((&(bb, c), _)) = self
                .rational
                .range((b, 2)..=(b, u32::MAX))
                .next_back()
                .filter(|((bb, _), _)| *bb == b)
            {
                let coef = self.rational.remove(&(bb, c)).expect("key present");
                let part = coef.scale(&g_inv);
                accumulate(&mut self.poly, (b, c - 2), part.clone());
                accumulate(&mut self.rational, (b, c - 2), -part);
            }

            let level: Vec<(u32, ExactScalar)> = self
                .poly
                .range((b, 0)..=(b, u32::MAX))
                .map(|(&(_, a), c)| (a, c.clone()))
                .collect();
            for (a, coef) in level {
                self.poly.remove(&(b, a));
                let inv = rat(1, i64::from(a) + 1);
                out.add_term(Monomial::new(a + 1, b, 0), coef.scale(&inv));
                if b > 0 {
                    let k = &inv * Rational::from_integer(b.into());
                    accumulate(&mut self.rational, (b - 1, a + 1), (&coef * &gamma).scale(&k));
                }
            }

            if let Some(coef) = self.rational.remove(&(b, 0)) {
                // 1/γ = γ/g
                let k = -(&g_inv * rat(1, i64::from(b) + 1));
                out.add_term(Monomial::new(0, b + 1, 0), (&coef * &gamma).scale(&k));
            }

            if let Some(coef) = self.rational.remove(&(b, 1)) {
                if b == 0 {
                    out.add_term(Monomial::new(0, 0, 1), coef.scale(&(&g_inv * rat(1, 2))));
                } else {
                    return Err(Error::integrity(format!(
                        "integrand term ({coef})·v·δ^{b}/(1+γ²v²) has no antiderivative in the closed basis"
                    )));
                }
            }
        }
        debug_assert!(self.poly.is_empty() && self.rational.is_empty());
        Ok(out)
    }
}

/// One step of the Debye recurrence:
/// ω_{k+1} = ½t²(1−t²)ω̇_k + ⅛∫₀ᵗ(1−5s²)ω_k(s)ds.
pub fn integrate_step_bessel(omega_k: &CoeffExpr) -> Result<CoeffExpr> {
    if !omega_k.is_polynomial() {
        return Err(Error::usage("Bessel recurrence input must be a polynomial in t"));
    }
    let deriv = omega_k
        .derivative_poly()?
        .mul_poly(&[rat(0, 1), rat(0, 1), rat(1, 2), rat(0, 1), rat(-1, 2)]);
    let integrand = omega_k.mul_poly(&[rat(1, 8), rat(0, 1), rat(-5, 8)]);
    let mut integral = omega_k.zero_like();
    for (m, c) in integrand.terms() {
        integral.add_term(Monomial::new(m.a + 1, 0, 0), c.scale(&rat(1, i64::from(m.a) + 1)));
    }
    deriv.checked_add(&integral)
}

/// One step of the Legendre recurrence anchored at v = 1:
///
/// ψ_{k+1} = (1−v²)(1+γ²v²)ψ̇_k / (2(1+γ²))
///           − ∫₁ᵛ [ (5γ²v² + 1 − γ²)/(8(1+γ²)) + ζ/(1+γ²v²) ] ψ_k dv.
///
/// The parameters g = γ² and ζ = ξ − 1/8 are carried by `psi_k`. The result
/// vanishes identically at v = 1.
pub fn integrate_step_legendre(psi_k: &CoeffExpr) -> Result<CoeffExpr> {
    if !psi_k.is_log_free() {
        return Err(Error::usage("Legendre recurrence input must be log-free"));
    }
    let g = psi_k.g().clone();
    let one_plus_g = Rational::one() + &g;

    let deriv = psi_k
        .scaled_diff()
        .mul_poly(&[rat(1, 1), rat(0, 1), rat(-1, 1)])
        .scale_rational(&(rat(1, 2) / &one_plus_g));

    let mut integrand = Integrand::new(psi_k.field(), psi_k.zeta());
    let bracket = [Rational::one() - &g, Rational::zero(), rat(5, 1) * &g];
    integrand.add_polynomial_part(
        &psi_k
            .mul_poly(&bracket)
            .scale_rational(&(rat(1, 8) / &one_plus_g)),
    )?;
    integrand.add_rational_part(&psi_k.scale_rational(psi_k.zeta()))?;

    let anti = integrand.antiderivative()?;
    if let Some((m, c)) = anti.log_terms().next() {
        return Err(Error::integrity(format!(
            "log term ({c})·L^{} survives in the antiderivative at order v^{}·δ^{}",
            m.l, m.a, m.b
        )));
    }
    let at_one = anti.value_at_one()?;
    let definite = anti.checked_sub(&CoeffExpr::constant(at_one, psi_k.zeta()))?;
    deriv.checked_sub(&definite)
}
