//! Finite sums of monomials `c · v^a · δ^b · L^l` with coefficients in ℚ(γ).
//!
//! δ = arctan γ − arctan γv and L = ln(1 + γ²v²). Finished recurrence
//! outputs never contain L; it only shows up transiently inside the
//! antiderivative engine.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::{
    format_rational, parse_rational, rational_to_f64, ExactScalar, QuadField, Rational,
};
use crate::error::{Error, Result};

/// Exponent triple. Field order gives the canonical (l, b, a) ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub l: u32,
    pub b: u32,
    pub a: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { l: 0, b: 0, a: 0 };

    pub fn new(a: u32, b: u32, l: u32) -> Self {
        Monomial { l, b, a }
    }
}

#[derive(Clone, PartialEq)]
pub struct CoeffExpr {
    field: Arc<QuadField>,
    zeta: Rational,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl fmt::Debug for CoeffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoeffExpr({self})")
    }
}

impl CoeffExpr {
    pub fn zero(field: &Arc<QuadField>, zeta: &Rational) -> Self {
        CoeffExpr {
            field: Arc::clone(field),
            zeta: zeta.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// A new zero expression sharing this expression's parameters.
    pub fn zero_like(&self) -> Self {
        Self::zero(&self.field, &self.zeta)
    }

    pub fn one(field: &Arc<QuadField>, zeta: &Rational) -> Self {
        Self::constant(ExactScalar::one(field), zeta)
    }

    pub fn constant(c: ExactScalar, zeta: &Rational) -> Self {
        let field = Arc::clone(c.field());
        let mut e = Self::zero(&field, zeta);
        e.add_term(Monomial::ONE, c);
        e
    }

    pub fn monomial(field: &Arc<QuadField>, zeta: &Rational, m: Monomial, c: ExactScalar) -> Self {
        let mut e = Self::zero(field, zeta);
        e.add_term(m, c);
        e
    }

    /// Polynomial Σ coeffs[i]·v^i with rational coefficients.
    pub fn polynomial(field: &Arc<QuadField>, zeta: &Rational, coeffs: &[Rational]) -> Self {
        let mut e = Self::zero(field, zeta);
        for (i, c) in coeffs.iter().enumerate() {
            e.add_term(
                Monomial::new(i as u32, 0, 0),
                ExactScalar::from_rational(c.clone(), field),
            );
        }
        e
    }

    pub fn field(&self) -> &Arc<QuadField> {
        &self.field
    }

    pub fn g(&self) -> &Rational {
        self.field.g()
    }

    pub fn zeta(&self) -> &Rational {
        &self.zeta
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Monomial) -> Option<&ExactScalar> {
        self.terms.get(&m)
    }

    pub fn is_log_free(&self) -> bool {
        self.terms.keys().all(|m| m.l == 0)
    }

    /// True when only powers of v occur.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.l == 0 && m.b == 0)
    }

    pub fn degree_v(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.a).max()
    }

    pub fn max_delta_power(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.b).max()
    }

    /// Terms carrying at least one factor of L.
    pub fn log_terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter().filter(|(m, _)| m.l > 0)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn check_params(&self, other: &Self) -> Result<()> {
        if !QuadField::same(&self.field, &other.field) || self.zeta != other.zeta {
            return Err(Error::usage(format!(
                "parameter mismatch: (g, zeta) = ({}, {}) vs ({}, {})",
                format_rational(self.g()),
                format_rational(&self.zeta),
                format_rational(other.g()),
                format_rational(&other.zeta)
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_params(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_params(other)?;
        let mut out = self.zero_like();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = Monomial::new(m1.a + m2.a, m1.b + m2.b, m1.l + m2.l);
                out.add_term(m, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            out.add_term(*m, c * s);
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        let mut out = self.zero_like();
        if r.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.add_term(*m, c.scale(r));
        }
        out
    }

    /// Multiplies by v^k.
    pub fn shift_v(&self, k: u32) -> Self {
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            out.add_term(Monomial::new(m.a + k, m.b, m.l), c.clone());
        }
        out
    }

    /// Multiplies by the rational polynomial Σ coeffs[i]·v^i.
    pub fn mul_poly(&self, coeffs: &[Rational]) -> Self {
        let mut out = self.zero_like();
        for (i, r) in coeffs.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            for (m, c) in &self.terms {
                out.add_term(Monomial::new(m.a + i as u32, m.b, m.l), c.scale(r));
            }
        }
        out
    }

    /// The basis-closed derivative D[E] = (1 + γ²v²)·dE/dv.
    ///
    /// D[v^a δ^b L^l] = a v^{a−1}(1+γ²v²) δ^b L^l − bγ v^a δ^{b−1} L^l
    ///                  + 2lγ² v^{a+1} δ^b L^{l−1}.
    pub fn scaled_diff(&self) -> Self {
        let field = &self.field;
        let g = field.g().clone();
        let gamma = ExactScalar::gamma(field);
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            if m.a > 0 {
                let ca = c.scale(&Rational::from_integer(m.a.into()));
                out.add_term(Monomial::new(m.a - 1, m.b, m.l), ca.clone());
                out.add_term(Monomial::new(m.a + 1, m.b, m.l), ca.scale(&g));
            }
            if m.b > 0 {
                let cb = (c * &gamma).scale(&Rational::from_integer((-(m.b as i64)).into()));
                out.add_term(Monomial::new(m.a, m.b - 1, m.l), cb);
            }
            if m.l > 0 {
                let cl = c.scale(&(&g * Rational::from_integer((2 * m.l as i64).into())));
                out.add_term(Monomial::new(m.a + 1, m.b, m.l - 1), cl);
            }
        }
        out
    }

    /// Ordinary derivative of a pure polynomial in the expansion variable.
    pub fn derivative_poly(&self) -> Result<Self> {
        if !self.is_polynomial() {
            return Err(Error::usage("derivative_poly requires a pure polynomial"));
        }
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            if m.a > 0 {
                out.add_term(
                    Monomial::new(m.a - 1, 0, 0),
                    c.scale(&Rational::from_integer(m.a.into())),
                );
            }
        }
        Ok(out)
    }

    /// Exact value at v = 1, where δ = 0. Fails when L terms are present
    /// (L(1) = ln(1+g) is not a field element).
    pub fn value_at_one(&self) -> Result<ExactScalar> {
        if let Some((m, _)) = self.log_terms().next() {
            return Err(Error::integrity(format!(
                "cannot evaluate exactly at v = 1 with log term {m:?}"
            )));
        }
        let mut acc = ExactScalar::zero(&self.field);
        for (m, c) in &self.terms {
            if m.b == 0 {
                acc = &acc + c;
            }
        }
        Ok(acc)
    }

    /// Exact value at v = 0 for pure polynomials.
    pub fn constant_term(&self) -> ExactScalar {
        self.terms
            .get(&Monomial::ONE)
            .cloned()
            .unwrap_or_else(|| ExactScalar::zero(&self.field))
    }

    /// Evaluates at a rational v, keeping δ symbolic: entry b of the result is
    /// the exact coefficient of δ^b.
    pub fn eval_delta_poly(&self, v: &Rational) -> Result<Vec<ExactScalar>> {
        if !self.is_log_free() {
            return Err(Error::integrity("eval_delta_poly on an expression with log terms"));
        }
        let nb = self.max_delta_power().map_or(0, |b| b as usize + 1);
        let mut out = vec![ExactScalar::zero(&self.field); nb];
        for (m, c) in &self.terms {
            let vp = num_traits::pow(v.clone(), m.a as usize);
            out[m.b as usize] = &out[m.b as usize] + &c.scale(&vp);
        }
        Ok(out)
    }

    /// Floating-point value at numeric (γ, v).
    pub fn eval(&self, gamma: f64, v: f64) -> Result<f64> {
        self.compile(gamma)?.eval(v)
    }

    /// Converts coefficients to doubles once for repeated evaluation.
    pub fn compile(&self, gamma: f64) -> Result<CompiledExpr> {
        check_gamma(self.g(), gamma)?;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, c.to_f64(gamma)))
            .collect();
        Ok(CompiledExpr { gamma, terms })
    }

    pub fn to_json(&self) -> ExprJson {
        ExprJson {
            g: format_rational(self.g()),
            zeta: format_rational(&self.zeta),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    a: m.a,
                    b: m.b,
                    l: m.l,
                    coeff: ScalarJson {
                        a: format_rational(c.rational_part()),
                        b: format_rational(c.gamma_part()),
                    },
                })
                .collect(),
        }
    }

    pub fn from_json(j: &ExprJson) -> Result<Self> {
        let field = QuadField::new(parse_rational(&j.g)?)?;
        let zeta = parse_rational(&j.zeta)?;
        let mut e = Self::zero(&field, &zeta);
        for t in &j.terms {
            let c = ExactScalar::new(
                parse_rational(&t.coeff.a)?,
                parse_rational(&t.coeff.b)?,
                &field,
            );
            e.add_term(Monomial::new(t.a, t.b, t.l), c);
        }
        Ok(e)
    }

    /// Human-readable rendering in the variable `var`.
    pub fn render(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut factors = Vec::new();
            if m.a == 1 {
                factors.push(var.to_string());
            } else if m.a > 1 {
                factors.push(format!("{var}^{}", m.a));
            }
            if m.b == 1 {
                factors.push("δ".to_string());
            } else if m.b > 1 {
                factors.push(format!("δ^{}", m.b));
            }
            if m.l == 1 {
                factors.push("L".to_string());
            } else if m.l > 1 {
                factors.push(format!("L^{}", m.l));
            }
            let coeff = format!("{c}");
            if factors.is_empty() {
                parts.push(format!("({coeff})"));
            } else {
                parts.push(format!("({coeff})·{}", factors.join("·")));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Display for CoeffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("v"))
    }
}

fn check_gamma(g: &Rational, gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::domain(format!("gamma = {gamma} must be positive")));
    }
    let gf = rational_to_f64(g);
    if (gamma * gamma - gf).abs() > 1e-12 * gf.max(1.0) {
        return Err(Error::usage(format!(
            "gamma^2 = {} inconsistent with field parameter g = {gf}",
            gamma * gamma
        )));
    }
    Ok(())
}

/// δ = arctan γ − arctan γv, written as a single atan2 to keep relative
/// accuracy near v = 1.
pub fn delta(gamma: f64, v: f64) -> f64 {
    (gamma * (1.0 - v)).atan2(1.0 + gamma * gamma * v)
}

/// A [`CoeffExpr`] with coefficients rounded to doubles for a fixed γ.
#[derive(Debug, Clone)]
pub struct CompiledExpr {
    gamma: f64,
    terms: Vec<(Monomial, f64)>,
}

impl CompiledExpr {
    pub fn eval(&self, v: f64) -> Result<f64> {
        if !v.is_finite() {
            return Err(Error::domain(format!("v = {v} is not finite")));
        }
        let d = delta(self.gamma, v);
        let l = (self.gamma * self.gamma * v * v).ln_1p();
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| c * v.powi(m.a as i32) * d.powi(m.b as i32) * l.powi(m.l as i32))
            .sum())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub a: String,
    pub b: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub a: u32,
    pub b: u32,
    pub l: u32,
    pub coeff: ScalarJson,
}

/// Wire form of a [`CoeffExpr`]; rationals are canonical `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExprJson {
    pub g: String,
    pub zeta: String,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExprOp {
    Add,
    Mul,
}

pub fn expr_arith(op: ExprOp, e1: &CoeffExpr, e2: &CoeffExpr) -> Result<CoeffExpr> {
    match op {
        ExprOp::Add => e1.checked_add(e2),
        ExprOp::Mul => e1.checked_mul(e2),
    }
}

/// The shared field used for pure polynomials in t (Bessel coefficients), where
/// γ plays no role.
pub fn polynomial_field() -> Arc<QuadField> {
    QuadField::new(Rational::one()).expect("1 is positive")
}
