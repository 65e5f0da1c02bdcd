//! Exact arithmetic in the quadratic field ℚ(γ), γ² = g.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Builds a rational from a machine numerator and denominator.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p
        .parse()
        .map_err(|_| Error::usage(format!("invalid rational numerator in {s:?}")))?;
    let q: BigInt = q
        .parse()
        .map_err(|_| Error::usage(format!("invalid rational denominator in {s:?}")))?;
    if q.is_zero() {
        return Err(Error::domain(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(p, q))
}

/// Canonical `"p/q"` rendering (denominator always present and positive).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::domain(format!("{x} is not finite")))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    // Ratio::to_f64 handles huge numerators/denominators without overflow.
    r.to_f64().unwrap_or(f64::NAN)
}

/// The field parameter g = γ², together with its rational square root when g
/// happens to be a perfect square (then γ itself is rational and the
/// representation a + bγ is folded to b = 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadField {
    g: Rational,
    root: Option<Rational>,
}

impl QuadField {
    pub fn new(g: Rational) -> Result<Arc<Self>> {
        if !g.is_positive() {
            return Err(Error::domain(format!(
                "field parameter g = {} must be positive",
                format_rational(&g)
            )));
        }
        let root = rational_sqrt(&g);
        Ok(Arc::new(QuadField { g, root }))
    }

    pub fn g(&self) -> &Rational {
        &self.g
    }

    /// γ as a rational when g is a perfect square.
    pub fn rational_root(&self) -> Option<&Rational> {
        self.root.as_ref()
    }

    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || a.g == b.g
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    let n = r.numer();
    let d = r.denom();
    if n.is_negative() {
        return None;
    }
    let sn = n.sqrt();
    let sd = d.sqrt();
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rational::new(sn, sd))
}

/// Element a + b·γ of ℚ(γ).
#[derive(Clone)]
pub struct ExactScalar {
    a: Rational,
    b: Rational,
    field: Arc<QuadField>,
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "({})γ", self.b),
            (false, false) => write!(f, "{} + ({})γ", self.a, self.b),
        }
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        QuadField::same(&self.field, &other.field) && self.a == other.a && self.b == other.b
    }
}

impl Eq for ExactScalar {}

impl ExactScalar {
    pub fn new(a: Rational, b: Rational, field: &Arc<QuadField>) -> Self {
        let mut s = ExactScalar {
            a,
            b,
            field: Arc::clone(field),
        };
        s.fold();
        s
    }

    fn fold(&mut self) {
        if let Some(root) = &self.field.root {
            if !self.b.is_zero() {
                self.a += &self.b * root;
                self.b = Rational::zero();
            }
        }
    }

    pub fn zero(field: &Arc<QuadField>) -> Self {
        Self::new(Rational::zero(), Rational::zero(), field)
    }

    pub fn one(field: &Arc<QuadField>) -> Self {
        Self::new(Rational::one(), Rational::zero(), field)
    }

    pub fn from_rational(r: Rational, field: &Arc<QuadField>) -> Self {
        Self::new(r, Rational::zero(), field)
    }

    /// The generator γ itself.
    pub fn gamma(field: &Arc<QuadField>) -> Self {
        Self::new(Rational::zero(), Rational::one(), field)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn gamma_part(&self) -> &Rational {
        &self.b
    }

    pub fn field(&self) -> &Arc<QuadField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if QuadField::same(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "mismatched field parameters g = {} and g = {}",
                format_rational(&self.field.g),
                format_rational(&other.field.g)
            )))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Multiplicative inverse (a − bγ)/(a² − b²g).
    pub fn inv(&self) -> Result<Self> {
        let norm = &self.a * &self.a - &self.b * &self.b * &self.field.g;
        if norm.is_zero() {
            return Err(Error::domain("inversion of zero in the quadratic field"));
        }
        Ok(Self::new(&self.a / &norm, -&self.b / &norm, &self.field))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        ExactScalar {
            a: &self.a * r,
            b: &self.b * r,
            field: Arc::clone(&self.field),
        }
    }

    fn neg_ref(&self) -> Self {
        ExactScalar {
            a: -&self.a,
            b: -&self.b,
            field: Arc::clone(&self.field),
        }
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        ExactScalar {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            field: Arc::clone(&self.field),
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let a = &self.a * &other.a + &self.b * &other.b * &self.field.g;
        let b = &self.a * &other.b + &self.b * &other.a;
        ExactScalar {
            a,
            b,
            field: Arc::clone(&self.field),
        }
    }

    /// Floating value for a numeric γ.
    pub fn to_f64(&self, gamma: f64) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * gamma
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    /// Panics on mismatched fields; use [`ExactScalar::checked_add`] at API boundaries.
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        self.neg_ref()
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        self.neg_ref()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Mul,
    Inv,
    Neg,
}

/// Single entry point for the four field operations; binary ops require `y`.
pub fn scalar_arith(op: ScalarOp, x: &ExactScalar, y: Option<&ExactScalar>) -> Result<ExactScalar> {
    let rhs = || y.ok_or_else(|| Error::usage(format!("{op:?} needs two operands")));
    match op {
        ScalarOp::Add => x.checked_add(rhs()?),
        ScalarOp::Mul => x.checked_mul(rhs()?),
        ScalarOp::Inv => x.inv(),
        ScalarOp::Neg => Ok(-x),
    }
}
