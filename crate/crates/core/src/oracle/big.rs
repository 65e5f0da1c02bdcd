//! Thin helpers over the arbitrary-precision binary float type.

use dashu_float::ops::{Abs, EstimatedLog2, SquareRoot};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

pub type Big = FBig<HalfEven, 2>;

const GUARD_BITS: usize = 32;

/// Working precision in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prec(pub usize);

impl Prec {
    pub fn from_digits(digits: u32) -> Self {
        Prec((f64::from(digits) * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS)
    }

    pub fn with_extra(self, bits: usize) -> Self {
        Prec(self.0 + bits)
    }

    pub fn bits(self) -> usize {
        self.0
    }

    /// Exact conversion of a finite double, then widened to the working
    /// precision.
    pub fn f(self, x: f64) -> Big {
        Big::try_from(x)
            .expect("finite input")
            .with_precision(self.0)
            .value()
    }

    pub fn int(self, i: i64) -> Big {
        Big::from(i).with_precision(self.0).value()
    }

    pub fn zero(self) -> Big {
        self.int(0)
    }

    pub fn one(self) -> Big {
        self.int(1)
    }

    /// log2 of the unit roundoff.
    pub fn log2_eps(self) -> f64 {
        -(self.0 as f64)
    }
}

pub fn to_f64(x: &Big) -> f64 {
    x.to_f64().value()
}

pub fn abs(x: &Big) -> Big {
    x.clone().abs()
}

pub fn sqrt(x: &Big) -> Big {
    x.sqrt()
}

/// Estimated log2|x|; −∞ for zero.
pub fn log2_abs(x: &Big) -> f64 {
    if x.repr().is_zero() {
        f64::NEG_INFINITY
    } else {
        f64::from(x.log2_est())
    }
}

/// ln|x| as a double, valid far outside the double exponent range.
pub fn ln_abs(x: &Big) -> f64 {
    if x.repr().is_zero() {
        return f64::NEG_INFINITY;
    }
    to_f64(&abs(x).ln())
}

pub fn is_negative(x: &Big) -> bool {
    *x < Big::ZERO
}

pub fn powu(x: &Big, n: u32) -> Big {
    let mut acc = Big::ONE.with_precision(x.precision()).value();
    let mut base = x.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// Relative difference |a − b|/|b| as a double (infinite when b = 0 ≠ a).
pub fn rel_diff(a: &Big, b: &Big) -> f64 {
    let d = a - b;
    if d.repr().is_zero() {
        return 0.0;
    }
    if b.repr().is_zero() {
        return f64::INFINITY;
    }
    to_f64(&abs(&(d / b)))
}

/// Minimal complex arithmetic for the hypergeometric coefficients.
#[derive(Debug, Clone)]
pub struct BigComplex {
    pub re: Big,
    pub im: Big,
}

impl BigComplex {
    pub fn new(re: Big, im: Big) -> Self {
        BigComplex { re, im }
    }

    pub fn add_real(&self, r: &Big) -> Self {
        BigComplex::new(&self.re + r, self.im.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        BigComplex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn scale(&self, r: &Big) -> Self {
        BigComplex::new(&self.re * r, &self.im * r)
    }

    pub fn div_real(&self, r: &Big) -> Self {
        BigComplex::new(&self.re / r, &self.im / r)
    }
}
