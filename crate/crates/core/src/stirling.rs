//! Bernoulli numbers, the Stirling series and log-factorials.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::kernel::{rat, Rational};

/// Exact Bernoulli numbers B_0..=B_m (convention B_1 = −1/2).
pub fn bernoulli(m: usize) -> Vec<Rational> {
    let mut b = vec![Rational::one()];
    for k in 1..=m {
        let mut binom = BigInt::one();
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            // binom = C(k+1, j)
            acc += bj * Rational::from_integer(binom.clone());
            binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / Rational::from_integer(BigInt::from(k + 1)));
    }
    b
}

/// Coefficients c_0..=c_k of exp(−Σ_{j≥1} B_{2j}/(2j(2j−1)) n^{1−2j}) as a
/// series in 1/n, i.e. of √(2πn)(n/e)^n / n!.
pub fn inverse_stirling_coeffs(k: usize) -> Vec<Rational> {
    let b = bernoulli(k + 1);
    // s[i] is the coefficient of n^{-i} in the exponent.
    let mut s = vec![Rational::zero(); k + 1];
    for (i, si) in s.iter_mut().enumerate().skip(1).step_by(2) {
        let two_j = i as i64 + 1;
        *si = -&b[i + 1] / rat(two_j * (two_j - 1), 1);
    }
    let mut c = vec![Rational::one()];
    for n in 1..=k {
        let mut acc = Rational::zero();
        for i in 1..=n {
            acc += rat(i as i64, 1) * &s[i] * &c[n - i];
        }
        c.push(acc / rat(n as i64, 1));
    }
    c
}

const DIRECT_LIMIT: u64 = 256;

/// ln n!, by direct summation for small n and the Stirling series otherwise.
pub fn ln_factorial(n: u64) -> f64 {
    if n <= DIRECT_LIMIT {
        return (2..=n).map(|j| (j as f64).ln()).sum();
    }
    let x = n as f64;
    let b: [f64; 4] = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0];
    let mut corr = 0.0;
    let mut p = x;
    for c in b {
        corr += c / p;
        p *= x * x;
    }
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + corr
}
