//! Numeric fallback for the coefficient recurrences: samples on a
//! Chebyshev–Lobatto grid, with differentiation and antidifferentiation done
//! in Chebyshev coefficient space.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Left end of the Legendre grid. The recurrence is anchored at v = 1 and
/// v = −1 is a singular point of the differential equation.
pub const DEFAULT_V_LO: f64 = -0.999;
pub const MIN_NODES: usize = 32;
pub const MAX_NODES: usize = 2048;
/// Relative size of the trailing Chebyshev coefficients above which a sample
/// set counts as under-resolved.
pub const TAIL_TOLERANCE: f64 = 1e-13;
const CHOP_FACTOR: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// ω_k(t) on t ∈ [0, 1].
    Bessel,
    /// ψ_k(v) on v ∈ [v_lo, 1].
    Legendre,
}

#[derive(Debug, Clone)]
pub struct SpectralCoeff {
    family: Family,
    gamma: f64,
    xi: f64,
    lo: f64,
    samples: Vec<f64>,
    coeffs: Vec<f64>,
}

impl SpectralCoeff {
    /// Samples `f` on `n` Lobatto nodes. For the Bessel family `gamma` and `xi`
    /// are ignored.
    pub fn from_fn(
        family: Family,
        gamma: f64,
        xi: f64,
        n: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        Self::with_domain(family, gamma, xi, DEFAULT_V_LO, n, f)
    }

    pub fn with_domain(
        family: Family,
        gamma: f64,
        xi: f64,
        v_lo: f64,
        n: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::usage(format!(
                "spectral grid needs at least {MIN_NODES} nodes, got {n}"
            )));
        }
        let lo = match family {
            Family::Bessel => 0.0,
            Family::Legendre => {
                if !(gamma > 0.0) || !gamma.is_finite() {
                    return Err(Error::domain(format!("gamma = {gamma} must be positive")));
                }
                if !xi.is_finite() {
                    return Err(Error::domain("xi must be finite"));
                }
                if !(-1.0 < v_lo && v_lo < 1.0) {
                    return Err(Error::domain(format!("v_lo = {v_lo} must lie in (-1, 1)")));
                }
                v_lo
            }
        };
        let nodes = lobatto_nodes(lo, n);
        let samples: Vec<f64> = nodes.iter().map(|&v| f(v)).collect();
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::domain("non-finite sample on spectral grid"));
        }
        Ok(Self::from_samples(family, gamma, xi, lo, samples))
    }

    /// ψ_0 = 1 or ω_0 = 1.
    pub fn one(family: Family, gamma: f64, xi: f64, n: usize) -> Result<Self> {
        Self::from_fn(family, gamma, xi, n, |_| 1.0)
    }

    fn from_samples(family: Family, gamma: f64, xi: f64, lo: f64, samples: Vec<f64>) -> Self {
        let coeffs = values_to_coeffs(&samples);
        SpectralCoeff {
            family,
            gamma,
            xi,
            lo,
            samples,
            coeffs,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, 1.0)
    }

    pub fn nodes(&self) -> Vec<f64> {
        lobatto_nodes(self.lo, self.n())
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn chebyshev_coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Largest of the last eighth of the Chebyshev coefficients, relative to
    /// the largest coefficient overall.
    pub fn tail_ratio(&self) -> f64 {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let start = self.coeffs.len() - (self.coeffs.len() / 8).max(2);
        let tail = self.coeffs[start..]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
        tail / scale
    }

    /// Interpolant value. Grid nodes return the stored samples exactly.
    pub fn eval(&self, v: f64) -> f64 {
        let (lo, hi) = self.domain();
        let nodes = self.nodes();
        if let Some(j) = nodes.iter().position(|&x| x == v) {
            return self.samples[j];
        }
        clenshaw(&self.coeffs, to_unit(v, lo, hi))
    }
}

/// Lobatto nodes mapped to [lo, 1], ordered from v = 1 downwards.
fn lobatto_nodes(lo: f64, n: usize) -> Vec<f64> {
    let m = (n - 1) as f64;
    (0..n)
        .map(|j| {
            if j == 0 {
                1.0
            } else if j == n - 1 {
                lo
            } else {
                let x = (PI * j as f64 / m).cos();
                from_unit(x, lo, 1.0)
            }
        })
        .collect()
}

fn from_unit(x: f64, lo: f64, hi: f64) -> f64 {
    0.5 * (hi + lo) + 0.5 * (hi - lo) * x
}

fn to_unit(v: f64, lo: f64, hi: f64) -> f64 {
    (2.0 * v - hi - lo) / (hi - lo)
}

fn values_to_coeffs(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let m = n - 1;
    let period = 2 * m;
    let cos_table: Vec<f64> = (0..period)
        .map(|i| (PI * i as f64 / m as f64).cos())
        .collect();
    (0..n)
        .map(|k| {
            let mut s = 0.5 * (f[0] + f[m] * if k % 2 == 0 { 1.0 } else { -1.0 });
            for (j, fj) in f.iter().enumerate().take(m).skip(1) {
                s += fj * cos_table[(j * k) % period];
            }
            let c = 2.0 * s / m as f64;
            if k == 0 || k == m {
                0.5 * c
            } else {
                c
            }
        })
        .collect()
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + c[0]
}

/// Drops the trailing coefficients that sit at rounding level, so that
/// differentiation does not amplify them.
fn chop(c: &[f64]) -> Vec<f64> {
    let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let tau = CHOP_FACTOR * f64::EPSILON * scale;
    let keep = c.iter().rposition(|x| x.abs() > tau).map_or(1, |k| k + 1);
    let mut out = c.to_vec();
    out[keep..].iter_mut().for_each(|x| *x = 0.0);
    out
}

/// d/dx of a Chebyshev series on [−1, 1].
fn cheb_derivative(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    let mut d = vec![0.0; n];
    if n < 2 {
        return d;
    }
    for k in (1..n).rev() {
        let next = if k + 1 < n { d[k + 1] } else { 0.0 };
        d[k - 1] = next + 2.0 * k as f64 * c[k];
    }
    d[0] *= 0.5;
    d
}

/// An antiderivative on [−1, 1] (constant term zero), one degree higher.
fn cheb_antiderivative(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    let at = |k: usize| if k < n { c[k] } else { 0.0 };
    let mut out = vec![0.0; n + 1];
    out[1] = at(0) - 0.5 * at(2);
    for (k, o) in out.iter_mut().enumerate().skip(2) {
        *o = (at(k - 1) - at(k + 1)) / (2.0 * k as f64);
    }
    out
}

/// One recurrence step on the grid.
///
/// Legendre: ψ_{k+1} = (1−v²)(1+γ²v²)ψ̇_k/(2(1+γ²))
///   − ∫₁ᵛ [(5γ²v² + 1 − γ²)/(8(1+γ²)) + ζ/(1+γ²v²)] ψ_k dv.
///
/// Bessel: ω_{k+1} = ½t²(1−t²)ω̇_k + ⅛∫₀ᵗ(1−5t²)ω_k dt.
pub fn spectral_step(s: &SpectralCoeff, family: Family) -> Result<SpectralCoeff> {
    if s.family != family {
        return Err(Error::usage(format!(
            "samples belong to the {:?} family, step requested for {:?}",
            s.family, family
        )));
    }
    let tail = s.tail_ratio();
    if tail > TAIL_TOLERANCE {
        return Err(Error::Resolution(format!(
            "spectral tail {tail:.3e} exceeds {TAIL_TOLERANCE:.0e} at N = {}",
            s.n()
        )));
    }
    let (lo, hi) = s.domain();
    let half = 0.5 * (hi - lo);
    let nodes = s.nodes();
    let mut deriv = cheb_derivative(&chop(&s.coeffs));
    deriv.iter_mut().for_each(|d| *d /= half);

    let integrand: Vec<f64> = match family {
        Family::Legendre => {
            let g = s.gamma * s.gamma;
            let zeta = s.xi - 0.125;
            nodes
                .iter()
                .zip(&s.samples)
                .map(|(&v, &psi)| {
                    let w = (5.0 * g * v * v + 1.0 - g) / (8.0 * (1.0 + g)) + zeta / (1.0 + g * v * v);
                    w * psi
                })
                .collect()
        }
        Family::Bessel => nodes
            .iter()
            .zip(&s.samples)
            .map(|(&t, &w)| (1.0 - 5.0 * t * t) * w / 8.0)
            .collect(),
    };
    let mut anti = cheb_antiderivative(&chop(&values_to_coeffs(&integrand)));
    anti.iter_mut().for_each(|a| *a *= half);

    let samples: Vec<f64> = match family {
        Family::Legendre => {
            let g = s.gamma * s.gamma;
            let at_one = clenshaw(&anti, 1.0);
            let mut out: Vec<f64> = nodes
                .iter()
                .map(|&v| {
                    let x = to_unit(v, lo, hi);
                    let d = clenshaw(&deriv, x);
                    (1.0 - v * v) * (1.0 + g * v * v) * d / (2.0 * (1.0 + g))
                        - (clenshaw(&anti, x) - at_one)
                })
                .collect();
            out[0] = 0.0;
            out
        }
        Family::Bessel => {
            let at_zero = clenshaw(&anti, -1.0);
            nodes
                .iter()
                .map(|&t| {
                    let x = to_unit(t, lo, hi);
                    0.5 * t * t * (1.0 - t * t) * clenshaw(&deriv, x) + clenshaw(&anti, x) - at_zero
                })
                .collect()
        }
    };
    Ok(SpectralCoeff::from_samples(family, s.gamma, s.xi, lo, samples))
}

/// Runs the recurrence from the constant 1 up to order `k`, doubling the
/// node count from [`MIN_NODES`] whenever a step reports an under-resolved
/// input. Returns orders 0..=k at the final resolution.
pub fn spectral_sequence(family: Family, gamma: f64, xi: f64, k: usize) -> Result<Vec<SpectralCoeff>> {
    let mut n = MIN_NODES;
    loop {
        match try_sequence(family, gamma, xi, k, n) {
            Ok(seq) => {
                // The last member is never checked by a step; resolve it too.
                if seq.last().map_or(0.0, |s| s.tail_ratio()) <= TAIL_TOLERANCE {
                    return Ok(seq);
                }
            }
            Err(Error::Resolution(msg)) => log::debug!("{msg}; doubling N"),
            Err(e) => return Err(e),
        }
        n *= 2;
        if n > MAX_NODES {
            return Err(Error::Resolution(format!(
                "spectral recurrence unresolved at N = {MAX_NODES}"
            )));
        }
    }
}

fn try_sequence(family: Family, gamma: f64, xi: f64, k: usize, n: usize) -> Result<Vec<SpectralCoeff>> {
    let mut seq = vec![SpectralCoeff::one(family, gamma, xi, n)?];
    for _ in 0..k {
        let next = spectral_step(seq.last().unwrap(), family)?;
        seq.push(next);
    }
    Ok(seq)
}
