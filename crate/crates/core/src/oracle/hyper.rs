//! p_μ^n from the hypergeometric series in z = (1 − x)/2.

use crate::error::{Error, Result};

use super::big::{log2_abs, powu, sqrt, BigComplex, Big, Prec};

/// Legendre data shared by the series, the ODE integrator and the
/// quadrature: the order n and c = n²γ² + 2ξ = −μ(μ + 1).
#[derive(Debug, Clone)]
pub(crate) struct LegendreProblem {
    pub n: u32,
    pub c2: Big,
    pub prec: Prec,
    /// −μ and μ + 1.
    a: BigComplex,
    b: BigComplex,
    n_factorial: Big,
}

/// p and its first two z-derivatives at one point.
#[derive(Debug, Clone)]
pub(crate) struct SeriesEval {
    pub p: Big,
    pub dp_dz: Big,
    pub d2p_dz2: Big,
    /// |Im Σ| / |Re Σ| of the complex-coefficient sum; zero in exact
    /// arithmetic.
    pub imag_residue: f64,
    pub terms: usize,
    /// log2 of the estimated relative error.
    pub log2_err: f64,
}

impl LegendreProblem {
    pub fn new(n: u32, gamma: f64, xi: f64, prec: Prec) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("order n must be at least 1"));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::domain(format!("gamma = {gamma} must be positive")));
        }
        if !xi.is_finite() {
            return Err(Error::domain("xi must be finite"));
        }
        let nb = prec.int(i64::from(n));
        let gb = prec.f(gamma);
        let c2 = &nb * &nb * &gb * &gb + prec.f(2.0 * xi);
        // μ = −1/2 + sqrt(1/4 − c), taken on the imaginary axis when c > 1/4.
        let half = prec.f(0.5);
        let disc = prec.f(0.25) - &c2;
        let mu = if disc < Big::ZERO {
            BigComplex::new(-half.clone(), sqrt(&(-disc)))
        } else {
            BigComplex::new(sqrt(&disc) - &half, prec.zero())
        };
        let a = BigComplex::new(-mu.re.clone(), -mu.im.clone());
        let b = mu.add_real(&prec.one());
        let mut fact = prec.one();
        for k in 2..=n {
            fact *= prec.int(i64::from(k));
        }
        Ok(LegendreProblem {
            n,
            c2,
            prec,
            a,
            b,
            n_factorial: fact,
        })
    }

    /// Sum of the series for 0 < z < 1 with relative tail below 2^log2_tol.
    pub fn series(&self, z: &Big, log2_tol: f64, max_terms: usize) -> Result<SeriesEval> {
        let p = self.prec;
        let zf = z.to_f64().value();
        if !(zf > 0.0 && zf < 1.0) {
            return Err(Error::domain(format!("series argument z = {zf} outside (0, 1)")));
        }
        let nf = f64::from(self.n);
        let c2f = self.c2.to_f64().value();
        let one = p.one();
        let mut t = BigComplex::new(one.clone(), p.zero());
        let mut s0 = t.clone();
        let mut s1 = BigComplex::new(p.zero(), p.zero());
        let mut s2 = BigComplex::new(p.zero(), p.zero());
        let mut max_log2 = 0.0f64;
        let mut k: usize = 0;
        loop {
            if k >= max_terms {
                return Err(Error::precision(format!(
                    "hypergeometric series did not converge in {max_terms} terms at z = {zf}"
                )));
            }
            let kb = p.int(k as i64);
            let coeff = self.a.add_real(&kb).mul(&self.b.add_real(&kb));
            let den = (p.int(i64::from(self.n) + 1) + &kb) * (&kb + &one);
            t = t.mul(&coeff).scale(z).div_real(&den);
            k += 1;
            if t.re.repr().is_zero() && t.im.repr().is_zero() {
                break;
            }
            let kk = p.int(k as i64);
            let w1 = t.scale(&kk);
            let w2 = w1.scale(&(&kk - &one));
            s0 = BigComplex::new(&s0.re + &t.re, &s0.im + &t.im);
            s1 = BigComplex::new(&s1.re + &w1.re, &s1.im + &w1.im);
            s2 = BigComplex::new(&s2.re + &w2.re, &s2.im + &w2.im);
            let lt = log2_abs(&t.re);
            max_log2 = max_log2.max(lt);
            // Term ratio z(k² + k + c)/((n + 1 + k)(k + 1)) at the next step.
            let kf = k as f64;
            let ratio = zf * (kf * kf + kf + c2f) / ((nf + 1.0 + kf) * (kf + 1.0));
            if ratio < 1.0 && k >= 2 {
                let rho = ratio.max(zf);
                let geo = (rho / (1.0 - rho)).log2();
                let w = (kf + 2.0 / (1.0 - rho)).log2();
                let ok0 = lt + geo < log2_tol + log2_abs(&s0.re);
                let ok1 = lt + geo + w < log2_tol + log2_abs(&s1.re);
                let ok2 = lt + geo + 2.0 * w + 1.0 < log2_tol + log2_abs(&s2.re);
                if ok0 && ok1 && ok2 {
                    break;
                }
            }
        }
        let lost = (max_log2 - log2_abs(&s0.re)).max(0.0);
        let log2_err = log2_tol.max(p.log2_eps() + lost + (k as f64).log2() + 1.0);
        let imag_residue = if s0.im.repr().is_zero() {
            0.0
        } else {
            (log2_abs(&s0.im) - log2_abs(&s0.re)).exp2()
        };
        let (f, f1, f2) = (s0.re, &s1.re / z, &s2.re / &(z * z));
        // A = (z/(1 − z))^{n/2}/n!, A'/A = r, A''/A = r² + r'.
        let omz = &one - z;
        let amp = powu(&sqrt(&(z / &omz)), self.n) / &self.n_factorial;
        let zz = z * &omz;
        let half_n = p.f(0.5 * nf);
        let r = &half_n / &zz;
        let dr = -(&half_n * (&one - &(p.int(2) * z))) / &(&zz * &zz);
        let pv = &amp * &f;
        let dp = &amp * &(&r * &f + &f1);
        let d2p = &amp * &((&r * &r + &dr) * &f + p.int(2) * &r * &f1 + &f2);
        Ok(SeriesEval {
            p: pv,
            dp_dz: dp,
            d2p_dz2: d2p,
            imag_residue,
            terms: k,
            log2_err,
        })
    }
}
