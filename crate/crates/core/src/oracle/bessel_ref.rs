//! Reference values of I_n(z) and K_n(z).

use crate::bessel::BesselKind;
use crate::error::{Error, Result};

use super::big::{log2_abs, powu, Big, Prec};
use super::{OracleConfig, OracleValue};

/// A Bessel function with its first two z-derivatives, each summed
/// independently.
#[derive(Debug, Clone)]
pub struct BesselRefDetails {
    pub value: Big,
    pub derivative: Big,
    pub second: Big,
    pub err_estimate: f64,
    /// Series terms (I) or trapezoid nodes (K).
    pub terms: usize,
}

impl BesselRefDetails {
    fn oracle(self) -> OracleValue {
        OracleValue {
            value: self.value,
            derivative: self.derivative,
            err_estimate: self.err_estimate,
        }
    }
}

fn check_z(z: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("argument z = {z} must be positive")));
    }
    Ok(())
}

/// I_n(z) and I_n'(z) from the power series.
pub fn bessel_i_reference(n: u32, z: f64, cfg: &OracleConfig) -> Result<OracleValue> {
    Ok(i_details(n, z, cfg)?.oracle())
}

/// K_n(z) and K_n'(z) = −(K_{n−1}(z) + K_{n+1}(z))/2.
pub fn bessel_k_reference(n: u32, z: f64, cfg: &OracleConfig) -> Result<OracleValue> {
    Ok(k_details(n, z, cfg)?.oracle())
}

pub(crate) fn i_details(n: u32, z: f64, cfg: &OracleConfig) -> Result<BesselRefDetails> {
    cfg.validate()?;
    check_z(z)?;
    let prec = cfg.prec();
    let tol = cfg.log2_tol(cfg.series_tol);
    let zb = prec.f(z);
    let half_z = &zb * &prec.f(0.5);
    let q = &half_z * &half_z;
    let mut t = powu(&half_z, n);
    for k in 2..=n {
        t /= prec.int(i64::from(k));
    }
    let mut s0 = prec.zero();
    let mut s1 = prec.zero();
    let mut s2 = prec.zero();
    let nf = f64::from(n);
    let qf = 0.25 * z * z;
    for j in 0..cfg.max_terms {
        let m = i64::from(n) + 2 * j as i64;
        let w1 = &t * &prec.int(m);
        let w2 = &w1 * &prec.int(m - 1);
        s0 += &t;
        s1 += &w1;
        s2 += &w2;
        let jf = j as f64;
        let rho = qf / ((jf + 1.0) * (nf + jf + 1.0));
        if rho < 0.5 {
            let lt = log2_abs(&t) + (rho / (1.0 - rho)).log2();
            let w = (nf + 2.0 * jf + 4.0 / (1.0 - rho)).log2();
            if lt + 2.0 * w < tol + log2_abs(&s0) {
                let z2 = &zb * &zb;
                return Ok(BesselRefDetails {
                    value: s0,
                    derivative: s1 / &zb,
                    second: s2 / &z2,
                    err_estimate: tol.exp2() + prec.log2_eps().exp2() * (j + 1) as f64,
                    terms: j + 1,
                });
            }
        }
        t = &t * &q / &(prec.int(j as i64 + 1) * prec.int(i64::from(n) + j as i64 + 1));
    }
    Err(Error::precision(format!(
        "I_{n}({z}) series did not converge in {} terms",
        cfg.max_terms
    )))
}

/// Trapezoidal sums of ∫_0^∞ e^{−z cosh t} w(t) dt for the weights
/// cosh(nt), −½[cosh((n−1)t) + cosh((n+1)t)] and cosh²t·cosh(nt); the rule
/// converges geometrically in 1/h, so halving stops once two levels agree to
/// half the target digits.
pub(crate) fn k_details(n: u32, z: f64, cfg: &OracleConfig) -> Result<BesselRefDetails> {
    cfg.validate()?;
    check_z(z)?;
    let prec = cfg.prec();
    let tol = cfg.log2_tol(cfg.series_tol);
    let t_end = cutoff(n, z, prec);
    let zb = prec.f(z);
    let half = prec.f(0.5);
    let eval = |x: &Big| -> [Big; 3] {
        // x = e^t
        let inv = prec.one() / x;
        let c1 = (x + &inv) * &half;
        let xn = powu(x, n);
        let xin = prec.one() / &xn;
        let cn = (&xn + &xin) * &half;
        let cm = (&xn * &inv + &xin * x) * &half;
        let cp = (&xn * x + &xin * &inv) * &half;
        let e = (-(&zb * &c1)).exp();
        [&e * &cn, -(&e * &((cm + cp) * &half)), &e * &(&c1 * &c1 * &cn)]
    };
    let mut h = 0.5f64;
    let mut sums = {
        let f0 = eval(&prec.one());
        let mut acc = f0.map(|v| v * &half);
        let mut count = 1;
        let step = prec.f(h).exp();
        let mut x = step.clone();
        let mut t = h;
        while t <= t_end {
            let f = eval(&x);
            for (a, v) in acc.iter_mut().zip(f) {
                *a += v;
            }
            x = &x * &step;
            t += h;
            count += 1;
        }
        (acc, count)
    };
    let mut prev = sums.0.clone().map(|v| v * &prec.f(h));
    for _ in 0..24 {
        h *= 0.5;
        let step = prec.f(h).exp();
        let step2 = &step * &step;
        let mut x = step.clone();
        let mut t = h;
        while t <= t_end {
            let f = eval(&x);
            for (a, v) in sums.0.iter_mut().zip(f) {
                *a += v;
            }
            x = &x * &step2;
            t += 2.0 * h;
            sums.1 += 1;
        }
        let hb = prec.f(h);
        let cur = sums.0.clone().map(|v| v * &hb);
        let worst = cur
            .iter()
            .zip(&prev)
            .map(|(c, p)| {
                let d = c - p;
                if d.repr().is_zero() {
                    f64::NEG_INFINITY
                } else {
                    log2_abs(&d) - log2_abs(c)
                }
            })
            .fold(f64::NEG_INFINITY, f64::max);
        if worst < 0.5 * tol - 4.0 {
            let [k, dk, d2k] = cur;
            return Ok(BesselRefDetails {
                value: k,
                derivative: dk,
                second: d2k,
                err_estimate: tol.exp2() + prec.log2_eps().exp2() * sums.1 as f64,
                terms: sums.1,
            });
        }
        prev = cur;
    }
    Err(Error::precision(format!("K_{n}({z}) trapezoid rule did not converge")))
}

/// Truncation point of the integral: where −z cosh t + (n + 2)t has fallen
/// below its maximum by the working precision plus a margin.
fn cutoff(n: u32, z: f64, prec: Prec) -> f64 {
    let a = f64::from(n) + 2.0;
    let phi = |t: f64| -z * t.cosh() + a * t;
    let t_star = (a / z).asinh();
    let target = phi(t_star) - (prec.bits() as f64 + 16.0) * std::f64::consts::LN_2;
    let mut t = t_star.max(0.5);
    while phi(t) > target {
        t += 0.125;
    }
    t
}

/// Relative residual of y'' + y'/z − (1 + n²/z²)y for y = I_n or K_n at
/// z = nλ, from the independently summed derivatives.
pub fn bessel_ode_residual(n: u32, lambda: f64, kind: BesselKind, cfg: &OracleConfig) -> Result<f64> {
    let z = f64::from(n) * lambda;
    let d = match kind {
        BesselKind::I | BesselKind::DI => i_details(n, z, cfg)?,
        BesselKind::K | BesselKind::DK => k_details(n, z, cfg)?,
    };
    let prec = cfg.prec();
    let zb = prec.f(z);
    let t2 = &d.derivative / &zb;
    let nn = prec.int(i64::from(n) * i64::from(n));
    let t3 = (prec.one() + &(nn / &(&zb * &zb))) * &d.value;
    let r = &d.second + &t2 - &t3;
    if r.repr().is_zero() {
        return Ok(0.0);
    }
    let scale = log2_abs(&d.second).max(log2_abs(&t2)).max(log2_abs(&t3));
    Ok((log2_abs(&r) - scale).exp2())
}
