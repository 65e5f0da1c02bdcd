//! Taylor-series integration of
//! (1 − x²)²y'' − 2x(1 − x²)y' − (c(1 − x²) + n²)y = 0.

use crate::error::{Error, Result};

use super::big::{log2_abs, Big};
use super::hyper::LegendreProblem;

/// Solution and derivative at the end point, with log2 of the estimated
/// relative truncation error.
#[derive(Debug, Clone)]
pub(crate) struct OdeState {
    pub y: Big,
    pub dy: Big,
    pub log2_err: f64,
    pub steps: usize,
}

/// Carries (y, y') from x0 to x1 inside (−1, 1).
pub(crate) fn integrate(
    prob: &LegendreProblem,
    x0: &Big,
    y0: &Big,
    dy0: &Big,
    x1: &Big,
    log2_tol: f64,
    max_terms: usize,
) -> Result<OdeState> {
    let p = prob.prec;
    let one = p.one();
    let two = p.int(2);
    let n2 = p.int(i64::from(prob.n) * i64::from(prob.n));
    let c2f = prob.c2.to_f64().value().abs();
    let nf = f64::from(prob.n);
    let mut x = x0.clone();
    let mut y = y0.clone();
    let mut dy = dy0.clone();
    let mut steps = 0usize;
    let mut err_sum = 0.0f64;
    while x != *x1 {
        let xf = x.to_f64().value();
        let e0 = &one - &(&x * &x);
        let e0f = e0.to_f64().value();
        if !(e0f > 0.0) {
            return Err(Error::domain("ODE integration reached x = ±1"));
        }
        let dist = e0f / (1.0 + xf.abs());
        let rate = (c2f / e0f + nf * nf / (e0f * e0f)).sqrt();
        let h_max = (0.4 * dist).min(8.0 / rate);
        let rem = x1 - &x;
        let remf = rem.to_f64().value();
        let last = remf.abs() <= h_max;
        let h = if last {
            rem
        } else if remf.abs() <= 1.5 * h_max {
            p.f(0.5 * remf)
        } else {
            p.f(h_max.copysign(remf))
        };
        let (ny, ndy, lerr) = taylor_step(prob, &x, &e0, &y, &dy, &h, &n2, &two, log2_tol, max_terms)?;
        err_sum += lerr.exp2();
        y = ny;
        dy = ndy;
        x = if last { x1.clone() } else { &x + &h };
        steps += 1;
        if steps > 1_000_000 {
            return Err(Error::precision("ODE integration exceeded a million steps"));
        }
    }
    Ok(OdeState {
        y,
        dy,
        log2_err: err_sum.max(p.log2_eps().exp2() * steps.max(1) as f64).log2(),
        steps,
    })
}

/// One Taylor step of length h around x0, in the scaled variable u = h·s
/// so that the series coefficients are a_j = y_j h^j.
#[allow(clippy::too_many_arguments)]
fn taylor_step(
    prob: &LegendreProblem,
    x0: &Big,
    e0: &Big,
    y0: &Big,
    dy0: &Big,
    h: &Big,
    n2: &Big,
    two: &Big,
    log2_tol: f64,
    max_terms: usize,
) -> Result<(Big, Big, f64)> {
    let p = prob.prec;
    let e1 = -(two * x0);
    let h2 = h * h;
    // Coefficient polynomials in u, pre-scaled by powers of h.
    let a = [
        e0 * e0,
        two * e0 * &e1 * h,
        (&e1 * &e1 - two * e0) * &h2,
        -(two * &e1) * &(&h2 * h),
        &h2 * &h2,
    ];
    let b = [
        -(two * x0 * e0) * h,
        -(two * &(x0 * &e1 + e0)) * &h2,
        -(two * &(&e1 - x0)) * &(&h2 * h),
        two * &(&h2 * &h2),
    ];
    let c = [
        -(&prob.c2 * e0 + n2) * &h2,
        -(&prob.c2 * &e1) * &(&h2 * h),
        &prob.c2 * &(&h2 * &h2),
    ];
    let mut coef: Vec<Big> = vec![y0.clone(), dy0 * h];
    let mut sum = &coef[0] + &coef[1];
    let mut dsum = coef[1].clone();
    let mut small_run = 0;
    let mut last = f64::NEG_INFINITY;
    for j in 0.. {
        if j + 2 > max_terms {
            return Err(Error::precision(format!(
                "Taylor step did not converge in {max_terms} terms"
            )));
        }
        let mut acc = p.zero();
        for (i, ai) in a.iter().enumerate().skip(1) {
            if i <= j + 2 && j + 2 - i < coef.len() {
                let m = (j + 2 - i) as i64;
                acc += ai * &coef[m as usize] * p.int(m * (m - 1));
            }
        }
        for (i, bi) in b.iter().enumerate() {
            if i <= j + 1 {
                let m = (j + 1 - i) as i64;
                acc += bi * &coef[m as usize] * p.int(m);
            }
        }
        for (i, ci) in c.iter().enumerate() {
            if i <= j {
                acc += ci * &coef[j - i];
            }
        }
        let m = (j + 2) as i64;
        let next = -acc / &(&a[0] * &p.int(m * (m - 1)));
        let jn = p.int(m);
        sum += &next;
        dsum += &next * &jn;
        let mag = log2_abs(&next) + (m as f64).log2();
        coef.push(next);
        let scale = log2_abs(&sum).max(log2_abs(&dsum));
        if m >= 6 && mag < log2_tol + scale - 4.0 {
            small_run += 1;
            last = mag - scale;
            if small_run >= 3 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    Ok((sum, dsum / h, last.max(log2_tol)))
}
