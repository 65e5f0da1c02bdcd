//! Reference values of p_μ^n and q_μ^n.
//!
//! q is built by reduction of order, q = p·J with
//! J(x) = ∫_{−1}^x dt/((1 − t²)p²), which makes q the solution recessive at
//! x = −1 with Wronskian p·q' − p'·q = 1/(1 − x²). In the logit variable
//! u = ln(z/(1 − z)) the integral reads J = ½∫_{u_x}^∞ du/p².

use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::big::{log2_abs, rel_diff, Big, Prec};
use super::hyper::{LegendreProblem, SeriesEval};
use super::ode::integrate;
use super::quad::{gauss_legendre, panel};
use super::{CrossCheck, OracleConfig, OracleValue};

/// Largest z summed directly; beyond it p is carried by the ODE from
/// [`Z_ODE_START`].
const Z_SERIES_MAX: f64 = 0.96;
const Z_ODE_START: f64 = 0.9;
const GL_POINTS: usize = 20;
const MAX_PANELS: usize = 20_000;

/// Where the oracle is evaluated. `Theta` takes z = sin²(θ/2) from double
/// arithmetic as exact, so that points near x = 1 keep their full relative
/// distance 1 − x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleArg {
    X(f64),
    Theta(f64),
}

impl OracleArg {
    fn z(&self, prec: Prec) -> Result<Big> {
        match *self {
            OracleArg::X(x) => {
                if !(x > -1.0 && x < 1.0) {
                    return Err(Error::domain(format!("x = {x} must lie in (−1, 1)")));
                }
                Ok((prec.one() - prec.f(x)) * prec.f(0.5))
            }
            OracleArg::Theta(t) => {
                if !(t > 0.0 && t < PI) {
                    return Err(Error::domain(format!("theta = {t} must lie in (0, π)")));
                }
                let s = (0.5 * t).sin();
                Ok(prec.f(s) * prec.f(s))
            }
        }
    }
}

/// p with its first two x-derivatives and diagnostics of the series.
#[derive(Debug, Clone)]
pub struct PDetails {
    pub p: Big,
    pub dp_dx: Big,
    pub d2p_dx2: Big,
    pub imag_residue: f64,
    /// Relative residual of the differential equation from the
    /// independently summed derivatives (zero by construction on the ODE
    /// path).
    pub ode_residual: f64,
    pub terms: usize,
    pub via_ode: bool,
    pub err_estimate: f64,
}

struct PPoint {
    p: Big,
    dp_dx: Big,
    d2p_dx2: Option<Big>,
    log2_err: f64,
    imag_residue: f64,
    terms: usize,
}

fn from_series(s: SeriesEval, prec: Prec) -> PPoint {
    PPoint {
        dp_dx: -(&s.dp_dz * &prec.f(0.5)),
        d2p_dx2: Some(&s.d2p_dz2 * &prec.f(0.25)),
        p: s.p,
        log2_err: s.log2_err,
        imag_residue: s.imag_residue,
        terms: s.terms,
    }
}

fn p_point(prob: &LegendreProblem, z: &Big, cfg: &OracleConfig) -> Result<PPoint> {
    let prec = prob.prec;
    let tol = work_tol(prob, cfg, cfg.series_tol);
    if z.to_f64().value() <= Z_SERIES_MAX {
        return Ok(from_series(prob.series(z, tol, cfg.max_terms)?, prec));
    }
    let z0 = prec.f(Z_ODE_START);
    let start = from_series(prob.series(&z0, tol, cfg.max_terms)?, prec);
    let one = prec.one();
    let two = prec.int(2);
    let x0 = &one - &(&two * &z0);
    let x1 = &one - &(&two * z);
    let st = integrate(
        prob,
        &x0,
        &start.p,
        &start.dp_dx,
        &x1,
        work_tol(&prob, cfg, cfg.ode_tol),
        cfg.max_terms,
    )?;
    Ok(PPoint {
        p: st.y,
        dp_dx: st.dy,
        d2p_dx2: None,
        log2_err: (start.log2_err.exp2() + st.log2_err.exp2()).log2(),
        imag_residue: start.imag_residue,
        terms: start.terms + st.steps,
    })
}

/// log2 of the working tolerance. Bits of precision added beyond the
/// configured ones (to survive a cancellation) tighten it by as much, so
/// the cancelled result keeps the configured relative accuracy.
fn work_tol(prob: &LegendreProblem, cfg: &OracleConfig, tol: f64) -> f64 {
    let extra = prob.prec.bits().saturating_sub(cfg.prec().bits()) as f64;
    (cfg.log2_tol(tol) - extra).max(prob.prec.log2_eps() + 8.0)
}

fn problem(n: u32, gamma: f64, xi: f64, cfg: &OracleConfig, extra: usize) -> Result<LegendreProblem> {
    cfg.validate()?;
    LegendreProblem::new(n, gamma, xi, cfg.prec().with_extra(extra))
}

/// Coefficients of the ODE at x: (1 − x², −2x, c + n²/(1 − x²)).
fn ode_terms(prob: &LegendreProblem, x: &Big) -> (Big, Big, Big) {
    let prec = prob.prec;
    let e = prec.one() - &(x * x);
    let nn = prec.int(i64::from(prob.n) * i64::from(prob.n));
    let k = &prob.c2 + &(nn / &e);
    (e, -(prec.int(2) * x), k)
}

pub fn p_reference_details(
    n: u32,
    gamma: f64,
    xi: f64,
    arg: OracleArg,
    cfg: &OracleConfig,
) -> Result<PDetails> {
    let prob = problem(n, gamma, xi, cfg, 0)?;
    let prec = prob.prec;
    let z = arg.z(prec)?;
    let pt = p_point(&prob, &z, cfg)?;
    let x = prec.one() - &(prec.int(2) * &z);
    let (e, bx, k) = ode_terms(&prob, &x);
    let via_ode = pt.d2p_dx2.is_none();
    let d2 = match pt.d2p_dx2 {
        Some(d) => d,
        None => (&k * &pt.p - &(&bx * &pt.dp_dx)) / &e,
    };
    let t1 = &e * &d2;
    let t2 = &bx * &pt.dp_dx;
    let t3 = &k * &pt.p;
    let resid = &t1 + &t2 - &t3;
    let scale = log2_abs(&t1).max(log2_abs(&t2)).max(log2_abs(&t3));
    let ode_residual = if resid.repr().is_zero() {
        0.0
    } else {
        (log2_abs(&resid) - scale).exp2()
    };
    Ok(PDetails {
        p: pt.p,
        dp_dx: pt.dp_dx,
        d2p_dx2: d2,
        imag_residue: pt.imag_residue,
        ode_residual,
        terms: pt.terms,
        via_ode,
        err_estimate: pt.log2_err.exp2(),
    })
}

/// Relative residual of (1 − x²)p'' − 2xp' − (n²γ² + n²/(1 − x²) + 2ξ)p at x.
pub fn legendre_ode_residual(n: u32, gamma: f64, xi: f64, x: f64, cfg: &OracleConfig) -> Result<f64> {
    Ok(p_reference_details(n, gamma, xi, OracleArg::X(x), cfg)?.ode_residual)
}

/// p_μ^n(x) and dp/dx.
pub fn p_reference(n: u32, gamma: f64, xi: f64, x: f64, cfg: &OracleConfig) -> Result<OracleValue> {
    p_reference_arg(n, gamma, xi, OracleArg::X(x), cfg)
}

/// p_μ^n(cos θ) and dp/dx.
pub fn p_reference_angle(
    n: u32,
    gamma: f64,
    xi: f64,
    theta: f64,
    cfg: &OracleConfig,
) -> Result<OracleValue> {
    p_reference_arg(n, gamma, xi, OracleArg::Theta(theta), cfg)
}

fn p_reference_arg(n: u32, gamma: f64, xi: f64, arg: OracleArg, cfg: &OracleConfig) -> Result<OracleValue> {
    let d = p_reference_details(n, gamma, xi, arg, cfg)?;
    Ok(OracleValue {
        value: d.p,
        derivative: d.dp_dx,
        err_estimate: d.err_estimate,
    })
}

/// q_μ^n(x) and dq/dx, cross-checked per [`OracleConfig::cross_check`].
pub fn q_reference(n: u32, gamma: f64, xi: f64, x: f64, cfg: &OracleConfig) -> Result<OracleValue> {
    q_reference_arg(n, gamma, xi, OracleArg::X(x), cfg)
}

pub fn q_reference_angle(
    n: u32,
    gamma: f64,
    xi: f64,
    theta: f64,
    cfg: &OracleConfig,
) -> Result<OracleValue> {
    q_reference_arg(n, gamma, xi, OracleArg::Theta(theta), cfg)
}

fn q_reference_arg(n: u32, gamma: f64, xi: f64, arg: OracleArg, cfg: &OracleConfig) -> Result<OracleValue> {
    let v = q_reference_quadrature(n, gamma, xi, arg, cfg)?;
    let check = match cfg.cross_check {
        CrossCheck::Always => true,
        CrossCheck::Never => false,
        CrossCheck::Auto => f64::from(n) * gamma <= cfg.cross_check_max_ngamma,
    };
    if check {
        let w = q_reference_ode(n, gamma, xi, arg, cfg)?;
        let dv = rel_diff(&w.value, &v.value);
        let dd = rel_diff(&w.derivative, &v.derivative);
        if dv > cfg.cross_tol || dd > cfg.cross_tol {
            return Err(Error::integrity(format!(
                "q oracle constructions disagree at n = {n}, gamma = {gamma}, xi = {xi}, {arg:?}: \
                 value {dv:.3e}, derivative {dd:.3e}"
            )));
        }
    }
    Ok(v)
}

/// q = p·J by adaptive Gauss–Legendre quadrature in the logit variable.
pub fn q_reference_quadrature(
    n: u32,
    gamma: f64,
    xi: f64,
    arg: OracleArg,
    cfg: &OracleConfig,
) -> Result<OracleValue> {
    let (v, lost) = q_quadrature_at(&problem(n, gamma, xi, cfg, 0)?, arg, cfg)?;
    if lost <= 16.0 {
        return Ok(v);
    }
    // The subtraction J = K − (…) cancelled; redo with the lost bits restored.
    let extra = lost.ceil() as usize + 16;
    let (v, lost2) = q_quadrature_at(&problem(n, gamma, xi, cfg, extra)?, arg, cfg)?;
    if lost2 > lost + 16.0 {
        return Err(Error::precision(format!(
            "q quadrature cancellation of {lost2:.0} bits persists at higher precision"
        )));
    }
    Ok(v)
}

fn q_quadrature_at(prob: &LegendreProblem, arg: OracleArg, cfg: &OracleConfig) -> Result<(OracleValue, f64)> {
    let prec = prob.prec;
    let one = prec.one();
    let half = prec.f(0.5);
    let tol = work_tol(prob, cfg, cfg.series_tol);
    let z = arg.z(prec)?;
    let at_x = p_point(prob, &z, cfg)?;
    let mid = prob.series(&half, tol, cfg.max_terms)?;
    // K = J(0) = −1/(2p(0)p'(0)) = 1/(p·dp/dz) at z = 1/2.
    let k = &one / &(&mid.p * &mid.dp_dz);
    let omz = &one - &z;
    let u_x = (&z / &omz).ln();
    let uxf = u_x.to_f64().value();
    let mut f = |u: &Big| -> Result<Big> {
        let zu = &one / &(&one + &(-u).exp());
        let pp = p_point(prob, &zu, cfg)?.p;
        Ok(&one / &(&pp * &pp))
    };
    let nf = f64::from(prob.n);
    let gf = prob.c2.to_f64().value().max(0.0).sqrt() / nf;
    let (j, lost) = if uxf < 0.0 {
        let x_f = 1.0 - 2.0 * z.to_f64().value();
        let s = (1.0 + gf * gf * (1.0 - x_f * x_f)).sqrt();
        let w0 = (4.0 / (nf * s)).min(1.0);
        let prune = prob.c2 >= Big::ZERO;
        let (integral, pruned) = march(&mut f, &u_x, &prec.zero(), w0, prob, tol, prune)?;
        let mut j = integral * &half;
        if !pruned {
            j += &k;
        }
        (j, 0.0)
    } else if uxf > 0.0 {
        let w0 = (4.0 / nf).min(1.0);
        let (integral, _) = march(&mut f, &prec.zero(), &u_x, w0, prob, tol, false)?;
        let j = &k - &(integral * &half);
        if j <= Big::ZERO {
            return Err(Error::precision("q quadrature lost all significant bits"));
        }
        (j.clone(), (log2_abs(&k) - log2_abs(&j)).max(0.0))
    } else {
        (k.clone(), 0.0)
    };
    let e = &one - &(&(&one - &(prec.int(2) * &z)) * &(&one - &(prec.int(2) * &z)));
    let q = &at_x.p * &j;
    let dq = &at_x.dp_dx * &j + &one / &(&e * &at_x.p);
    let log2_err = tol.max(at_x.log2_err) + lost;
    Ok((
        OracleValue {
            value: q,
            derivative: dq,
            err_estimate: log2_err.exp2(),
        },
        lost,
    ))
}

/// ∫_a^b f (a < b) marching adaptive panels from a. With `prune`, f is
/// taken as decreasing on [a, 0] and the march stops once the remainder,
/// plus a bound on K, falls below the tolerance; the flag reports whether it
/// did.
fn march<F>(
    f: &mut F,
    a: &Big,
    b: &Big,
    w0: f64,
    prob: &LegendreProblem,
    log2_tol: f64,
    prune: bool,
) -> Result<(Big, bool)>
where
    F: FnMut(&Big) -> Result<Big>,
{
    let prec = prob.prec;
    let rule = gauss_legendre(GL_POINTS, prec);
    let half = prec.f(0.5);
    let mut acc = prec.zero();
    let mut c = a.clone();
    let mut w = w0;
    let inv2n = 0.5 / f64::from(prob.n);
    for _ in 0..MAX_PANELS {
        let remf = (b - &c).to_f64().value();
        if remf <= 0.0 {
            return Ok((acc, false));
        }
        let last = w >= remf;
        let end = if last { b.clone() } else { &c + &prec.f(w) };
        let m = (&c + &end) * &half;
        let whole = panel(&rule, &c, &end, prec, f)?;
        let split = panel(&rule, &c, &m, prec, f)? + panel(&rule, &m, &end, prec, f)?;
        let diff = &whole - &split;
        let scale = log2_abs(&(&acc + &split));
        if diff.repr().is_zero() || log2_abs(&diff) < log2_tol + scale {
            acc += &split;
            c = end;
            w *= 1.5;
            if prune && !last {
                let cf = c.to_f64().value();
                let bound = (0.5 * cf.abs() + inv2n).log2() + log2_abs(&f(&c)?);
                if bound < log2_tol + log2_abs(&acc) - 1.0 {
                    return Ok((acc, true));
                }
            }
        } else {
            w *= 0.5;
            if w < 1e-12 {
                return Err(Error::precision("q quadrature panel width collapsed"));
            }
        }
    }
    Err(Error::precision(format!("q quadrature exceeded {MAX_PANELS} panels")))
}

/// q by Taylor integration of the ODE from x = 0, where
/// q(0) = −1/(2p'(0)) and q'(0) = 1/(2p(0)).
pub fn q_reference_ode(n: u32, gamma: f64, xi: f64, arg: OracleArg, cfg: &OracleConfig) -> Result<OracleValue> {
    let base = problem(n, gamma, xi, cfg, 0)?;
    let prec = base.prec;
    let z = arg.z(prec)?;
    // Toward x = −1 q is recessive: restore the bits the dominant solution
    // p(x)/p(−x) amplifies.
    let extra = if z > prec.f(0.5) {
        let here = p_point(&base, &z, cfg)?.p;
        let mirror = p_point(&base, &(prec.one() - &z), cfg)?.p;
        (log2_abs(&here) - log2_abs(&mirror)).max(0.0).ceil() as usize + 16
    } else {
        0
    };
    let prob = problem(n, gamma, xi, cfg, extra)?;
    let prec = prob.prec;
    let tol = work_tol(&prob, cfg, cfg.series_tol);
    let z = arg.z(prec)?;
    let mid = from_series(prob.series(&prec.f(0.5), tol, cfg.max_terms)?, prec);
    let two = prec.int(2);
    let q0 = -(prec.one() / &(&two * &mid.dp_dx));
    let dq0 = prec.one() / &(&two * &mid.p);
    let x1 = prec.one() - &(&two * &z);
    let st = integrate(
        &prob,
        &prec.zero(),
        &q0,
        &dq0,
        &x1,
        work_tol(&prob, cfg, cfg.ode_tol),
        cfg.max_terms,
    )?;
    Ok(OracleValue {
        value: st.y,
        derivative: st.dy,
        err_estimate: (st.log2_err.exp2() + mid.log2_err.exp2()),
    })
}
