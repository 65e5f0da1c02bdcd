//! Invariant suites behind the `check` command, plus the measurements they
//! are built from.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bessel::{eta, eval_bessel, omega, omega_bar, BesselKind, BesselParams};
use crate::error::{Error, Result};
use crate::kernel::{rat, spectral_sequence, CoeffExpr, ExactScalar, Family, QuadField, Rational};
use crate::legendre::{
    chain, cross_relation_check, eta_tilde, exact_params, eval_bessel_form, eval_legendre, LegendreKind, LegendreParams,
};
use crate::oracle::{
    big::rel_diff,
    bessel_i_reference, bessel_k_reference, bessel_ode_residual, legendre_ode_residual, limit_check_bessel,
    p_reference, p_reference_angle, p_reference_details, q_reference, q_reference_angle, q_reference_ode,
    q_reference_quadrature, relative_error, OracleArg, OracleConfig,
};
use crate::stirling::ln_factorial;
use crate::K_MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Kernel,
    Bessel,
    Legendre,
    Oracle,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kernel" => Ok(Suite::Kernel),
            "bessel" => Ok(Suite::Bessel),
            "legendre" => Ok(Suite::Legendre),
            "oracle" => Ok(Suite::Oracle),
            "all" => Ok(Suite::All),
            _ => Err(Error::usage(format!(
                "unknown suite {s:?} (kernel | bessel | legendre | oracle | all)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "{}: {} ({})",
            self.name,
            if self.pass { "pass" } else { "FAIL" },
            self.detail
        )
    }
}

type Outcome = Result<(bool, String)>;

fn record(suite: &'static str, name: &'static str, f: impl FnOnce() -> Outcome) -> CheckResult {
    let (pass, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckResult {
        suite,
        name,
        pass,
        detail,
    }
}

pub fn run_suite(suite: Suite, cfg: &OracleConfig) -> Vec<CheckResult> {
    match suite {
        Suite::Kernel => kernel_suite(),
        Suite::Bessel => bessel_suite(cfg),
        Suite::Legendre => legendre_suite(),
        Suite::Oracle => oracle_suite(cfg),
        Suite::All => {
            let mut v = kernel_suite();
            v.extend(bessel_suite(cfg));
            v.extend(legendre_suite());
            v.extend(oracle_suite(cfg));
            v
        }
    }
}

/// Rational (g, ζ) pairs used across the exact suites.
pub fn sample_params() -> Vec<(Rational, Rational)> {
    vec![
        (rat(1, 1), rat(-1, 8)),
        (rat(5, 3), rat(-2, 7)),
        (rat(2, 1), rat(0, 1)),
        (rat(1, 4), rat(7, 8)),
        (rat(9, 2), rat(-3, 2)),
    ]
}

// ---------------------------------------------------------------- measurements

/// Largest |symbolic − spectral| over a 33-point grid in [v_lo, 1] for
/// ψ_0..=ψ_k at (γ, ξ).
pub fn mode_agreement(gamma: f64, xi: f64, k: usize) -> Result<f64> {
    let spectral = spectral_sequence(Family::Legendre, gamma, xi, k)?;
    let (g, zeta) = exact_params(gamma, xi)?;
    let exact = chain(&g, &zeta)?.psi_upto(k)?;
    let (lo, hi) = spectral[0].domain();
    let mut worst = 0.0f64;
    for (s, e) in spectral.iter().zip(&exact) {
        let c = e.compile(gamma)?;
        for i in 0..33 {
            let v = lo + (hi - lo) * i as f64 / 32.0;
            worst = worst.max((s.eval(v) - c.eval(v)?).abs());
        }
    }
    Ok(worst)
}

/// |z·[I'K − K'I] − 1| at z = nλ from the expansions at order m.
pub fn bessel_wronskian_residual(n: u32, lambda: f64, m: usize) -> Result<f64> {
    let e = |kind| -> Result<f64> { Ok(eval_bessel(&BesselParams::new(n, lambda, m, kind)?)?.scaled().to_f64()) };
    let w = e(BesselKind::DI)? * e(BesselKind::K)? - e(BesselKind::DK)? * e(BesselKind::I)?;
    Ok((f64::from(n) * lambda * w - 1.0).abs())
}

/// |n·[p·dq − dp·q]·(1 − x²) − 1| from the expansions at x = cos θ.
pub fn legendre_wronskian_residual(n: u32, gamma: f64, xi: f64, theta: f64, m: usize) -> Result<f64> {
    let e = |kind| -> Result<f64> {
        Ok(eval_legendre(&LegendreParams::at_angle(n, gamma, xi, theta, m, kind)?)?.scaled().to_f64())
    };
    let w = e(LegendreKind::P)? * e(LegendreKind::Dq)? - e(LegendreKind::Dp)? * e(LegendreKind::Q)?;
    Ok((f64::from(n) * w * theta.sin().powi(2) - 1.0).abs())
}

/// Relative residual of the Legendre ODE for the m-truncated p expansion,
/// with derivatives from eighth-order central differences of step h.
pub fn expansion_ode_residual(n: u32, gamma: f64, xi: f64, x: f64, m: usize, h: f64) -> Result<f64> {
    if !(x - 4.0 * h > -1.0 && x + 4.0 * h < 1.0) {
        return Err(Error::domain("difference stencil leaves (−1, 1)"));
    }
    let f = |y: f64| -> Result<f64> {
        Ok(eval_legendre(&LegendreParams::new(n, gamma, xi, y, m, LegendreKind::P)?)?.value)
    };
    let mut s = [0.0; 9];
    for (i, v) in s.iter_mut().enumerate() {
        *v = f(x + (i as f64 - 4.0) * h)?;
    }
    let d = |j: usize| s[4 + j] - s[4 - j];
    let a = |j: usize| s[4 + j] + s[4 - j];
    let d1 = (0.8 * d(1) - 0.2 * d(2) + 4.0 / 105.0 * d(3) - d(4) / 280.0) / h;
    let d2 = (-205.0 / 72.0 * s[4] + 1.6 * a(1) - 0.2 * a(2) + 8.0 / 315.0 * a(3) - a(4) / 560.0) / (h * h);
    let e = 1.0 - x * x;
    let nf = f64::from(n);
    let k = nf * nf * gamma * gamma + nf * nf / e + 2.0 * xi;
    let t1 = e * d2;
    let t2 = -2.0 * x * d1;
    let t3 = k * s[4];
    Ok((t1 + t2 - t3).abs() / t1.abs().max(t2.abs()).max(t3.abs()))
}

/// Oracle relative errors (|Δp_m|, |Δq_m|) of the plain expansion on the
/// cone-angle grid.
pub fn cone_errors(n: u32, lambda: f64, theta: f64, xi: f64, orders: &[usize], cfg: &OracleConfig) -> Result<Vec<(f64, f64)>> {
    let gamma = lambda / theta.sin();
    let p = p_reference_angle(n, gamma, xi, theta, cfg)?;
    let q = q_reference_angle(n, gamma, xi, theta, cfg)?;
    orders
        .iter()
        .map(|&m| {
            let ep = eval_legendre(&LegendreParams::at_angle(n, gamma, xi, theta, m, LegendreKind::P)?)?;
            let eq = eval_legendre(&LegendreParams::at_angle(n, gamma, xi, theta, m, LegendreKind::Q)?)?;
            Ok((
                relative_error(&p.value, &ep.scaled()).abs(),
                relative_error(&q.value, &eq.scaled()).abs(),
            ))
        })
        .collect()
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
}

// ---------------------------------------------------------------- kernel

fn kernel_suite() -> Vec<CheckResult> {
    const S: &str = "kernel";
    vec![
        record(S, "field_axioms", || {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut r = |lo: i64, hi: i64| rat(rng.gen_range(lo..hi), rng.gen_range(1..20));
            for _ in 0..1000 {
                let f = QuadField::new(r(1, 60))?;
                let x = ExactScalar::new(r(-50, 50), r(-50, 50), &f);
                let y = ExactScalar::new(r(-50, 50), r(-50, 50), &f);
                let z = ExactScalar::new(r(-50, 50), r(-50, 50), &f);
                let ok = &x + &y == &y + &x
                    && &x * &y == &y * &x
                    && &(&x + &y) + &z == &x + &(&y + &z)
                    && &(&x * &y) * &z == &x * &(&y * &z)
                    && &x * &(&y + &z) == &(&x * &y) + &(&x * &z)
                    && (x.is_zero() || &x * &x.inv()? == ExactScalar::one(&f));
                if !ok {
                    return Ok((false, format!("violated at x = {x:?}, y = {y:?}, z = {z:?}")));
                }
            }
            Ok((true, "1000 random triples".into()))
        }),
        record(S, "log_cancellation_k<=6", || {
            for (g, z) in sample_params() {
                let psi = chain(&g, &z)?.psi_upto(K_MAX)?;
                if let Some(k) = psi.iter().position(|p| !p.is_log_free()) {
                    return Ok((false, format!("L survives in psi_{k} at g = {g}, zeta = {z}")));
                }
            }
            Ok((true, format!("{} (g, zeta) pairs", sample_params().len())))
        }),
        record(S, "endpoint_exact_zero", || {
            for (g, z) in sample_params() {
                for (k, p) in chain(&g, &z)?.psi_upto(K_MAX)?.iter().enumerate().skip(1) {
                    if !p.value_at_one()?.is_zero() {
                        return Ok((false, format!("psi_{k}(1) != 0 at g = {g}, zeta = {z}")));
                    }
                }
            }
            Ok((true, format!("k = 1..{K_MAX}")))
        }),
        record(S, "mode_agreement<=1e-12", || {
            let mut worst = 0.0f64;
            for (gamma, xi) in [(1.0, 0.0), (2.0, 0.125), (0.5, -1.0)] {
                worst = worst.max(mode_agreement(gamma, xi, 3)?);
            }
            Ok((worst <= 1e-12, format!("max deviation {worst:.2e}")))
        }),
        record(S, "bessel_spectral_agreement<=1e-12", || {
            let s = spectral_sequence(Family::Bessel, 1.0, 0.0, 3)?;
            let mut worst = 0.0f64;
            for (k, sk) in s.iter().enumerate() {
                let c = omega(k)?.compile(1.0)?;
                for i in 0..33 {
                    let t = i as f64 / 32.0;
                    worst = worst.max((sk.eval(t) - c.eval(t)?).abs());
                }
            }
            Ok((worst <= 1e-12, format!("max deviation {worst:.2e}")))
        }),
    ]
}

// ---------------------------------------------------------------- bessel

fn poly(c: &[(i64, i64)]) -> CoeffExpr {
    let f = crate::kernel::expr::polynomial_field();
    let coeffs: Vec<Rational> = c.iter().map(|&(p, q)| rat(p, q)).collect();
    CoeffExpr::polynomial(&f, &rat(0, 1), &coeffs)
}

fn bessel_suite(cfg: &OracleConfig) -> Vec<CheckResult> {
    const S: &str = "bessel";
    vec![
        record(S, "omega_closed_forms", || {
            let w1 = poly(&[(0, 1), (3, 24), (0, 1), (-5, 24)]);
            let w2 = poly(&[(0, 1), (0, 1), (81, 1152), (0, 1), (-462, 1152), (0, 1), (385, 1152)]);
            let wb1 = poly(&[(0, 1), (-9, 24), (0, 1), (7, 24)]);
            let ok = *omega(1)? == w1 && *omega(2)? == w2 && *omega_bar(1)? == wb1;
            Ok((ok, "omega_1, omega_2, omega_bar_1 exact".into()))
        }),
        record(S, "omega_degree_parity_k<=6", || {
            for k in 0..=K_MAX {
                let w = omega(k)?;
                let deg_ok = w.degree_v() == Some(3 * k as u32);
                let parity_ok = w.terms().all(|(m, _)| m.a % 2 == (k as u32) % 2);
                if !(deg_ok && parity_ok) {
                    return Ok((false, format!("omega_{k}")));
                }
            }
            Ok((true, format!("k = 0..{K_MAX}")))
        }),
        record(S, "wronskian_decreasing_n", || {
            let r: Vec<f64> = [4, 8, 16, 32]
                .iter()
                .map(|&n| bessel_wronskian_residual(n, 2.0, 3))
                .collect::<Result<_>>()?;
            Ok((strictly_decreasing(&r), format!("n = 4, 8, 16, 32: {}", fmt_list(&r))))
        }),
        record(S, "order_improvement_m<=3", || {
            let z = 16.0;
            let i = bessel_i_reference(8, z, cfg)?;
            let k = bessel_k_reference(8, z, cfg)?;
            let mut ei = Vec::new();
            let mut ek = Vec::new();
            for m in 0..=3 {
                ei.push(relative_error(&i.value, &eval_bessel(&BesselParams::new(8, 2.0, m, BesselKind::I)?)?.scaled()).abs());
                ek.push(relative_error(&k.value, &eval_bessel(&BesselParams::new(8, 2.0, m, BesselKind::K)?)?.scaled()).abs());
            }
            Ok((
                strictly_decreasing(&ei) && strictly_decreasing(&ek),
                format!("I: {}; K: {}", fmt_list(&ei), fmt_list(&ek)),
            ))
        }),
        record(S, "n_scaling_in_[8,32]", || {
            let err = |n: u32| -> Result<f64> {
                let i = bessel_i_reference(n, 2.0 * f64::from(n), cfg)?;
                Ok(relative_error(&i.value, &eval_bessel(&BesselParams::new(n, 2.0, 3, BesselKind::I)?)?.scaled()).abs())
            };
            let r = err(8)? / err(16)?;
            Ok(((8.0..=32.0).contains(&r), format!("ratio {r:.2}")))
        }),
        record(S, "prefactor_product", || {
            let (n, l) = (5u32, 1.5f64);
            let i = eval_bessel(&BesselParams::new(n, l, 0, BesselKind::I)?)?;
            let k = eval_bessel(&BesselParams::new(n, l, 0, BesselKind::K)?)?;
            let prod = (i.ln_prefactor + k.ln_prefactor).exp();
            let want = i.t / (2.0 * f64::from(n));
            let rel = (prod / want - 1.0).abs();
            Ok((rel < 1e-14, format!("relative gap {rel:.1e}")))
        }),
        record(S, "eta_at_one", || {
            let e = eta(1.0)?;
            Ok(((e - 0.532_839_9).abs() < 1e-6, format!("eta(1) = {e:.10}")))
        }),
    ]
}

// ---------------------------------------------------------------- legendre

fn legendre_suite() -> Vec<CheckResult> {
    const S: &str = "legendre";
    vec![
        record(S, "psi_endpoint_zero", || {
            for (g, z) in sample_params() {
                for (k, p) in chain(&g, &z)?.psi_upto(K_MAX)?.iter().enumerate().skip(1) {
                    if !p.value_at_one()?.is_zero() {
                        return Ok((false, format!("psi_{k}(1) at g = {g}, zeta = {z}")));
                    }
                }
            }
            Ok((true, format!("k = 1..{K_MAX}, exact")))
        }),
        record(S, "psi_bar_endpoint_zero", || {
            for (g, z) in sample_params() {
                for (k, p) in chain(&g, &z)?.psi_bar_upto(K_MAX)?.iter().enumerate().skip(1) {
                    if !p.value_at_one()?.is_zero() {
                        return Ok((false, format!("psi_bar_{k}(1) at g = {g}, zeta = {z}")));
                    }
                }
            }
            Ok((true, format!("k = 1..{K_MAX}, exact")))
        }),
        record(S, "psi_plus_constants", || {
            let (g, z) = (rat(3, 2), rat(-1, 5));
            let ch = chain(&g, &z)?;
            let p = ch.psi_upto(3)?;
            let pp = ch.psi_plus_upto(3)?;
            let c = |r: Rational| CoeffExpr::constant(ExactScalar::from_rational(r, p[0].field()), &z);
            let e1 = p[1].checked_sub(&c(rat(1, 12)))?;
            let e2 = p[2].checked_sub(&p[1].scale_rational(&rat(1, 12)))?.checked_add(&c(rat(1, 288)))?;
            let e3 = p[3]
                .checked_sub(&p[2].scale_rational(&rat(1, 12)))?
                .checked_add(&p[1].scale_rational(&rat(1, 288)))?
                .checked_add(&c(rat(139, 51840)))?;
            Ok((pp[1] == e1 && pp[2] == e2 && pp[3] == e3, "1/12, 1/288, 139/51840".into()))
        }),
        record(S, "asymptotic_wronskian_decreasing", || {
            let r: Vec<f64> = [4, 8, 16]
                .iter()
                .map(|&n| legendre_wronskian_residual(n, 1.0, 0.0, 0.1, 3))
                .collect::<Result<_>>()?;
            Ok((strictly_decreasing(&r), format!("n = 4, 8, 16: {}", fmt_list(&r))))
        }),
        record(S, "ode_residual_decreasing_m", || {
            let r: Vec<f64> = (0..=3)
                .map(|m| expansion_ode_residual(8, 1.0, 0.0, 0.5, m, 0.01))
                .collect::<Result<_>>()?;
            Ok((strictly_decreasing(&r), format!("m = 0..3: {}", fmt_list(&r))))
        }),
        record(S, "cross_relation_magnitudes", || {
            let mut detail = Vec::new();
            let mut ok = true;
            for k in 0..=3 {
                let c = cross_relation_check(k, 1e4, 0.0)?;
                ok &= c.magnitude_gap.abs() <= 1e-3;
                detail.push(format!("k={k}: gap {:.1e}, sign {:+}", c.magnitude_gap, c.observed_sign));
            }
            Ok((ok, detail.join("; ")))
        }),
        record(S, "eta_tilde_limit", || {
            let e1 = eta(1.0)?;
            let g: Vec<f64> = [1e-2, 1e-3, 1e-4]
                .iter()
                .map(|&t| Ok((eta_tilde(1.0, t)? - e1).abs()))
                .collect::<Result<_>>()?;
            Ok((strictly_decreasing(&g), format!("theta = 1e-2, 1e-3, 1e-4: {}", fmt_list(&g))))
        }),
        record(S, "bessel_form_consistency", || {
            let th = 0.1;
            let gamma = 2.0 / f64::sin(th);
            let mut worst = 0.0f64;
            for kind in [LegendreKind::P, LegendreKind::Q, LegendreKind::Dp, LegendreKind::Dq] {
                let a = eval_bessel_form(8, 2.0, th, 0.0, 3, kind)?;
                let b = eval_legendre(&LegendreParams::at_angle(8, gamma, 0.0, th, 3, kind)?)?;
                let term3 = (b.terms[3] / b.terms.iter().sum::<f64>()).abs();
                worst = worst.max((a.value / b.value - 1.0).abs() / (10.0 * term3));
            }
            Ok((worst < 1.0, format!("max |ratio - 1|/(10 term_3) = {worst:.2e}")))
        }),
    ]
}

// ---------------------------------------------------------------- oracle

fn oracle_suite(cfg: &OracleConfig) -> Vec<CheckResult> {
    const S: &str = "oracle";
    let prec = cfg.prec();
    vec![
        record(S, "wronskian_residual<=1e-10", || {
            let mut worst = 0.0f64;
            for &(n, g, xi) in &[(1, 1.0, 0.0), (4, 1.0, 0.0), (4, 2.0, 0.125)] {
                for &x in &[-0.9, -0.5, 0.0, 0.5, 0.9, 0.995] {
                    let p = p_reference(n, g, xi, x, cfg)?;
                    let q = q_reference(n, g, xi, x, cfg)?;
                    let w = (&p.value * &q.derivative - &p.derivative * &q.value)
                        * (prec.one() - prec.f(x) * prec.f(x));
                    worst = worst.max(rel_diff(&w, &prec.one()));
                }
            }
            Ok((worst <= 1e-10, format!("max residual {worst:.2e} over 18 points")))
        }),
        record(S, "q_constructions_agree<=1e-25", || {
            let mut worst = 0.0f64;
            for &(n, g, xi, x) in &[(4, 1.0, 0.0, 0.5), (4, 2.0, 0.125, -0.5), (1, 1.0, 0.0, 0.9)] {
                let a = q_reference_quadrature(n, g, xi, OracleArg::X(x), cfg)?;
                let b = q_reference_ode(n, g, xi, OracleArg::X(x), cfg)?;
                worst = worst.max(rel_diff(&a.value, &b.value)).max(rel_diff(&a.derivative, &b.derivative));
            }
            Ok((worst <= 1e-25, format!("max disagreement {worst:.2e}")))
        }),
        record(S, "ode_residual<=1e-25", || {
            let mut worst = legendre_ode_residual(4, 1.0, 0.0, f64::cos(0.1), cfg)?;
            worst = worst.max(legendre_ode_residual(4, 2.0, 0.125, -0.5, cfg)?);
            for kind in [BesselKind::I, BesselKind::K] {
                worst = worst.max(bessel_ode_residual(4, 2.0, kind, cfg)?);
            }
            Ok((worst <= 1e-25, format!("max residual {worst:.2e}")))
        }),
        record(S, "hypergeometric_realness", || {
            let bound = 10f64.powf(-f64::from(cfg.digits) / 2.0);
            let mut worst = 0.0f64;
            for &(n, g, x) in &[(1, 0.1, 0.9), (4, 1.0, 0.5), (8, 3.0, -0.3)] {
                worst = worst.max(p_reference_details(n, g, 0.0, OracleArg::X(x), cfg)?.imag_residue);
            }
            Ok((worst <= bound, format!("max imaginary residue {worst:.2e}")))
        }),
        record(S, "endpoint_normalisation", || {
            // p·n!·(2/(1−x))^{n/2} → 1 and q·(2/(n−1)!)·((1−x)/2)^{n/2} → 1.
            let n = 3u32;
            let mut gaps = Vec::new();
            for th in [1e-2f64, 1e-3, 1e-4] {
                let half = (0.5 * th).sin().powi(2);
                let scale = f64::from(n) * 0.5 * half.ln();
                let p = p_reference_angle(n, 1.0, 0.0, th, cfg)?;
                let q = q_reference_angle(n, 1.0, 0.0, th, cfg)?;
                let gp = (p.ln_abs() + ln_factorial(u64::from(n)) - scale).exp() - 1.0;
                let gq = (q.ln_abs() - ln_factorial(u64::from(n - 1)) + 2f64.ln() + scale).exp() - 1.0;
                gaps.push(gp.abs().max(gq.abs()));
            }
            Ok((strictly_decreasing(&gaps) && gaps[2] < 1e-6, format!("theta = 1e-2, 1e-3, 1e-4: {}", fmt_list(&gaps))))
        }),
        record(S, "bessel_wronskian<=1e-25", || {
            let z = 8.0;
            let i = bessel_i_reference(4, z, cfg)?;
            let k = bessel_k_reference(4, z, cfg)?;
            let w = &i.derivative * &k.value - &k.derivative * &i.value;
            let r = rel_diff(&w, &(prec.one() / prec.f(z)));
            Ok((r <= 1e-25 && k.value_f64() > 0.0, format!("residual {r:.2e}")))
        }),
        record(S, "i_recurrence<=1e-30", || {
            let (n, z) = (4u32, 8.0);
            let a = bessel_i_reference(n - 1, z, cfg)?.value;
            let b = bessel_i_reference(n + 1, z, cfg)?.value;
            let c = bessel_i_reference(n, z, cfg)?.value * prec.int(2 * i64::from(n)) / prec.f(z);
            let r = rel_diff(&(a - b), &c);
            Ok((r <= 1e-30, format!("residual {r:.2e}")))
        }),
        record(S, "k_large_argument", || {
            // K_4(z)·e^z·√(2z/π) = 1 + 63/(8z) + 63·55/(2(8z)²) + O(z⁻³).
            let z = 400.0;
            let k = bessel_k_reference(4, z, cfg)?;
            let r = (k.ln_abs() + z + (2.0 * z / PI).ln() * 0.5).exp();
            let want = 1.0 + 63.0 / (8.0 * z) + 63.0 * 55.0 / (2.0 * (8.0 * z).powi(2));
            let gap = (r / want - 1.0).abs();
            Ok((gap < 2e-6, format!("K_4(400) against three asymptotic terms: gap {gap:.2e}")))
        }),
        record(S, "limit_gap_decreasing", || {
            let r: Vec<_> = [1e-2, 1e-3]
                .iter()
                .map(|&t| limit_check_bessel(4, 1.0, t, 0.0, cfg))
                .collect::<Result<_>>()?;
            let ok = r[1].p_rel_gap * 2.0 < r[0].p_rel_gap && r[1].q_rel_gap * 2.0 < r[0].q_rel_gap;
            Ok((
                ok,
                format!(
                    "p gaps {:.2e} -> {:.2e}, q gaps {:.2e} -> {:.2e}",
                    r[0].p_rel_gap, r[1].p_rel_gap, r[0].q_rel_gap, r[1].q_rel_gap
                ),
            ))
        }),
    ]
}
