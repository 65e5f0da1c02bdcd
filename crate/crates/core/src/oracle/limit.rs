//! The cone-angle limit: with γ = λ/sin θ and θ → 0,
//! |μ|^n p_μ^n(cos θ) → I_n(nλ) and |μ|^{−n} q_μ^n(cos θ) → K_n(nλ).

use serde::Serialize;

use crate::error::{Error, Result};

use super::big::{powu, rel_diff, sqrt, to_f64, Big};
use super::bessel_ref::{bessel_i_reference, bessel_k_reference};
use super::legendre_ref::{p_reference_angle, q_reference_angle};
use super::OracleConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub n: u32,
    pub lambda: f64,
    pub theta: f64,
    pub xi: f64,
    pub gamma: f64,
    pub mu_abs: f64,
    pub p_scaled: f64,
    pub i_ref: f64,
    /// |(|μ|^n p)/I_n − 1|.
    pub p_rel_gap: f64,
    pub q_scaled: f64,
    pub k_ref: f64,
    pub q_rel_gap: f64,
}

pub fn limit_check_bessel(
    n: u32,
    lambda: f64,
    theta: f64,
    xi: f64,
    cfg: &OracleConfig,
) -> Result<LimitReport> {
    if !(theta > 0.0 && theta < 0.5 * std::f64::consts::PI) {
        return Err(Error::domain(format!("theta = {theta} must lie in (0, π/2)")));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("lambda = {lambda} must be positive")));
    }
    let gamma = lambda / theta.sin();
    let prec = cfg.prec();
    let nb = prec.int(i64::from(n));
    let gb = prec.f(gamma);
    // |μ|² = −μ(μ + 1) = n²γ² + 2ξ for complex μ; for real μ take |μ| itself.
    let c2 = &nb * &nb * &gb * &gb + prec.f(2.0 * xi);
    let disc = prec.f(0.25) - &c2;
    let mu_abs = if disc < Big::ZERO {
        sqrt(&c2)
    } else {
        let m = sqrt(&disc) - prec.f(0.5);
        if m < Big::ZERO {
            -m
        } else {
            m
        }
    };
    let scale = powu(&mu_abs, n);
    let p = p_reference_angle(n, gamma, xi, theta, cfg)?;
    let q = q_reference_angle(n, gamma, xi, theta, cfg)?;
    let i = bessel_i_reference(n, f64::from(n) * lambda, cfg)?;
    let k = bessel_k_reference(n, f64::from(n) * lambda, cfg)?;
    let ps = &p.value * &scale;
    let qs = &q.value / &scale;
    Ok(LimitReport {
        n,
        lambda,
        theta,
        xi,
        gamma,
        mu_abs: to_f64(&mu_abs),
        p_scaled: to_f64(&ps),
        i_ref: to_f64(&i.value),
        p_rel_gap: rel_diff(&ps, &i.value),
        q_scaled: to_f64(&qs),
        k_ref: to_f64(&k.value),
        q_rel_gap: rel_diff(&qs, &k.value),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaps_shrink_with_theta() {
        let c = OracleConfig::default();
        let a = limit_check_bessel(4, 1.0, 0.1, 0.0, &c).unwrap();
        let b = limit_check_bessel(4, 1.0, 0.01, 0.0, &c).unwrap();
        assert!(b.p_rel_gap < a.p_rel_gap && b.q_rel_gap < a.q_rel_gap, "{a:?} {b:?}");
        assert!(b.p_rel_gap < 1e-3 && b.q_rel_gap < 1e-3, "{b:?}");
        assert!(limit_check_bessel(4, 1.0, 2.0, 0.0, &c).is_err());
    }
}
