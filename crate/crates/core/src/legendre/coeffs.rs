//! Exact coefficient tables ψ_k, ψ̄_k, ψ_k⁺ and ψ̄_k⁺ keyed by (g, ζ).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::One;

use crate::error::{Error, Result};
use crate::kernel::{integrate_step_legendre, rat, rational_from_f64, CoeffExpr, QuadField, Rational};
use crate::stirling::inverse_stirling_coeffs;
use crate::K_MAX;

/// Exact parameters (g, ζ) for a floating (γ, ξ): g is the double γ·γ and ζ
/// the double ξ minus 1/8, both taken as exact dyadic rationals.
pub fn exact_params(gamma: f64, xi: f64) -> Result<(Rational, Rational)> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::domain(format!("gamma = {gamma} must be positive")));
    }
    let g = rational_from_f64(gamma * gamma)?;
    let zeta = rational_from_f64(xi)? - rat(1, 8);
    Ok((g, zeta))
}

/// The coefficient chain for one (g, ζ). Orders are generated on demand and
/// kept.
pub struct Chain {
    field: Arc<QuadField>,
    zeta: Rational,
    psi: Mutex<Vec<CoeffExpr>>,
}

impl Chain {
    fn new(g: Rational, zeta: Rational) -> Result<Self> {
        let field = QuadField::new(g)?;
        let one = CoeffExpr::one(&field, &zeta);
        Ok(Chain {
            field,
            zeta,
            psi: Mutex::new(vec![one]),
        })
    }

    pub fn field(&self) -> &Arc<QuadField> {
        &self.field
    }

    pub fn zeta(&self) -> &Rational {
        &self.zeta
    }

    /// ψ_0..=ψ_k.
    pub fn psi_upto(&self, k: usize) -> Result<Vec<CoeffExpr>> {
        check_k(k)?;
        let mut psi = self.psi.lock().expect("coefficient cache poisoned");
        while psi.len() <= k {
            let next = integrate_step_legendre(psi.last().expect("ψ_0 present"))?;
            psi.push(next);
        }
        Ok(psi[..=k].to_vec())
    }

    pub fn psi(&self, k: usize) -> Result<CoeffExpr> {
        Ok(self.psi_upto(k)?.pop().expect("nonempty"))
    }

    /// ψ̄_0..=ψ̄_k.
    pub fn psi_bar_upto(&self, k: usize) -> Result<Vec<CoeffExpr>> {
        let psi = self.psi_upto(k)?;
        let mut out = vec![psi[0].clone()];
        for j in 1..=k {
            out.push(bar(&psi[j], &psi[j - 1])?);
        }
        Ok(out)
    }

    pub fn psi_bar(&self, k: usize) -> Result<CoeffExpr> {
        Ok(self.psi_bar_upto(k)?.pop().expect("nonempty"))
    }

    pub fn psi_plus_upto(&self, k: usize) -> Result<Vec<CoeffExpr>> {
        plus(&self.psi_upto(k)?)
    }

    pub fn psi_bar_plus_upto(&self, k: usize) -> Result<Vec<CoeffExpr>> {
        plus(&self.psi_bar_upto(k)?)
    }
}

fn check_k(k: usize) -> Result<()> {
    if k > K_MAX {
        return Err(Error::usage(format!("order {k} exceeds K_max = {K_MAX}")));
    }
    Ok(())
}

/// ψ̄_k = ψ_k − γ²v(1−v²)ψ_{k−1}/(2(1+γ²)) − (1−v²)·D[ψ_{k−1}]/(1+γ²).
fn bar(psi_k: &CoeffExpr, psi_prev: &CoeffExpr) -> Result<CoeffExpr> {
    let g = psi_k.g().clone();
    let one_plus_g = Rational::one() + &g;
    let a = psi_prev
        .mul_poly(&[rat(0, 1), rat(1, 1), rat(0, 1), rat(-1, 1)])
        .scale_rational(&(&g / (rat(2, 1) * &one_plus_g)));
    let b = psi_prev
        .scaled_diff()
        .mul_poly(&[rat(1, 1), rat(0, 1), rat(-1, 1)])
        .scale_rational(&(Rational::one() / &one_plus_g));
    psi_k.checked_sub(&a)?.checked_sub(&b)
}

/// Cauchy product with the series of √(2πn)(n/e)^n/n!.
fn plus(series: &[CoeffExpr]) -> Result<Vec<CoeffExpr>> {
    let c = inverse_stirling_coeffs(series.len().saturating_sub(1));
    let mut out = Vec::with_capacity(series.len());
    for k in 0..series.len() {
        let mut acc = series[0].zero_like();
        for j in 0..=k {
            acc = acc.checked_add(&series[k - j].scale_rational(&c[j]))?;
        }
        out.push(acc);
    }
    Ok(out)
}

type Key = (Rational, Rational);

fn cache() -> &'static Mutex<HashMap<Key, Arc<Chain>>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Chain>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The shared chain for exact (g, ζ).
pub fn chain(g: &Rational, zeta: &Rational) -> Result<Arc<Chain>> {
    let key = (g.clone(), zeta.clone());
    let mut map = cache().lock().expect("coefficient cache poisoned");
    if let Some(c) = map.get(&key) {
        return Ok(Arc::clone(c));
    }
    let c = Arc::new(Chain::new(key.0.clone(), key.1.clone())?);
    map.insert(key, Arc::clone(&c));
    Ok(c)
}

pub fn psi(k: usize, g: &Rational, zeta: &Rational) -> Result<CoeffExpr> {
    chain(g, zeta)?.psi(k)
}

pub fn psi_bar(k: usize, g: &Rational, zeta: &Rational) -> Result<CoeffExpr> {
    chain(g, zeta)?.psi_bar(k)
}

pub fn psi_plus(k: usize, g: &Rational, zeta: &Rational) -> Result<CoeffExpr> {
    Ok(chain(g, zeta)?.psi_plus_upto(k)?.pop().expect("nonempty"))
}

pub fn psi_bar_plus(k: usize, g: &Rational, zeta: &Rational) -> Result<CoeffExpr> {
    Ok(chain(g, zeta)?.psi_bar_plus_upto(k)?.pop().expect("nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{ExactScalar, Monomial};

    /// ψ_1 and ψ̄_1 written out by hand.
    fn first_order(g: &Rational, zeta: &Rational, bar: bool) -> CoeffExpr {
        let f = QuadField::new(g.clone()).unwrap();
        let opg = Rational::one() + g;
        let c1 = if bar {
            -(rat(3, 1) * g + rat(1, 1)) / rat(8, 1)
        } else {
            (g - rat(1, 1)) / rat(8, 1)
        };
        let c3 = if bar { rat(7, 24) * g } else { rat(-5, 24) * g };
        let poly = CoeffExpr::polynomial(
            &f,
            zeta,
            &[
                (rat(2, 1) * g + rat(3, 1)) / rat(24, 1) / &opg,
                c1 / &opg,
                rat(0, 1),
                c3 / &opg,
            ],
        );
        // δζ/γ = δζγ/g
        let d = CoeffExpr::monomial(
            &f,
            zeta,
            Monomial::new(0, 1, 0),
            ExactScalar::gamma(&f).scale(&(zeta / g)),
        );
        poly.checked_add(&d).unwrap()
    }

    #[test]
    fn first_order_closed_forms() {
        for (g, z) in [(rat(1, 1), rat(-1, 8)), (rat(3, 1), rat(1, 5)), (rat(2, 7), rat(-9, 4))] {
            assert_eq!(psi(1, &g, &z).unwrap(), first_order(&g, &z, false));
            assert_eq!(psi_bar(1, &g, &z).unwrap(), first_order(&g, &z, true));
        }
    }

    #[test]
    fn endpoint_zero_through_k_max() {
        let (g, z) = (rat(5, 3), rat(-2, 7));
        let c = chain(&g, &z).unwrap();
        for (k, (p, pb)) in c
            .psi_upto(K_MAX)
            .unwrap()
            .iter()
            .zip(c.psi_bar_upto(K_MAX).unwrap())
            .enumerate()
            .skip(1)
        {
            assert!(p.value_at_one().unwrap().is_zero(), "psi_{k}(1)");
            assert!(pb.value_at_one().unwrap().is_zero(), "psi_bar_{k}(1)");
            assert!(p.is_log_free());
        }
    }

    #[test]
    fn plus_constants() {
        let (g, z) = (rat(2, 1), rat(1, 3));
        let p = chain(&g, &z).unwrap().psi_upto(3).unwrap();
        let pp = chain(&g, &z).unwrap().psi_plus_upto(3).unwrap();
        let expect3 = p[3]
            .checked_sub(&p[2].scale_rational(&rat(1, 12)))
            .unwrap()
            .checked_add(&p[1].scale_rational(&rat(1, 288)))
            .unwrap()
            .checked_add(&CoeffExpr::constant(
                ExactScalar::from_rational(rat(139, 51840), p[0].field()),
                &z,
            ))
            .unwrap();
        assert_eq!(pp[3], expect3);
    }

    #[test]
    fn float_params_are_exact_dyadics() {
        let (g, z) = exact_params(0.1, 0.0).unwrap();
        assert_eq!(g, rational_from_f64(0.1 * 0.1).unwrap());
        assert_eq!(z, rat(-1, 8));
        assert!(exact_params(0.0, 0.0).is_err());
    }

    #[test]
    fn order_limit() {
        assert!(matches!(psi(K_MAX + 1, &rat(1, 1), &rat(0, 1)), Err(Error::Usage(_))));
    }
}
