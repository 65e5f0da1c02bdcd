//! High-precision reference values of p and q, with both q constructions
//! and the Wronskian.

use legendre_uniform::oracle::{
    p_reference, q_reference_ode, q_reference_quadrature, OracleArg, OracleConfig,
};

fn main() -> legendre_uniform::Result<()> {
    let cfg = OracleConfig::from_env()?;
    let (n, gamma, xi) = (4, 1.0, 0.0);
    for x in [-0.9, 0.0, 0.5, 0.99] {
        let p = p_reference(n, gamma, xi, x, &cfg)?;
        let qa = q_reference_quadrature(n, gamma, xi, OracleArg::X(x), &cfg)?;
        let qb = q_reference_ode(n, gamma, xi, OracleArg::X(x), &cfg)?;
        let w = (p.value_f64() * qa.derivative_f64() - p.derivative_f64() * qa.value_f64()) * (1.0 - x * x);
        println!(
            "x = {x:5}: p = {:.15e}, q = {:.15e} (ode {:.15e}), W = {w:.15}",
            p.value_f64(),
            qa.value_f64(),
            qb.value_f64()
        );
    }
    Ok(())
}
