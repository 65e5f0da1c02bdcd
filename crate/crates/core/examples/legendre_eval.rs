//! The uniform expansions of p, q and their derivatives, with the
//! asymptotic Wronskian.

use legendre_uniform::legendre::{eval_legendre, LegendreKind, LegendreParams};

fn main() -> legendre_uniform::Result<()> {
    let (gamma, xi, theta) = (1.0, 0.0, 0.1);
    for n in [4u32, 8, 16] {
        let e = |kind| -> legendre_uniform::Result<f64> {
            Ok(eval_legendre(&LegendreParams::at_angle(n, gamma, xi, theta, 3, kind)?)?.scaled().to_f64())
        };
        let (p, q, dp, dq) = (e(LegendreKind::P)?, e(LegendreKind::Q)?, e(LegendreKind::Dp)?, e(LegendreKind::Dq)?);
        let w = f64::from(n) * (p * dq - dp * q) * theta.sin().powi(2);
        println!("n = {n:2}: p = {p:.6e}, q = {q:.6e}, |W - 1| = {:.2e}", (w - 1.0).abs());
    }
    let e = eval_legendre(&LegendreParams::new(4, 1.0, 0.0, 0.5, 3, LegendreKind::P)?)?;
    println!("p at x = 0.5: {:.15e}, v = {:.6}, S = {:.6}, terms {:?}", e.value, e.v, e.s, e.terms);
    Ok(())
}
