//! The small-angle limit in which p and q become I_n and K_n.

use legendre_uniform::bessel::eta;
use legendre_uniform::legendre::eta_tilde;
use legendre_uniform::oracle::{limit_check_bessel, OracleConfig};

fn main() -> legendre_uniform::Result<()> {
    let cfg = OracleConfig::default();
    let e = eta(1.0)?;
    println!("eta(1) = {e:.10}");
    for theta in [1e-2, 1e-3, 1e-4] {
        let r = limit_check_bessel(4, 1.0, theta, 0.0, &cfg)?;
        println!(
            "theta = {theta:.0e}: |eta~ - eta| = {:.3e}, p gap {:.3e}, q gap {:.3e}",
            (eta_tilde(1.0, theta)? - e).abs(),
            r.p_rel_gap,
            r.q_rel_gap
        );
    }
    Ok(())
}
