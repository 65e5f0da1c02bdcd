//! Debye expansions of I_n(nλ) and K_n(nλ) against the power-series and
//! integral references.

use legendre_uniform::bessel::{eval_bessel, BesselKind, BesselParams};
use legendre_uniform::oracle::{bessel_i_reference, bessel_k_reference, relative_error, OracleConfig};

fn main() -> legendre_uniform::Result<()> {
    let cfg = OracleConfig::default();
    let (n, lambda) = (8, 2.0);
    let z = f64::from(n) * lambda;
    let i_ref = bessel_i_reference(n, z, &cfg)?;
    let k_ref = bessel_k_reference(n, z, &cfg)?;
    println!("I_{n}({z}) = {:.15e}, K_{n}({z}) = {:.15e}", i_ref.value_f64(), k_ref.value_f64());
    for m in 0..=4 {
        let i = eval_bessel(&BesselParams::new(n, lambda, m, BesselKind::I)?)?;
        let k = eval_bessel(&BesselParams::new(n, lambda, m, BesselKind::K)?)?;
        println!(
            "m = {m}: rel err I {:+.3e}, K {:+.3e}",
            relative_error(&i_ref.value, &i.scaled()),
            relative_error(&k_ref.value, &k.scaled())
        );
    }
    // Large orders leave the double range; the result carries a log scale.
    let big = eval_bessel(&BesselParams::new(2000, 3.0, 3, BesselKind::I)?)?;
    println!("I_2000(6000) = {} * exp({:?})", big.value, big.log_scale);
    Ok(())
}
