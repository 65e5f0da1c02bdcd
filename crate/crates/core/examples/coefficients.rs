//! Exact coefficients: Debye polynomials ω_k(t) and the Legendre ψ_k(v) for
//! a rational parameter pair.

use legendre_uniform::bessel::omega;
use legendre_uniform::kernel::rat;
use legendre_uniform::legendre::chain;

fn main() -> legendre_uniform::Result<()> {
    for k in 0..=3 {
        println!("omega_{k}(t) = {}", omega(k)?.render("t"));
    }
    let ch = chain(&rat(1, 1), &rat(-1, 8))?;
    for (k, p) in ch.psi_upto(2)?.iter().enumerate() {
        println!("psi_{k}(v) = {p}");
        println!("  log-free: {}, value at v = 1: {}", p.is_log_free(), p.value_at_one()?);
    }
    let bar = ch.psi_bar_upto(1)?;
    println!("psi_bar_1(v) = {}", bar[1]);
    println!("{}", serde_json::to_string(&bar[1].to_json()).expect("plain data"));
    Ok(())
}
