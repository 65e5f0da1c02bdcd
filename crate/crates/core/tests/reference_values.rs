//! Values frozen from independent computations: mpmath (40 to 100 digits)
//! for the oracle, and hand arithmetic for the closed forms.

use std::f64::consts::PI;

use legendre_uniform::bessel::{eval_bessel, omega, omega_bar, BesselKind, BesselParams};
use legendre_uniform::kernel::{rat, rational_to_f64};
use legendre_uniform::legendre::{
    chain, cross_relation_check, eval_bessel_form, eval_legendre, mu_of, s_minus1, v_of_x, LegendreKind,
    LegendreParams,
};
use legendre_uniform::oracle::{
    bessel_i_reference, bessel_k_reference, p_reference, q_reference, relative_error, OracleConfig,
};
use legendre_uniform::stirling::ln_factorial;

fn close(a: f64, b: f64, tol: f64) -> bool {
    ((a - b) / b).abs() <= tol
}

#[test]
fn bessel_oracle_matches_mpmath() {
    let c = OracleConfig::default();
    // mpmath.besseli / besselk at 40 digits.
    let cases = [
        (8, 16.0, 118_477.823_701_823_774_065_478_897_475_551, 2.359_158_922_983_692_126_737_163_572e-7),
        (4, 8.0, 150.539_415_761_556_472_191_798_462_590_370, 3.713_322_950_930_911_474_793_718_673e-4),
    ];
    for (n, z, i, k) in cases {
        assert!(close(bessel_i_reference(n, z, &c).unwrap().value_f64(), i, 1e-15));
        assert!(close(bessel_k_reference(n, z, &c).unwrap().value_f64(), k, 1e-15));
    }
    assert_eq!(bessel_i_reference(0, 1e-300, &c).unwrap().value_f64(), 1.0);
}

#[test]
fn legendre_oracle_matches_mpmath() {
    // p = Ferrers P_μ^{−n}(x) from mpmath.legenp (type 2); q = C·p(−x) with C
    // fixed by (1 − x²)(pq′ − p′q) = 1, at 40 digits.
    let c = OracleConfig::default();
    let cases = [
        (4, 1.0, 0.0, 0.5, 0.010_185_222_286_801_799_364_320_137_146_6, 9.295_119_522_247_310_000_730_601_133_85),
        (4, 2.0, 0.125, -0.5, 956.914_060_725_719_096_502_863_240_205, 6.535_463_282_264_369_484_747_778_522_67e-5),
        (1, 1.0, 0.0, 0.9, 0.235_298_834_965_185_327_912_957_126_422, 1.907_849_792_049_041_283_485_563_847_24),
        (8, 3.0, 0.0, -0.3, 33_600_860.038_465_141_091_475_673_782_7, 6.137_973_239_273_482_901_619_079_889_86e-10),
        (8, 3.0, 0.0, -0.9, 1.262_288_456_607_893_182_472_284_150_647_798e17, 3.007_290_012_163_821_145_112_821_671_486e-19),
    ];
    for (n, g, xi, x, p, q) in cases {
        let pv = p_reference(n, g, xi, x, &c).unwrap().value_f64();
        let qv = q_reference(n, g, xi, x, &c).unwrap().value_f64();
        assert!(close(pv, p, 1e-15), "p({n}, {g}, {xi}, {x}) = {pv}");
        assert!(close(qv, q, 1e-15), "q({n}, {g}, {xi}, {x}) = {qv}");
    }
}

#[test]
fn closed_form_values() {
    // ω_1(1) = ω̄_1(1) = −1/12.
    assert_eq!(omega(1).unwrap().value_at_one().unwrap().rational_part(), &rat(-1, 12));
    assert_eq!(omega_bar(1).unwrap().value_at_one().unwrap().rational_part(), &rat(-1, 12));
    // ψ_1 at γ = 1, ξ = 0, v = 0: δ = π/4, so 5/48 − π/32.
    let psi1 = chain(&rat(1, 1), &rat(-1, 8)).unwrap().psi(1).unwrap();
    assert!((psi1.eval(1.0, 0.0).unwrap() - (5.0 / 48.0 - PI / 32.0)).abs() < 1e-15);
    assert!(psi1.eval(1.0, 1.0).unwrap().abs() < 1e-15);
    assert!((v_of_x(0.5, 1.0).unwrap() - 0.5 / 1.75f64.sqrt()).abs() < 1e-15);
    assert!((s_minus1(0.0, 1.0).unwrap() - (-0.5 * 2f64.ln() + PI / 4.0)).abs() < 1e-15);
    let mu = mu_of(2, 0.1, 0.0);
    assert!(mu.is_real() && (mu.re - (-0.5 + 0.5 * 0.84f64.sqrt())).abs() < 1e-15);
    let mu = mu_of(4, 1.0, 0.0);
    assert!(mu.re == -0.5 && (mu.im - 63f64.sqrt() / 2.0).abs() < 1e-14);
}

#[test]
fn leading_term_and_endpoint_behaviour() {
    // m = 0 is the bare prefactor (1/n!)s^{−1/2}e^{nS₋₁}.
    let (n, g, x) = (4u32, 1.0, 0.995);
    let e = eval_legendre(&LegendreParams::new(n, g, 0.0, x, 0, LegendreKind::P).unwrap()).unwrap();
    let s = (1.0 + g * g * (1.0 - x * x)).sqrt();
    let want = (-ln_factorial(4) - 0.5 * s.ln() + f64::from(n) * e.s).exp();
    assert!(close(e.value, want, 1e-14));
    // Near x = 1: p·n!·(2/(1−x))^{n/2} → 1 and q·(2/(n−1)!)·((1−x)/2)^{n/2} → 1.
    let th = 1e-4f64;
    let z = (0.5 * th).sin().powi(2);
    let p = eval_legendre(&LegendreParams::at_angle(3, 1.0, 0.0, th, 3, LegendreKind::P).unwrap()).unwrap();
    let q = eval_legendre(&LegendreParams::at_angle(3, 1.0, 0.0, th, 3, LegendreKind::Q).unwrap()).unwrap();
    assert!(close(p.value * 6.0 / z.powf(1.5), 1.0, 1e-6));
    assert!(close(q.value * z.powf(1.5), 1.0, 1e-6));
}

#[test]
fn bessel_expansion_against_oracle() {
    let c = OracleConfig::default();
    let (n, l) = (4u32, 2.0);
    let i = bessel_i_reference(n, 8.0, &c).unwrap();
    let k = bessel_k_reference(n, 8.0, &c).unwrap();
    let errs = |kind, r: &legendre_uniform::oracle::OracleValue| -> Vec<f64> {
        (0..=3)
            .map(|m| relative_error(&r.value, &eval_bessel(&BesselParams::new(n, l, m, kind).unwrap()).unwrap().scaled()).abs())
            .collect()
    };
    let (ei, ek) = (errs(BesselKind::I, &i), errs(BesselKind::K, &k));
    assert!(ek.windows(2).all(|w| w[1] < w[0]), "{ek:?}");
    // For I the m = 2 partial sum is worse than m = 1 at this small order;
    // mpmath gives the same four errors.
    assert!(ei[1] < ei[0] && ei[2] > ei[1] && ei[3] < ei[1], "{ei:?}");
    for (e, want) in ei.iter().zip([9.202_922e-3, 2.828_449e-5, 7.128_783e-5, 1.680_341e-5]) {
        assert!((e / want - 1.0).abs() < 1e-5, "{e} vs {want}");
    }
    assert!(ek[3] < 2e-5);
}

#[test]
fn rewritten_form_at_order_zero_is_stirling_close() {
    // At m = 0 the two forms differ by the Stirling remainder, O(1/n).
    let gap = |n: u32| {
        let a = eval_bessel_form(n, 2.0, 0.1, 0.0, 0, LegendreKind::P).unwrap();
        let b = eval_legendre(&LegendreParams::at_angle(n, 2.0 / 0.1f64.sin(), 0.0, 0.1, 0, LegendreKind::P).unwrap())
            .unwrap();
        (a.scaled().ln_abs() - b.scaled().ln_abs()).abs()
    };
    let (g8, g16) = (gap(8), gap(16));
    assert!(g8 < 0.05 && (1.5..2.5).contains(&(g8 / g16)), "{g8} {g16}");
}

#[test]
fn cross_relation_at_large_gamma() {
    let c1 = cross_relation_check(1, 1e4, 0.3).unwrap();
    assert!((c1.psi_at_zero.abs() - 1.0 / 12.0).abs() < 1e-3);
    assert!((c1.omega_at_one - rational_to_f64(&rat(-1, 12))).abs() < 1e-16);
    let c0 = cross_relation_check(0, 1e4, 0.0).unwrap();
    assert_eq!((c0.psi_at_zero, c0.omega_at_one), (1.0, 1.0));
    assert!(cross_relation_check(2, 1e4, 0.0).unwrap().magnitude_gap.abs() <= 1e-3);
    assert!(cross_relation_check(1, 10.0, 0.0).is_err());
}
