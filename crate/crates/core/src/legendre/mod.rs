//! Uniform expansions of the Legendre functions p_μ^n(x), q_μ^n(x) and their
//! derivatives for large order n.

pub mod bessel_form;
pub mod coeffs;
pub mod eval;

pub use bessel_form::{
    cross_relation_check, eta_tilde, eta_tilde_via_phase, eval_bessel_form, ConeAngleParams,
    CrossRelation,
};
pub use coeffs::{chain, exact_params, psi, psi_bar, psi_bar_plus, psi_plus, Chain};
pub use eval::{
    eval_legendre, mu_of, s_minus1, v_of_x, Argument, LegendreEval, LegendreIndex, LegendreKind,
    LegendreParams,
};
