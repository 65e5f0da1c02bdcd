//! Relative-error tables of the truncated expansions against the oracle,
//! on the cone-angle grid x = cos θ, γ = λ/sin θ.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::legendre::{eval_bessel_form, eval_legendre, LegendreKind, LegendreParams};
use crate::oracle::{p_reference_angle, q_reference_angle, relative_error, OracleConfig};
use crate::K_MAX;

pub const CSV_HEADER: &str = "lambda,m,rel_err_p,rel_err_q";

/// Which arrangement of the expansion is compared with the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpansionForm {
    /// Factorial normalisation with e^{±nS₋₁} and ψ_k.
    #[default]
    Legendre,
    /// The Debye-shaped rearrangement with η̃ and ψ_k⁺.
    BesselForm,
}

impl std::str::FromStr for ExpansionForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "legendre" => Ok(ExpansionForm::Legendre),
            "bessel-form" => Ok(ExpansionForm::BesselForm),
            _ => Err(Error::usage(format!("unknown expansion form {s:?} (legendre | bessel-form)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrTableSpec {
    pub theta: f64,
    pub xi: f64,
    pub n: u32,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Number of λ grid points, spaced evenly and including both ends.
    pub steps: usize,
    pub orders: Vec<usize>,
    pub form: ExpansionForm,
}

impl ErrTableSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta < 0.5 * std::f64::consts::PI) {
            return Err(Error::domain(format!("theta = {} must lie in (0, π/2)", self.theta)));
        }
        if self.n == 0 {
            return Err(Error::domain("order n must be at least 1"));
        }
        if !(self.lambda_min > 0.0 && self.lambda_max >= self.lambda_min && self.lambda_max.is_finite()) {
            return Err(Error::domain("need 0 < lambda_min <= lambda_max"));
        }
        if self.steps == 0 || (self.steps == 1 && self.lambda_min != self.lambda_max) {
            return Err(Error::usage("steps must be at least 2 unless lambda_min = lambda_max"));
        }
        if self.orders.is_empty() {
            return Err(Error::usage("no truncation orders given"));
        }
        if let Some(m) = self.orders.iter().find(|&&m| m > K_MAX) {
            return Err(Error::usage(format!("order {m} exceeds K_max = {K_MAX}")));
        }
        Ok(())
    }

    pub fn lambdas(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lambda_min];
        }
        let h = (self.lambda_max - self.lambda_min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.lambda_max
                } else {
                    self.lambda_min + h * i as f64
                }
            })
            .collect()
    }
}

/// One (λ, m) entry: rel_err = (oracle − expansion)/oracle. NaN marks an
/// oracle failure at that λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrTableRow {
    pub lambda: f64,
    pub m: usize,
    pub rel_err_p: f64,
    pub rel_err_q: f64,
}

impl ErrTableRow {
    pub fn is_flagged(&self) -> bool {
        self.rel_err_p.is_nan() || self.rel_err_q.is_nan()
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{:.16e},{},{:.16e},{:.16e}",
            self.lambda, self.m, self.rel_err_p, self.rel_err_q
        )
    }
}

fn expansion(spec: &ErrTableSpec, lambda: f64, m: usize, kind: LegendreKind) -> Result<crate::scaled::Scaled> {
    match spec.form {
        ExpansionForm::Legendre => {
            let gamma = lambda / spec.theta.sin();
            let p = LegendreParams::at_angle(spec.n, gamma, spec.xi, spec.theta, m, kind)?;
            Ok(eval_legendre(&p)?.scaled())
        }
        ExpansionForm::BesselForm => {
            Ok(eval_bessel_form(spec.n, lambda, spec.theta, spec.xi, m, kind)?.scaled())
        }
    }
}

fn rows_at(spec: &ErrTableSpec, lambda: f64, cfg: &OracleConfig) -> Result<Vec<ErrTableRow>> {
    let gamma = lambda / spec.theta.sin();
    let oracle = p_reference_angle(spec.n, gamma, spec.xi, spec.theta, cfg)
        .and_then(|p| Ok((p, q_reference_angle(spec.n, gamma, spec.xi, spec.theta, cfg)?)));
    let (p, q) = match oracle {
        Ok(pq) => pq,
        Err(e @ (Error::Precision(_) | Error::Resolution(_))) => {
            log::warn!("oracle failed at lambda = {lambda}: {e}");
            return Ok(spec
                .orders
                .iter()
                .map(|&m| ErrTableRow {
                    lambda,
                    m,
                    rel_err_p: f64::NAN,
                    rel_err_q: f64::NAN,
                })
                .collect());
        }
        Err(e) => return Err(e),
    };
    spec.orders
        .iter()
        .map(|&m| {
            Ok(ErrTableRow {
                lambda,
                m,
                rel_err_p: relative_error(&p.value, &expansion(spec, lambda, m, LegendreKind::P)?),
                rel_err_q: relative_error(&q.value, &expansion(spec, lambda, m, LegendreKind::Q)?),
            })
        })
        .collect()
}

/// All rows, λ-major in grid order then m in the given order. λ points are
/// computed in parallel; the result does not depend on scheduling.
pub fn build_table(spec: &ErrTableSpec, cfg: &OracleConfig) -> Result<Vec<ErrTableRow>> {
    spec.validate()?;
    cfg.validate()?;
    let per_lambda: Vec<Result<Vec<ErrTableRow>>> = spec
        .lambdas()
        .into_par_iter()
        .map(|l| rows_at(spec, l, cfg))
        .collect();
    let mut rows = Vec::new();
    for r in per_lambda {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[ErrTableRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.to_csv())?;
    }
    Ok(())
}
