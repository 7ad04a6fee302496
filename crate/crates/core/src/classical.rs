//! Maximum-likelihood estimation of `θ` with Wald-type intervals.

use serde::{Deserialize, Serialize};

use crate::distribution::{ProportionSample, UnitLindleyParam};
use crate::error::{Error, Result};

/// How an interval estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ml,
    BayesFlat,
    BayesConjugate,
    BayesMisspec,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Ml => "ml",
            Method::BayesFlat => "bayes_flat",
            Method::BayesConjugate => "bayes_conjugate",
            Method::BayesMisspec => "bayes_misspec",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A point estimate with a two-sided interval at confidence `level`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalEstimate {
    pub point: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub method: Method,
}

impl IntervalEstimate {
    pub fn new(point: f64, lower: f64, upper: f64, level: f64, method: Method) -> Result<Self> {
        check_level(level)?;
        if !(lower <= point && point <= upper) {
            return Err(Error::domain(format!(
                "interval ({lower}, {upper}) does not contain point {point}"
            )));
        }
        Ok(IntervalEstimate { point, lower, upper, level, method })
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

pub(crate) fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("confidence level must lie in (0, 1), got {level}")))
    }
}

/// Upper `α/2` point of the standard normal for `level = 1 − α`.
pub fn normal_upper_point(level: f64) -> Result<f64> {
    check_level(level)?;
    Ok(std::f64::consts::SQRT_2 * statrs::function::erf::erf_inv(level))
}

/// Log-likelihood up to the data-only term `Σ -3 ln(1 - xᵢ)`.
pub fn log_likelihood(theta: f64, m: usize, t: f64) -> f64 {
    m as f64 * (2.0 * theta.ln() - theta.ln_1p()) - theta * t
}

/// Derivative of [`log_likelihood`] in `θ`.
pub fn score(theta: f64, m: usize, t: f64) -> f64 {
    m as f64 * (2.0 / theta - 1.0 / (1.0 + theta)) - t
}

/// Closed-form MLE `[m − t + √(t² + 6mt + m²)] / (2t)`.
pub fn mle_theta(s: &ProportionSample) -> Result<UnitLindleyParam> {
    s.require_len(2)?;
    mle_from_stats(s.len(), s.t())
}

pub(crate) fn mle_from_stats(m: usize, t: f64) -> Result<UnitLindleyParam> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("degenerate sample: t = {t}")));
    }
    let m = m as f64;
    let root = (t * t + 6.0 * m * t + m * m).sqrt();
    // m − t + root = (8mt + ...)/(root + t - m) avoids cancellation when t ≫ m.
    let numer = if t > m {
        8.0 * m * t / (root + t - m)
    } else {
        m - t + root
    };
    UnitLindleyParam::new(numer / (2.0 * t))
}

/// Asymptotic variance `σ²(θ) = θ²(1+θ)² / (θ² + 4θ + 2)` of `√m (θ̂ − θ)`.
pub fn asym_var_theta(p: UnitLindleyParam) -> f64 {
    let th = p.theta();
    th * th * (1.0 + th) * (1.0 + th) / (th * th + 4.0 * th + 2.0)
}

/// Wald interval `θ̂ ± τ √(σ²(θ̂) / m)`, lower end clipped at zero.
pub fn ci_theta(s: &ProportionSample, level: f64) -> Result<IntervalEstimate> {
    let tau = normal_upper_point(level)?;
    let hat = mle_theta(s)?;
    let se = (asym_var_theta(hat) / s.len() as f64).sqrt();
    let point = hat.theta();
    IntervalEstimate::new(point, (point - tau * se).max(0.0), point + tau * se, level, Method::Ml)
}
