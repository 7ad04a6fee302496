//! The unit-Lindley law on `(0, 1)`.
//!
//! If `W` follows the Lindley law with parameter `θ` (a mixture of `Exp(θ)`
//! and `Gamma(2, θ)` with weights `θ/(1+θ)` and `1/(1+θ)`), then
//! `X = W / (1 + W)` is unit-Lindley with density
//!
//! ```text
//! f(x | θ) = θ² / (1+θ) · (1-x)⁻³ · exp(-θx / (1-x)),   0 < x < 1.
//! ```
//!
//! Most functions here work through the latent `w = x / (1 - x)`, which is
//! also the summand of the sufficient statistic `t(x)`.

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::log_gamma;

/// Shape parameter `θ > 0` of a unit-Lindley law.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct UnitLindleyParam(f64);

impl UnitLindleyParam {
    pub fn new(theta: f64) -> Result<Self> {
        if theta > 0.0 && theta.is_finite() {
            Ok(UnitLindleyParam(theta))
        } else {
            Err(Error::domain(format!("theta must be positive and finite, got {theta}")))
        }
    }

    pub fn theta(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for UnitLindleyParam {
    type Error = Error;

    fn try_from(theta: f64) -> Result<Self> {
        UnitLindleyParam::new(theta)
    }
}

impl From<UnitLindleyParam> for f64 {
    fn from(p: UnitLindleyParam) -> f64 {
        p.0
    }
}

/// Observations strictly inside `(0, 1)` together with the sufficient
/// statistic `t = Σ xᵢ / (1 - xᵢ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProportionSample {
    values: Vec<f64>,
    t: f64,
}

impl ProportionSample {
    /// Rejects empty input and any value outside the open unit interval.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("sample must contain at least one value"));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, &v)| !(v > 0.0 && v < 1.0))
        {
            return Err(Error::domain(format!(
                "value #{} = {v} is not strictly inside (0, 1)",
                i + 1
            )));
        }
        let t = values.iter().map(|&v| v / (1.0 - v)).sum();
        Ok(ProportionSample { values, t })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sufficient statistic `t(x)`.
    pub fn t(&self) -> f64 {
        self.t
    }

    /// Concatenation of two samples.
    pub fn concat(&self, other: &ProportionSample) -> ProportionSample {
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        ProportionSample { values, t: self.t + other.t }
    }

    pub(crate) fn require_len(&self, min: usize) -> Result<()> {
        if self.len() < min {
            Err(Error::domain(format!(
                "sample has {} observation(s), at least {min} required",
                self.len()
            )))
        } else {
            Ok(())
        }
    }
}

/// `t(x)` of a sample.
pub fn sufficient_stat(s: &ProportionSample) -> f64 {
    s.t()
}

fn check_open_unit(x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("x must lie in (0, 1), got {x}")))
    }
}

/// Log density.
pub fn log_pdf(x: f64, p: UnitLindleyParam) -> Result<f64> {
    check_open_unit(x)?;
    let th = p.theta();
    let w = x / (1.0 - x);
    Ok(2.0 * th.ln() - th.ln_1p() - 3.0 * (-x).ln_1p() - th * w)
}

/// Density `θ²/(1+θ) (1-x)⁻³ exp(-θx/(1-x))`.
pub fn pdf(x: f64, p: UnitLindleyParam) -> Result<f64> {
    log_pdf(x, p).map(f64::exp)
}

/// Survival function of the latent Lindley variable, `P(W > w)`.
fn lindley_survival(w: f64, th: f64) -> f64 {
    (1.0 + th * w / (1.0 + th)) * (-th * w).exp()
}

/// Distribution function on `[0, 1]`, with `cdf(0) = 0` and `cdf(1) = 1`.
pub fn cdf(x: f64, p: UnitLindleyParam) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("x must lie in [0, 1], got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    Ok(1.0 - lindley_survival(x / (1.0 - x), p.theta()))
}

/// Quantile function. Solves `cdf(x) = u` by safeguarded Newton iteration
/// on the latent scale and fails if `|cdf(x) - u| > 1e-12` at the end.
pub fn quantile(u: f64, p: UnitLindleyParam) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(format!("u must lie in (0, 1), got {u}")));
    }
    let th = p.theta();
    let target = 1.0 - u;
    let f = |w: f64| lindley_survival(w, th) - target; // decreasing in w
    let dens = |w: f64| th * th / (1.0 + th) * (1.0 + w) * (-th * w).exp();

    let mut lo = 0.0;
    let mut hi = 1.0 / th;
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::convergence(format!("could not bracket quantile u={u}")));
        }
    }
    let mut w = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fw = f(w);
        if fw.abs() < 1e-16 {
            break;
        }
        if fw > 0.0 {
            lo = w;
        } else {
            hi = w;
        }
        if (hi - lo) <= 4.0 * f64::EPSILON * hi {
            break;
        }
        let newton = w + fw / dens(w);
        w = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    let x = w / (1.0 + w);
    let err = (cdf(x, p)? - u).abs();
    if err > 1e-12 {
        return Err(Error::convergence(format!(
            "quantile({u}) missed tolerance: |cdf(x) - u| = {err:.3e}"
        )));
    }
    Ok(x)
}

/// Mean `1 / (1 + θ)`.
pub fn mean(p: UnitLindleyParam) -> f64 {
    1.0 / (1.0 + p.theta())
}

/// Mean of the latent Lindley variable, `(θ + 2) / (θ (1 + θ))`.
pub fn lindley_mean(p: UnitLindleyParam) -> f64 {
    let th = p.theta();
    (th + 2.0) / (th * (1.0 + th))
}

/// Draws one latent Lindley variate.
pub fn sample_lindley<R: Rng + ?Sized>(p: UnitLindleyParam, rng: &mut R) -> f64 {
    let th = p.theta();
    let e1: f64 = rng.sample(Exp1);
    if rng.random::<f64>() < th / (1.0 + th) {
        e1 / th
    } else {
        let e2: f64 = rng.sample(Exp1);
        (e1 + e2) / th
    }
}

/// Draws `n` i.i.d. unit-Lindley observations.
///
/// Values that would round to exactly `1.0` (possible only for vanishing
/// `θ`) saturate at the largest double below one.
pub fn sample<R: Rng + ?Sized>(p: UnitLindleyParam, n: usize, rng: &mut R) -> ProportionSample {
    assert!(n >= 1, "sample size must be at least 1");
    let below_one = 1.0 - f64::EPSILON / 2.0;
    let values: Vec<f64> = (0..n)
        .map(|_| {
            let w = sample_lindley(p, rng);
            (w / (1.0 + w)).clamp(f64::MIN_POSITIVE, below_one)
        })
        .collect();
    ProportionSample::new(values).expect("transformed draws lie in (0, 1)")
}

/// Log density of the sum of `m` independent Lindley(θ) variables.
pub fn log_lindley_sum_pdf(w: f64, m: usize, p: UnitLindleyParam) -> Result<f64> {
    if !(w > 0.0) {
        return Err(Error::domain(format!("w must be positive, got {w}")));
    }
    if m == 0 {
        return Err(Error::domain("m must be at least 1"));
    }
    let th = p.theta();
    let mf = m as f64;
    let lw = w.ln();
    let log_binom = |k: usize| -> Result<f64> {
        Ok(log_gamma(mf + 1.0)? - log_gamma(k as f64 + 1.0)? - log_gamma((m - k) as f64 + 1.0)?)
    };
    let mut terms = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let shape = (2 * m - k) as f64;
        terms.push(log_binom(k)? + (shape - 1.0) * lw - log_gamma(shape)?);
    }
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln();
    Ok(mf * (2.0 * th.ln() - th.ln_1p()) - th * w + lse)
}

/// Density of the sum of `m` independent Lindley(θ) variables, the
/// sampling law of `t(x)` for a unit-Lindley sample of size `m`.
pub fn lindley_sum_pdf(w: f64, m: usize, p: UnitLindleyParam) -> Result<f64> {
    log_lindley_sum_pdf(w, m, p).map(f64::exp)
}
