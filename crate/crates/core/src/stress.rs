//! Stress-strength reliability `R = P(Y < X)` for independent strength
//! `X ~ UL(θ₁)` and stress `Y ~ UL(θ₂)`, and the discrepancy
//! `D = R(B, A) − R(A, B) = 1 − 2R`.
//!
//! `R = g(θ₁, θ₂)` is a rational function:
//!
//! ```text
//!            θ₂² (θ₁θ₂² + 2θ₁²θ₂ + θ₁³ + θ₂² + 4θ₁θ₂ + 3θ₁² + θ₂ + 3θ₁)
//! g(θ₁,θ₂) = ─────────────────────────────────────────────────────────
//!                      (θ₁ + θ₂)³ (1 + θ₂) (1 + θ₁)
//! ```
//!
//! and `g(θ₁, θ₂) + g(θ₂, θ₁) = 1`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bayes::{batch_means_se, mh_chain, sample_wg, MhConfig};
use crate::classical::{asym_var_theta, mle_theta, normal_upper_point, IntervalEstimate, Method};
use crate::distribution::{ProportionSample, UnitLindleyParam};
use crate::error::{Error, Result};
use crate::special::WeightedGammaParam;

/// The polynomial `θ₁θ₂² + 2θ₁²θ₂ + θ₁³ + θ₂² + 4θ₁θ₂ + 3θ₁² + θ₂ + 3θ₁`.
fn poly(t1: f64, t2: f64) -> f64 {
    t1 * t2 * t2 + 2.0 * t1 * t1 * t2 + t1 * t1 * t1 + t2 * t2 + 4.0 * t1 * t2
        + 3.0 * t1 * t1
        + t2
        + 3.0 * t1
}

/// `g(θ₁, θ₂)` on raw parameters.
pub fn reliability(t1: f64, t2: f64) -> f64 {
    let s = t1 + t2;
    t2 * t2 * poly(t1, t2) / (s * s * s * (1.0 + t2) * (1.0 + t1))
}

/// `R = P(Y < X)` with strength `X ~ UL(θ₁)` and stress `Y ~ UL(θ₂)`.
pub fn r_from_params(p1: UnitLindleyParam, p2: UnitLindleyParam) -> f64 {
    reliability(p1.theta(), p2.theta())
}

/// `∂g/∂θ₁`, written as `a₁ − a₂ − a₃`.
pub fn reliability_d1(t1: f64, t2: f64) -> f64 {
    let (a1, a2, a3) = a_terms(t1, t2);
    a1 - a2 - a3
}

/// Gradient `(∂g/∂θ₁, ∂g/∂θ₂)`. The second component follows from the
/// complement identity: `∂g/∂θ₂ (θ₁, θ₂) = −∂g/∂θ₁ (θ₂, θ₁)`.
pub fn reliability_gradient(t1: f64, t2: f64) -> (f64, f64) {
    (reliability_d1(t1, t2), -reliability_d1(t2, t1))
}

fn a_terms(t1: f64, t2: f64) -> (f64, f64, f64) {
    let s = t1 + t2;
    let (o1, o2) = (1.0 + t1, 1.0 + t2);
    let p = poly(t1, t2);
    let a1 = t2 * t2 * (3.0 + 6.0 * t1 + 3.0 * t1 * t1 + 4.0 * t2 + 4.0 * t1 * t2 + t2 * t2)
        / (o1 * o2 * s.powi(3));
    let a2 = 3.0 * t2 * t2 * p / (o1 * o2 * s.powi(4));
    let a3 = t2 * t2 * p / (o1 * o1 * o2 * s.powi(3));
    (a1, a2, a3)
}

/// `D = 1 − 2R`, using `R(B, A) = 1 − R(A, B)`.
pub fn discrepancy(r_ab: f64) -> f64 {
    1.0 - 2.0 * r_ab
}

/// Maps an interval for `R` onto the `D` scale.
pub fn discrepancy_interval(lower: f64, upper: f64) -> (f64, f64) {
    (discrepancy(upper), discrepancy(lower))
}

/// Independent strength (size `m`) and stress (size `n`) samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSampleInput {
    strength: ProportionSample,
    stress: ProportionSample,
}

impl TwoSampleInput {
    pub fn new(strength: ProportionSample, stress: ProportionSample) -> Result<Self> {
        strength.require_len(2)?;
        stress.require_len(2)?;
        Ok(TwoSampleInput { strength, stress })
    }

    pub fn strength(&self) -> &ProportionSample {
        &self.strength
    }

    pub fn stress(&self) -> &ProportionSample {
        &self.stress
    }

    pub fn m(&self) -> usize {
        self.strength.len()
    }

    pub fn n(&self) -> usize {
        self.stress.len()
    }

    /// `q = n / m`.
    pub fn q(&self) -> f64 {
        self.n() as f64 / self.m() as f64
    }

    /// Notes on departures from the `m > n` layout the delta-method
    /// formulas are written for.
    pub fn warnings(&self) -> Vec<String> {
        let q = self.q();
        if q == 1.0 {
            vec!["m = n: q = 1 lies on the boundary of the asymptotic design".into()]
        } else if q > 1.0 {
            vec![format!(
                "n > m (q = {q:.4}): strength and stress roles swapped internally for the variance"
            )]
        } else {
            Vec::new()
        }
    }
}

/// Plug-in MLE `g(θ̂₁, θ̂₂)`.
pub fn r_mle(input: &TwoSampleInput) -> Result<f64> {
    Ok(r_from_params(mle_theta(&input.strength)?, mle_theta(&input.stress)?))
}

/// Terms of the closed-form delta-method variance, taken literally.
///
/// `e = (a₁ − a₂ − a₃)²` is the squared partial derivative of `g` in `θ₁`,
/// and the same `e` multiplies both `d₁` and `d₂`. `sigma_star_sq` holds
/// `d₁ + d₂`, the variance of `√m (R̂ − R)` under these terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaVarTerms {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub e: f64,
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
    pub c2: f64,
    pub d1: f64,
    pub d2: f64,
    pub sigma_star_sq: f64,
}

pub fn delta_terms(p1: UnitLindleyParam, p2: UnitLindleyParam, q: f64) -> Result<DeltaVarTerms> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::domain(format!("q must lie in (0, 1], got {q}")));
    }
    let (t1, t2) = (p1.theta(), p2.theta());
    let (a1, a2, a3) = a_terms(t1, t2);
    let e = (a1 - a2 - a3).powi(2);
    let b1 = t1 * t1 * (1.0 + t1).powi(2);
    let b2 = t2 * t2 * (1.0 + t2).powi(2);
    let c1 = 2.0 + 4.0 * t1 + t1 * t1;
    let c2 = q * (2.0 + 4.0 * t2 + t2 * t2);
    let d1 = b1 * e / c1;
    let d2 = b2 * e / c2;
    Ok(DeltaVarTerms { a1, a2, a3, e, b1, b2, c1, c2, d1, d2, sigma_star_sq: d1 + d2 })
}

/// Which delta-method variance to use for `R̂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaRoute {
    /// `(d₁ + d₂) / m` from [`DeltaVarTerms`].
    Literal,
    /// `(∂₁g)² σ²(θ₁)/m + (∂₂g)² σ²(θ₂)/n` with both partial derivatives.
    #[default]
    Gradient,
}

/// Asymptotic variance of `R̂ = g(θ̂₁, θ̂₂)` for sample sizes `m` (strength)
/// and `n` (stress).
pub fn r_variance(
    p1: UnitLindleyParam,
    p2: UnitLindleyParam,
    m: usize,
    n: usize,
    route: DeltaRoute,
) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::domain("sample sizes must be positive"));
    }
    match route {
        DeltaRoute::Gradient => {
            let (g1, g2) = reliability_gradient(p1.theta(), p2.theta());
            Ok(g1 * g1 * asym_var_theta(p1) / m as f64 + g2 * g2 * asym_var_theta(p2) / n as f64)
        }
        DeltaRoute::Literal => {
            // The terms assume m ≥ n. Otherwise swap roles: Var g(θ₁,θ₂) = Var g(θ₂,θ₁).
            let (p1, p2, m, n) = if n > m { (p2, p1, n, m) } else { (p1, p2, m, n) };
            let terms = delta_terms(p1, p2, n as f64 / m as f64)?;
            Ok(terms.sigma_star_sq / m as f64)
        }
    }
}

/// Wald interval for `R` with both clipped and raw endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RInterval {
    /// Endpoints clipped to `[0, 1]`.
    pub interval: IntervalEstimate,
    pub unclipped_lower: f64,
    pub unclipped_upper: f64,
    pub se: f64,
    pub route: DeltaRoute,
}

impl RInterval {
    /// The interval carried to the `D` scale (clipped endpoints).
    pub fn discrepancy_interval(&self) -> (f64, f64) {
        discrepancy_interval(self.interval.lower, self.interval.upper)
    }
}

/// `R̂ ± τ · SE` via the chosen delta route.
pub fn ci_r_with(input: &TwoSampleInput, level: f64, route: DeltaRoute) -> Result<RInterval> {
    let tau = normal_upper_point(level)?;
    let h1 = mle_theta(&input.strength)?;
    let h2 = mle_theta(&input.stress)?;
    let r = r_from_params(h1, h2);
    let se = r_variance(h1, h2, input.m(), input.n(), route)?.sqrt();
    let (lo, hi) = (r - tau * se, r + tau * se);
    Ok(RInterval {
        interval: IntervalEstimate::new(r, lo.max(0.0), hi.min(1.0), level, Method::Ml)?,
        unclipped_lower: lo,
        unclipped_upper: hi,
        se,
        route,
    })
}

/// Confidence interval for `R` using both partial derivatives.
pub fn ci_r(input: &TwoSampleInput, level: f64) -> Result<IntervalEstimate> {
    ci_r_with(input, level, DeltaRoute::Gradient).map(|c| c.interval)
}

/// How posterior draws of `θ₁, θ₂` are produced for [`bayes_r`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PosteriorSampler {
    /// Two independent Metropolis–Hastings chains; `k` is the retained length.
    Metropolis(MhConfig),
    /// Exact rejection draws (only practical for diffuse targets).
    Exact { draws: usize },
}

impl Default for PosteriorSampler {
    fn default() -> Self {
        PosteriorSampler::Metropolis(MhConfig::default())
    }
}

/// Posterior-mean estimate of `R` from paired draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosteriorR {
    pub mean: f64,
    /// Batch-means standard error of `mean`.
    pub mcse: f64,
    pub draws: usize,
}

/// Draws `(θ₁⁽ⁱ⁾, θ₂⁽ⁱ⁾)` from the two posteriors, and averages
/// `g(θ₁⁽ⁱ⁾, θ₂⁽ⁱ⁾)` over `i = 1..k`.
pub fn bayes_r<R: Rng + ?Sized>(
    post1: &WeightedGammaParam,
    post2: &WeightedGammaParam,
    sampler: &PosteriorSampler,
    rng: &mut R,
) -> Result<PosteriorR> {
    let (d1, d2) = match sampler {
        PosteriorSampler::Metropolis(cfg) => {
            let c1 = mh_chain(post1, cfg, rng)?;
            let c2 = mh_chain(post2, cfg, rng)?;
            (c1.draws, c2.draws)
        }
        PosteriorSampler::Exact { draws } => {
            if *draws == 0 {
                return Err(Error::config("draws", "must be at least 1"));
            }
            (sample_wg(post1, *draws, rng)?, sample_wg(post2, *draws, rng)?)
        }
    };
    let rs: Vec<f64> = d1.iter().zip(&d2).map(|(&a, &b)| reliability(a, b)).collect();
    let mean = rs.iter().sum::<f64>() / rs.len() as f64;
    Ok(PosteriorR { mean, mcse: batch_means_se(&rs), draws: rs.len() })
}

/// Machine-readable summary of a two-sample comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StressStrengthReport {
    pub r_hat: f64,
    pub d_hat: f64,
    pub ci_r: Option<(f64, f64)>,
    pub ci_d: Option<(f64, f64)>,
    pub ci_r_unclipped: Option<(f64, f64)>,
    pub mcse: Option<f64>,
    pub method: Method,
    pub m: usize,
    pub n: usize,
    pub q: f64,
    pub seed: Option<u64>,
}

/// Plug-in estimate with delta-method interval, as a report record.
pub fn ml_report(input: &TwoSampleInput, level: f64, route: DeltaRoute) -> Result<StressStrengthReport> {
    let ci = ci_r_with(input, level, route)?;
    let r = ci.interval.point;
    Ok(StressStrengthReport {
        r_hat: r,
        d_hat: discrepancy(r),
        ci_r: Some((ci.interval.lower, ci.interval.upper)),
        ci_d: Some(ci.discrepancy_interval()),
        ci_r_unclipped: Some((ci.unclipped_lower, ci.unclipped_upper)),
        mcse: None,
        method: Method::Ml,
        m: input.m(),
        n: input.n(),
        q: input.q(),
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ul(t: f64) -> UnitLindleyParam {
        UnitLindleyParam::new(t).unwrap()
    }

    #[test]
    fn equal_parameters_give_one_half() {
        for t in [0.01, 0.43, 1.0, 9.0, 250.0] {
            assert!((reliability(t, t) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn complement_identity() {
        for (a, b) in [(9.0, 4.0), (0.43, 1.0), (4.0, 0.67), (0.05, 30.0)] {
            assert!((reliability(a, b) + reliability(b, a) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn discrepancy_values() {
        assert_eq!(discrepancy(0.5), 0.0);
        assert!((discrepancy(0.285) - 0.43).abs() < 1e-12);
        assert_eq!(discrepancy_interval(0.2, 0.6), (1.0 - 1.2, 1.0 - 0.4));
    }

    #[test]
    fn literal_terms_relations() {
        let t = delta_terms(ul(9.0), ul(4.0), 0.5).unwrap();
        assert!(t.e >= 0.0);
        assert!((t.e - (t.a1 - t.a2 - t.a3).powi(2)).abs() < 1e-18);
        assert!((t.d1 - t.b1 * t.e / t.c1).abs() < 1e-15);
        assert!((t.sigma_star_sq - (t.d1 + t.d2)).abs() < 1e-15);
        let sym = delta_terms(ul(2.0), ul(2.0), 1.0).unwrap();
        assert!((sym.d1 - sym.d2).abs() < 1e-15);
        assert!(delta_terms(ul(1.0), ul(1.0), 1.5).is_err());
        assert!(delta_terms(ul(1.0), ul(1.0), 0.0).is_err());
    }

    #[test]
    fn gradient_first_component_is_literal_partial() {
        let (g1, _) = reliability_gradient(1.5, 1.0);
        let t = delta_terms(ul(1.5), ul(1.0), 1.0).unwrap();
        assert!((g1 * g1 - t.e).abs() < 1e-15);
    }

    #[test]
    fn identical_samples_give_one_half() {
        let s = ProportionSample::new(vec![0.2, 0.5, 0.7, 0.4]).unwrap();
        let input = TwoSampleInput::new(s.clone(), s).unwrap();
        assert!((r_mle(&input).unwrap() - 0.5).abs() < 1e-15);
        assert!(input.warnings()[0].contains("q = 1"));
    }

    #[test]
    fn interval_is_clipped() {
        let x = ProportionSample::new(vec![0.01, 0.02, 0.015]).unwrap();
        let y = ProportionSample::new(vec![0.9, 0.95, 0.97]).unwrap();
        let ci = ci_r_with(&TwoSampleInput::new(x, y).unwrap(), 0.95, DeltaRoute::Gradient).unwrap();
        assert!(ci.interval.lower >= 0.0 && ci.interval.upper <= 1.0);
        assert!(ci.unclipped_lower <= ci.interval.lower);
    }

    #[test]
    fn literal_route_is_orientation_free() {
        let (a, b) = (ul(0.3), ul(2.0));
        let v1 = r_variance(a, b, 12, 20, DeltaRoute::Literal).unwrap();
        let v2 = r_variance(b, a, 20, 12, DeltaRoute::Literal).unwrap();
        assert!((v1 - v2).abs() < 1e-15);
    }
}
