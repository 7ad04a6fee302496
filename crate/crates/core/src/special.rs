//! Gamma function, Kummer's confluent hypergeometric `U`, and the
//! weighted-gamma family built on it.
//!
//! Every Bayesian closed form in this crate reduces to Laplace-type integrals
//!
//! ```text
//! L(p, β, α) = ∫₀^∞ t^{p-1} e^{-αt} (1+t)^{-β} dt = Γ(p) · U(p, p+1-β, α)
//! ```
//!
//! which are evaluated in log space by adaptive quadrature after the
//! substitution `t = eˢ`. In `s` the integrand is unimodal with a mode that
//! solves a quadratic, so the quadrature is split at the mode and truncated
//! where the log-integrand has dropped by [`TAIL_DROP`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};

/// Log-integrand drop (in nats) below the peak at which tails are cut.
pub const TAIL_DROP: f64 = 60.0;

const QUAD_TOL: Tolerance = Tolerance {
    abs: 0.0,
    rel: 1e-13,
    max_intervals: 4000,
};

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// `ln(1 + eˢ)` without overflow.
fn softplus(s: f64) -> f64 {
    if s > 0.0 {
        s + (-s).exp().ln_1p()
    } else {
        s.exp().ln_1p()
    }
}

/// The integrand of `L(p, β, α)` in the log variable `s = ln t`.
#[derive(Debug, Clone, Copy)]
struct LaplaceIntegrand {
    p: f64,
    beta: f64,
    alpha: f64,
}

#[derive(Debug, Clone, Copy)]
struct Bracket {
    left: f64,
    mode: f64,
    right: f64,
    peak: f64,
}

impl LaplaceIntegrand {
    fn psi(&self, s: f64) -> f64 {
        self.p * s - self.alpha * s.exp() - self.beta * softplus(s)
    }

    /// Unique stationary point of `psi`: the positive root of
    /// `α u² − (p − β − α) u − p = 0` with `u = eˢ`.
    fn mode(&self) -> f64 {
        let b = self.p - self.beta - self.alpha;
        let disc = (b * b + 4.0 * self.alpha * self.p).sqrt();
        let u = if b >= 0.0 {
            (b + disc) / (2.0 * self.alpha)
        } else {
            2.0 * self.p / (disc - b)
        };
        u.ln()
    }

    fn bracket(&self) -> Result<Bracket> {
        let mode = self.mode();
        let peak = self.psi(mode);
        let u = mode.exp();
        let curvature = self.alpha * u + self.beta * u / ((1.0 + u) * (1.0 + u));
        let width = if curvature > 1e-12 { curvature.sqrt().recip() } else { 1.0 };
        let step_out = |dir: f64| -> Result<f64> {
            let mut h = width.min(1e3);
            for _ in 0..200 {
                let s = mode + dir * h;
                if self.psi(s) < peak - TAIL_DROP {
                    return Ok(s);
                }
                h *= 1.5;
            }
            Err(Error::convergence(format!(
                "could not bracket Laplace integrand (p={}, beta={}, alpha={})",
                self.p, self.beta, self.alpha
            )))
        };
        Ok(Bracket {
            left: step_out(-1.0)?,
            mode,
            right: step_out(1.0)?,
            peak,
        })
    }

    fn integrate(&self, lo: f64, hi: f64, peak: f64) -> Result<f64> {
        let q = quad::integrate(|s| (self.psi(s) - peak).exp(), lo, hi, QUAD_TOL)?;
        Ok(q.value)
    }

    fn log_integral(&self) -> Result<f64> {
        let br = self.bracket()?;
        let total = self.integrate(br.left, br.mode, br.peak)?
            + self.integrate(br.mode, br.right, br.peak)?;
        Ok(br.peak + total.ln())
    }
}

fn check_laplace_args(p: f64, alpha: f64, beta: f64) -> Result<()> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::domain(format!("shape must be positive, got {p}")));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("rate must be positive, got {alpha}")));
    }
    if !beta.is_finite() {
        return Err(Error::domain(format!("weight exponent must be finite, got {beta}")));
    }
    Ok(())
}

/// `ln ∫₀^∞ t^{p-1} e^{-αt} (1+t)^{-β} dt` for `p, α > 0` and any real `β`.
pub fn log_laplace_integral(p: f64, beta: f64, alpha: f64) -> Result<f64> {
    check_laplace_args(p, alpha, beta)?;
    LaplaceIntegrand { p, beta, alpha }.log_integral()
}

/// Natural log of Kummer's function of the second kind,
/// `U(a, b, z) = Γ(a)⁻¹ ∫₀^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt`.
///
/// Valid for `a > 0`, `z > 0` and any real `b`; stays finite where
/// [`kummer_u`] would overflow.
pub fn log_kummer_u(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain(format!("kummer_u requires a > 0, got {a}")));
    }
    if !(z > 0.0) {
        return Err(Error::domain(format!("kummer_u requires z > 0, got {z}")));
    }
    Ok(log_laplace_integral(a, a + 1.0 - b, z)? - log_gamma(a)?)
}

/// Kummer's `U(a, b, z)`. See [`log_kummer_u`].
pub fn kummer_u(a: f64, b: f64, z: f64) -> Result<f64> {
    log_kummer_u(a, b, z).map(f64::exp)
}

/// Parameters `(α, β, p)` of the weighted-gamma law with density
/// proportional to `θ^{p-1} e^{-αθ} (1+θ)^{-β}` on `θ > 0`.
///
/// With `β = 0` this is the gamma law with shape `p` and rate `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeightedGamma")]
pub struct WeightedGammaParam {
    alpha: f64,
    beta: f64,
    p: f64,
}

#[derive(Deserialize)]
struct RawWeightedGamma {
    alpha: f64,
    beta: f64,
    p: f64,
}

impl TryFrom<RawWeightedGamma> for WeightedGammaParam {
    type Error = Error;

    fn try_from(raw: RawWeightedGamma) -> Result<Self> {
        WeightedGammaParam::new(raw.alpha, raw.beta, raw.p)
    }
}

impl WeightedGammaParam {
    pub fn new(alpha: f64, beta: f64, p: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain(format!("WG alpha must be > 0, got {alpha}")));
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::domain(format!("WG beta must be >= 0, got {beta}")));
        }
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::domain(format!("WG p must be > 0, got {p}")));
        }
        Ok(WeightedGammaParam { alpha, beta, p })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Unnormalized log density `(p-1) ln θ − αθ − β ln(1+θ)`.
    pub fn log_kernel(&self, theta: f64) -> f64 {
        (self.p - 1.0) * theta.ln() - self.alpha * theta - self.beta * theta.ln_1p()
    }

    /// Mode of the density; zero when `p ≤ 1`.
    pub fn mode(&self) -> f64 {
        let k = self.p - 1.0;
        if k <= 0.0 {
            return 0.0;
        }
        let b = k - self.alpha - self.beta;
        let disc = (b * b + 4.0 * self.alpha * k).sqrt();
        if b >= 0.0 {
            (b + disc) / (2.0 * self.alpha)
        } else {
            2.0 * k / (disc - b)
        }
    }

    fn integrand(&self) -> LaplaceIntegrand {
        LaplaceIntegrand {
            p: self.p,
            beta: self.beta,
            alpha: self.alpha,
        }
    }

    /// Cumulative distribution function, by quadrature of the density.
    pub fn cdf(&self, theta: f64) -> Result<f64> {
        if theta <= 0.0 {
            return Ok(0.0);
        }
        let f = self.integrand();
        let br = f.bracket()?;
        let s = theta.ln();
        if s <= br.left {
            return Ok(0.0);
        }
        if s >= br.right {
            return Ok(1.0);
        }
        let left = f.integrate(br.left, br.mode, br.peak)?;
        let right = f.integrate(br.mode, br.right, br.peak)?;
        let below = if s <= br.mode {
            f.integrate(br.left, s, br.peak)?
        } else {
            left + f.integrate(br.mode, s, br.peak)?
        };
        Ok((below / (left + right)).clamp(0.0, 1.0))
    }

    /// Quantile by bisection on [`cdf`](Self::cdf) in log space.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::domain(format!("WG quantile requires u in (0,1), got {u}")));
        }
        let br = self.integrand().bracket()?;
        let (mut lo, mut hi) = (br.left, br.right);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid.exp())? < u {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-12 {
                break;
            }
        }
        Ok((0.5 * (lo + hi)).exp())
    }
}

/// `ln[Γ(p) U(p, p+1-β, α)]`, the log normalizing constant of `WG(α, β, p)`.
pub fn wg_log_normalizer(w: &WeightedGammaParam) -> Result<f64> {
    w.integrand().log_integral()
}

/// Raw moment `E[θ^k]` of `WG(α, β, p)`, as a ratio of normalizers.
pub fn wg_raw_moment(w: &WeightedGammaParam, k: u32) -> Result<f64> {
    if k == 0 {
        return Ok(1.0);
    }
    let shifted = WeightedGammaParam::new(w.alpha, w.beta, w.p + k as f64)?;
    Ok((wg_log_normalizer(&shifted)? - wg_log_normalizer(w)?).exp())
}

/// Mean of `WG(α, β, p)`: `p · U(p+1, p+2-β, α) / U(p, p+1-β, α)`.
pub fn wg_mean(w: &WeightedGammaParam) -> Result<f64> {
    if w.beta == 0.0 {
        return Ok(w.p / w.alpha);
    }
    wg_raw_moment(w, 1)
}

/// Variance of `WG(α, β, p)`.
pub fn wg_variance(w: &WeightedGammaParam) -> Result<f64> {
    if w.beta == 0.0 {
        return Ok(w.p / (w.alpha * w.alpha));
    }
    let m1 = wg_mean(w)?;
    let m2 = wg_raw_moment(w, 2)?;
    Ok((m2 - m1 * m1).max(0.0))
}
