//! Bayesian estimation of `θ` under the weighted-gamma conjugate family and
//! the flat prior.
//!
//! The likelihood kernel `θ^{2m} (1+θ)^{-m} e^{-θt}` maps a `WG(α, β, p)`
//! prior to the `WG(α + t, β + m, p + 2m)` posterior, and the flat prior to
//! `WG(t, m, 2m + 1)`. Posterior means are exact (see
//! [`wg_mean`](crate::special::wg_mean)); [`mh_chain`] provides draws when
//! the whole posterior is needed.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::classical::{check_level, IntervalEstimate, Method};
use crate::distribution::ProportionSample;
use crate::error::{Error, Result};
use crate::rng::StreamRng;
use crate::special::{wg_log_normalizer, wg_mean, WeightedGammaParam};

/// Posterior of a `WG(α, β, p)` prior: `WG(α + t, β + m, p + 2m)`.
pub fn conjugate_update(prior: &WeightedGammaParam, s: &ProportionSample) -> WeightedGammaParam {
    update_from_stats(prior, s.len(), s.t())
}

pub(crate) fn update_from_stats(prior: &WeightedGammaParam, m: usize, t: f64) -> WeightedGammaParam {
    let m = m as f64;
    WeightedGammaParam::new(prior.alpha() + t, prior.beta() + m, prior.p() + 2.0 * m)
        .expect("conjugate update preserves parameter constraints")
}

/// Posterior under the flat prior `π(θ) ∝ 1`: `WG(t, m, 2m + 1)`.
pub fn flat_posterior(s: &ProportionSample) -> WeightedGammaParam {
    let m = s.len() as f64;
    WeightedGammaParam::new(s.t(), m, 2.0 * m + 1.0).expect("t > 0 for a valid sample")
}

/// Posterior mean of `θ`, the Bayes estimator under squared-error loss.
pub fn bayes_theta(posterior: &WeightedGammaParam) -> Result<f64> {
    wg_mean(posterior)
}

/// Equal-tailed credible interval around the posterior mean.
pub fn credible_interval(
    posterior: &WeightedGammaParam,
    level: f64,
    method: Method,
) -> Result<IntervalEstimate> {
    check_level(level)?;
    let tail = 0.5 * (1.0 - level);
    let point = bayes_theta(posterior)?;
    let lower = posterior.quantile(tail)?.min(point);
    let upper = posterior.quantile(1.0 - tail)?.max(point);
    IntervalEstimate::new(point, lower, upper, level, method)
}

/// Log marginal likelihood of the data under a `WG` prior, without the
/// data-only factor `Π (1 - xᵢ)⁻³`:
///
/// `ln Γ(2m+p) − ln Γ(p) + ln U(2m+p, m+p+1−β, α+t) − ln U(p, p+1−β, α)`.
pub fn log_marginal(prior: &WeightedGammaParam, s: &ProportionSample) -> Result<f64> {
    log_marginal_from_stats(prior, s.len(), s.t())
}

/// [`log_marginal`] from `(m, t)`; `m = 0` gives zero.
pub fn log_marginal_from_stats(prior: &WeightedGammaParam, m: usize, t: f64) -> Result<f64> {
    if m == 0 {
        return Ok(0.0);
    }
    let post = update_from_stats(prior, m, t);
    Ok(wg_log_normalizer(&post)? - wg_log_normalizer(prior)?)
}

/// Minimum acceptance rate tolerated by [`sample_wg`].
pub const MIN_ACCEPTANCE: f64 = 1e-4;

/// Exact i.i.d. draws from `WG(α, β, p)` by rejection from `Gamma(p, α)`,
/// accepting with probability `(1 + θ)^{-β}`.
///
/// Fails with [`Error::Impractical`] once at least 10⁴ proposals have been
/// made with an acceptance rate below [`MIN_ACCEPTANCE`].
pub fn sample_wg<R: Rng + ?Sized>(
    w: &WeightedGammaParam,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let proposal = Gamma::new(w.p(), 1.0 / w.alpha())
        .map_err(|e| Error::domain(format!("gamma proposal: {e}")))?;
    let mut out = Vec::with_capacity(n);
    let mut proposed: u64 = 0;
    while out.len() < n {
        let theta: f64 = proposal.sample(rng);
        proposed += 1;
        if w.beta() == 0.0 || rng.random::<f64>() < (-w.beta() * theta.ln_1p()).exp() {
            out.push(theta);
        }
        if proposed >= 10_000 && (out.len() as f64) < MIN_ACCEPTANCE * proposed as f64 {
            return Err(Error::Impractical(format!(
                "rejection sampler for WG({}, {}, {}) accepted {} of {proposed} proposals",
                w.alpha(),
                w.beta(),
                w.p(),
                out.len()
            )));
        }
    }
    Ok(out)
}

/// Settings for [`mh_chain`]. Iterations are numbered `1..=chain_length` and
/// those numbered `burn_in..=chain_length` are retained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MhConfig {
    pub burn_in: usize,
    pub chain_length: usize,
    /// Starting point; `None` starts at the target's mode (or mean if `p ≤ 1`).
    pub init: Option<f64>,
    /// Acceptance rate the proposal scale is tuned toward during burn-in.
    pub target_acceptance: f64,
    /// Iterations per adaptation step.
    pub adapt_every: usize,
}

impl Default for MhConfig {
    fn default() -> Self {
        MhConfig {
            burn_in: 5000,
            chain_length: 14999,
            init: None,
            target_acceptance: 0.44,
            adapt_every: 50,
        }
    }
}

impl MhConfig {
    pub fn retained(&self) -> usize {
        self.chain_length + 1 - self.burn_in
    }

    pub fn validate(&self) -> Result<()> {
        if self.burn_in == 0 {
            return Err(Error::config("burn_in", "must be at least 1"));
        }
        if self.burn_in >= self.chain_length {
            return Err(Error::config(
                "burn_in",
                format!("must be below chain_length ({} >= {})", self.burn_in, self.chain_length),
            ));
        }
        if !(self.target_acceptance > 0.0 && self.target_acceptance < 1.0) {
            return Err(Error::config("target_acceptance", "must lie in (0, 1)"));
        }
        if self.adapt_every == 0 {
            return Err(Error::config("adapt_every", "must be at least 1"));
        }
        if let Some(x) = self.init {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::config("init", format!("must be positive, got {x}")));
            }
        }
        Ok(())
    }
}

/// Retained draws of a Metropolis–Hastings run.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorChain {
    pub draws: Vec<f64>,
    pub burn_in: usize,
    pub total_length: usize,
    pub retained: usize,
    pub seed: Option<u64>,
    /// Acceptance rate over the retained (post-adaptation) segment.
    pub acceptance_rate: f64,
    /// Proposal standard deviation on the `ln θ` scale after adaptation.
    pub proposal_scale: f64,
}

/// Mean, standard deviation, and batch-means standard error of a series.
pub fn series_summary(xs: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, var.sqrt(), batch_means_se(xs))
}

/// Monte Carlo standard error by non-overlapping batch means with
/// `⌊√n⌋` batches.
pub fn batch_means_se(xs: &[f64]) -> f64 {
    let n = xs.len();
    let batches = (n as f64).sqrt().floor() as usize;
    if batches < 2 {
        return f64::NAN;
    }
    let size = n / batches;
    let means: Vec<f64> = (0..batches)
        .map(|b| xs[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let grand = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (var / batches as f64).sqrt()
}

/// Exported chain summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSummary {
    pub mean: f64,
    pub sd: f64,
    pub mcse: f64,
    pub acceptance_rate: f64,
    pub burn_in: usize,
    pub chain_length: usize,
    pub seed: Option<u64>,
}

impl PosteriorChain {
    pub fn mean(&self) -> f64 {
        self.draws.iter().sum::<f64>() / self.draws.len() as f64
    }

    pub fn summary(&self) -> ChainSummary {
        let (mean, sd, mcse) = series_summary(&self.draws);
        ChainSummary {
            mean,
            sd,
            mcse,
            acceptance_rate: self.acceptance_rate,
            burn_in: self.burn_in,
            chain_length: self.total_length,
            seed: self.seed,
        }
    }

    /// Writes one draw per line.
    pub fn write_draws<W: Write>(&self, mut out: W) -> io::Result<()> {
        for d in &self.draws {
            writeln!(out, "{d}")?;
        }
        Ok(())
    }
}

fn default_init(target: &WeightedGammaParam) -> f64 {
    let mode = target.mode();
    if mode > 0.0 {
        mode
    } else {
        wg_mean(target).unwrap_or(target.p() / target.alpha())
    }
}

/// Random-walk Metropolis–Hastings on `ln θ` targeting `WG(α, β, p)`.
///
/// Proposals are `ln θ* = ln θ + s·Z`; the acceptance ratio carries the
/// `θ*/θ` correction for the log-scale proposal and ties `u = r` are
/// accepted. The scale `s` adapts toward `cfg.target_acceptance` during
/// burn-in only and is frozen afterward.
pub fn mh_chain<R: Rng + ?Sized>(
    target: &WeightedGammaParam,
    cfg: &MhConfig,
    rng: &mut R,
) -> Result<PosteriorChain> {
    cfg.validate()?;
    let log_target = |phi: f64| {
        let theta = phi.exp();
        target.log_kernel(theta) + phi
    };
    let mut phi = cfg.init.unwrap_or_else(|| default_init(target)).ln();
    let mut current = log_target(phi);

    let theta0 = phi.exp();
    let curvature = target.alpha() * theta0
        + target.beta() * theta0 / ((1.0 + theta0) * (1.0 + theta0));
    let mut log_scale = (2.4 / curvature.max(0.04).sqrt()).min(5.0).ln();

    let mut draws = Vec::with_capacity(cfg.retained());
    let mut batch_accepts = 0usize;
    let mut batches = 0usize;
    let mut kept_accepts = 0usize;
    for iter in 1..=cfg.chain_length {
        let z: f64 = StandardNormal.sample(rng);
        let prop = phi + log_scale.exp() * z;
        let cand = log_target(prop);
        let u: f64 = rng.random();
        let accepted = cand.is_finite() && u.ln() <= cand - current;
        if accepted {
            phi = prop;
            current = cand;
        }
        if iter < cfg.burn_in {
            batch_accepts += accepted as usize;
            if iter % cfg.adapt_every == 0 {
                batches += 1;
                let rate = batch_accepts as f64 / cfg.adapt_every as f64;
                let step = (1.0 / (batches as f64).sqrt()).min(0.5);
                log_scale += if rate > cfg.target_acceptance { step } else { -step };
                batch_accepts = 0;
            }
        } else {
            kept_accepts += accepted as usize;
            draws.push(phi.exp());
        }
    }
    let retained = draws.len();
    Ok(PosteriorChain {
        draws,
        burn_in: cfg.burn_in,
        total_length: cfg.chain_length,
        retained,
        seed: None,
        acceptance_rate: kept_accepts as f64 / retained as f64,
        proposal_scale: log_scale.exp(),
    })
}

/// [`mh_chain`] on a fresh stream seeded with `seed`; the seed is recorded.
pub fn mh_chain_seeded(
    target: &WeightedGammaParam,
    cfg: &MhConfig,
    seed: u64,
) -> Result<PosteriorChain> {
    let mut rng = StreamRng::seed_from_u64(seed);
    let mut chain = mh_chain(target, cfg, &mut rng)?;
    chain.seed = Some(seed);
    Ok(chain)
}
