//! Seeded simulation studies of estimator bias and mean-squared error.
//!
//! Four designs are supported:
//!
//! * fixed `θ`, comparing the MLE with the flat-prior Bayes estimator;
//! * `θ` drawn from a weighted-gamma prior, comparing the Bayes estimators
//!   under the accurate prior, a misspecified prior, and the flat prior;
//! * fixed `(θ₁, θ₂)`, comparing `R̂_ML` (with its delta-method interval)
//!   and the flat-prior posterior mean of `R`;
//! * `(θ₁, θ₂)` drawn from priors, comparing the three Bayes estimators of `R`.
//!
//! Replication `i` draws everything from its own stream
//! [`substream(seed, i)`](crate::rng::substream). Replications run in
//! parallel and are reduced in index order, so output is bit-identical for a
//! given configuration regardless of thread count.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bayes::{conjugate_update, flat_posterior, sample_wg};
use crate::classical::{mle_theta, normal_upper_point};
use crate::distribution::{sample, ProportionSample, UnitLindleyParam};
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::special::{wg_mean, WeightedGammaParam};
use crate::stress::{bayes_r, reliability, r_variance, DeltaRoute, PosteriorSampler};

/// Estimator labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// Maximum likelihood (plug-in for `R`).
    Ml,
    /// Posterior mean under the flat prior.
    Flat,
    /// Posterior mean under the accurate conjugate prior.
    Conjugate,
    /// Posterior mean under the misspecified conjugate prior.
    Misspec,
}

impl Estimator {
    pub fn label(self) -> &'static str {
        match self {
            Estimator::Ml => "ML",
            Estimator::Flat => "I",
            Estimator::Conjugate => "A",
            Estimator::Misspec => "M",
        }
    }
}

/// Source of the true parameter(s) in each replication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Truth {
    Fixed {
        theta: f64,
    },
    FixedPair {
        theta1: f64,
        theta2: f64,
    },
    Prior {
        prior: WeightedGammaParam,
        misspecified: WeightedGammaParam,
    },
    PriorPair {
        prior1: WeightedGammaParam,
        prior2: WeightedGammaParam,
        misspecified1: WeightedGammaParam,
        misspecified2: WeightedGammaParam,
    },
}

/// Which of the four designs a configuration describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyKind {
    Theta,
    ThetaPrior,
    R,
    RPrior,
}

impl StudyKind {
    /// Power of ten used when rendering bias/MSE.
    pub fn display_scale(self) -> i32 {
        match self {
            StudyKind::Theta => 0,
            StudyKind::ThetaPrior | StudyKind::R => -4,
            StudyKind::RPrior => -5,
        }
    }

    fn default_estimators(self) -> Vec<Estimator> {
        match self {
            StudyKind::Theta | StudyKind::R => vec![Estimator::Ml, Estimator::Flat],
            StudyKind::ThetaPrior | StudyKind::RPrior => {
                vec![Estimator::Conjugate, Estimator::Misspec, Estimator::Flat]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    #[serde(default = "default_replications")]
    pub replications: usize,
    /// Strength (or single) sample size.
    pub m: usize,
    /// Stress sample size for two-sample designs.
    #[serde(default)]
    pub n: Option<usize>,
    pub truth: Truth,
    #[serde(default)]
    pub seed: u64,
    /// Defaults depend on the design.
    #[serde(default)]
    pub estimators: Option<Vec<Estimator>>,
    /// Posterior sampler for Bayes estimators of `R`.
    #[serde(default)]
    pub sampler: PosteriorSampler,
    /// Confidence level of the interval recorded for `R̂_ML`.
    #[serde(default = "default_level")]
    pub level: f64,
}

fn default_replications() -> usize {
    1000
}

fn default_level() -> f64 {
    0.95
}

impl SimulationConfig {
    pub fn new(m: usize, n: Option<usize>, truth: Truth, seed: u64) -> Self {
        SimulationConfig {
            replications: default_replications(),
            m,
            n,
            truth,
            seed,
            estimators: None,
            sampler: PosteriorSampler::default(),
            level: default_level(),
        }
    }

    pub fn kind(&self) -> StudyKind {
        match self.truth {
            Truth::Fixed { .. } => StudyKind::Theta,
            Truth::Prior { .. } => StudyKind::ThetaPrior,
            Truth::FixedPair { .. } => StudyKind::R,
            Truth::PriorPair { .. } => StudyKind::RPrior,
        }
    }

    pub fn estimators(&self) -> Vec<Estimator> {
        self.estimators.clone().unwrap_or_else(|| self.kind().default_estimators())
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::config("replications", "must be at least 1"));
        }
        if self.m < 2 {
            return Err(Error::config("m", "must be at least 2"));
        }
        let two_sample = matches!(self.kind(), StudyKind::R | StudyKind::RPrior);
        match (two_sample, self.n) {
            (true, None) => return Err(Error::config("n", "required for two-sample designs")),
            (true, Some(n)) if n < 2 => return Err(Error::config("n", "must be at least 2")),
            (false, Some(_)) => {
                return Err(Error::config("n", "only valid for two-sample designs"))
            }
            _ => {}
        }
        match self.truth {
            Truth::Fixed { theta } => check_theta("truth.theta", theta)?,
            Truth::FixedPair { theta1, theta2 } => {
                check_theta("truth.theta1", theta1)?;
                check_theta("truth.theta2", theta2)?;
            }
            _ => {}
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::config("level", "must lie in (0, 1)"));
        }
        let estimators = self.estimators();
        if estimators.is_empty() {
            return Err(Error::config("estimators", "at least one estimator is required"));
        }
        let prior_based = matches!(self.kind(), StudyKind::ThetaPrior | StudyKind::RPrior);
        for (i, e) in estimators.iter().enumerate() {
            let ok = match e {
                Estimator::Ml | Estimator::Flat => true,
                Estimator::Conjugate | Estimator::Misspec => prior_based,
            };
            if !ok {
                return Err(Error::config(
                    format!("estimators[{i}]"),
                    format!("`{}` needs a prior-drawn truth", e.label()),
                ));
            }
        }
        if let PosteriorSampler::Metropolis(cfg) = &self.sampler {
            cfg.validate().map_err(|e| match e {
                Error::Config { field, message } => {
                    Error::config(format!("sampler.metropolis.{field}"), message)
                }
                other => other,
            })?;
        }
        Ok(())
    }
}

fn check_theta(field: &str, theta: f64) -> Result<()> {
    if theta > 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(Error::config(field, format!("must be positive, got {theta}")))
    }
}

/// Bias and MSE of one estimator, with Monte Carlo standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasMseRow {
    pub estimator: Estimator,
    pub bias: f64,
    pub mse: f64,
    /// `sd(error) / √N`.
    pub bias_se: f64,
    /// `sd(error²) / √N`.
    pub mse_se: f64,
    /// Power of ten used for display; values above are unscaled.
    pub scale: i32,
}

impl BiasMseRow {
    fn from_errors(estimator: Estimator, errors: &[f64], scale: i32) -> Self {
        let n = errors.len() as f64;
        let bias = errors.iter().sum::<f64>() / n;
        let mse = errors.iter().map(|e| e * e).sum::<f64>() / n;
        let sd = |xs: &mut dyn Iterator<Item = f64>, mean: f64| -> f64 {
            if n < 2.0 {
                return 0.0;
            }
            (xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        let bias_se = sd(&mut errors.iter().copied(), bias) / n.sqrt();
        let mse_se = sd(&mut errors.iter().map(|e| e * e), mse) / n.sqrt();
        BiasMseRow { estimator, bias, mse, bias_se, mse_se, scale }
    }

    /// Whether `(bias, mse)` lie within `k` standard errors (plus `slack`)
    /// of reference values.
    pub fn agrees_with(&self, bias: f64, mse: f64, k: f64, slack: f64) -> bool {
        (self.bias - bias).abs() <= k * self.bias_se + slack
            && (self.mse - mse).abs() <= k * self.mse_se + slack
    }
}

/// Result of one study cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyTable {
    pub kind: StudyKind,
    pub m: usize,
    pub n: Option<usize>,
    pub truth: Truth,
    pub replications: usize,
    pub seed: u64,
    /// `g(θ₁, θ₂)` for fixed two-sample truths.
    pub true_r: Option<f64>,
    pub rows: Vec<BiasMseRow>,
    /// Mean interval endpoints for `R̂_ML` (fixed two-sample designs).
    pub mean_ci: Option<(f64, f64)>,
}

impl StudyTable {
    pub fn row(&self, e: Estimator) -> Option<&BiasMseRow> {
        self.rows.iter().find(|r| r.estimator == e)
    }
}

struct Replication {
    errors: Vec<f64>,
    ci: Option<(f64, f64)>,
}

fn draw_theta<R: Rng + ?Sized>(prior: &WeightedGammaParam, rng: &mut R) -> Result<UnitLindleyParam> {
    let theta = sample_wg(prior, 1, rng)?[0];
    // A draw can underflow to zero for priors with tiny p.
    UnitLindleyParam::new(theta.max(f64::MIN_POSITIVE))
}

fn theta_estimate(
    e: Estimator,
    s: &ProportionSample,
    accurate: Option<&WeightedGammaParam>,
    misspecified: Option<&WeightedGammaParam>,
) -> Result<f64> {
    match e {
        Estimator::Ml => Ok(mle_theta(s)?.theta()),
        Estimator::Flat => wg_mean(&flat_posterior(s)),
        Estimator::Conjugate => wg_mean(&conjugate_update(accurate.expect("validated"), s)),
        Estimator::Misspec => wg_mean(&conjugate_update(misspecified.expect("validated"), s)),
    }
}

fn run_replications<F>(cfg: &SimulationConfig, one: F) -> Result<Vec<Replication>>
where
    F: Fn(&mut crate::rng::StreamRng) -> Result<Replication> + Sync,
{
    (0..cfg.replications as u64)
        .into_par_iter()
        .map(|i| one(&mut substream(cfg.seed, i)))
        .collect()
}

fn assemble(
    cfg: &SimulationConfig,
    reps: Vec<Replication>,
    true_r: Option<f64>,
) -> StudyTable {
    let estimators = cfg.estimators();
    let scale = cfg.kind().display_scale();
    let rows = estimators
        .iter()
        .enumerate()
        .map(|(j, &e)| {
            let errs: Vec<f64> = reps.iter().map(|r| r.errors[j]).collect();
            BiasMseRow::from_errors(e, &errs, scale)
        })
        .collect();
    let cis: Vec<(f64, f64)> = reps.iter().filter_map(|r| r.ci).collect();
    let mean_ci = (!cis.is_empty()).then(|| {
        let k = cis.len() as f64;
        (
            cis.iter().map(|c| c.0).sum::<f64>() / k,
            cis.iter().map(|c| c.1).sum::<f64>() / k,
        )
    });
    StudyTable {
        kind: cfg.kind(),
        m: cfg.m,
        n: cfg.n,
        truth: cfg.truth,
        replications: cfg.replications,
        seed: cfg.seed,
        true_r,
        rows,
        mean_ci,
    }
}

fn require_kind(cfg: &SimulationConfig, kind: StudyKind) -> Result<()> {
    cfg.validate()?;
    if cfg.kind() != kind {
        return Err(Error::config(
            "truth.kind",
            format!("expected a {kind:?} design, got {:?}", cfg.kind()),
        ));
    }
    Ok(())
}

/// Fixed-`θ` study of `θ` estimators.
pub fn run_theta_study(cfg: &SimulationConfig) -> Result<StudyTable> {
    require_kind(cfg, StudyKind::Theta)?;
    let Truth::Fixed { theta } = cfg.truth else { unreachable!() };
    let truth = UnitLindleyParam::new(theta)?;
    let estimators = cfg.estimators();
    let reps = run_replications(cfg, |rng| {
        let s = sample(truth, cfg.m, rng);
        let errors = estimators
            .iter()
            .map(|&e| Ok(theta_estimate(e, &s, None, None)? - theta))
            .collect::<Result<_>>()?;
        Ok(Replication { errors, ci: None })
    })?;
    Ok(assemble(cfg, reps, None))
}

/// Prior-drawn `θ` study of Bayes estimators.
pub fn run_theta_prior_study(cfg: &SimulationConfig) -> Result<StudyTable> {
    require_kind(cfg, StudyKind::ThetaPrior)?;
    let Truth::Prior { prior, misspecified } = cfg.truth else { unreachable!() };
    let estimators = cfg.estimators();
    let reps = run_replications(cfg, |rng| {
        let truth = draw_theta(&prior, rng)?;
        let s = sample(truth, cfg.m, rng);
        let errors = estimators
            .iter()
            .map(|&e| Ok(theta_estimate(e, &s, Some(&prior), Some(&misspecified))? - truth.theta()))
            .collect::<Result<_>>()?;
        Ok(Replication { errors, ci: None })
    })?;
    Ok(assemble(cfg, reps, None))
}

fn r_estimate<R: Rng + ?Sized>(
    e: Estimator,
    x: &ProportionSample,
    y: &ProportionSample,
    priors: Option<(&WeightedGammaParam, &WeightedGammaParam)>,
    misspecified: Option<(&WeightedGammaParam, &WeightedGammaParam)>,
    sampler: &PosteriorSampler,
    rng: &mut R,
) -> Result<f64> {
    let (p1, p2) = match e {
        Estimator::Ml => {
            return Ok(reliability(mle_theta(x)?.theta(), mle_theta(y)?.theta()));
        }
        Estimator::Flat => (flat_posterior(x), flat_posterior(y)),
        Estimator::Conjugate => {
            let (a, b) = priors.expect("validated");
            (conjugate_update(a, x), conjugate_update(b, y))
        }
        Estimator::Misspec => {
            let (a, b) = misspecified.expect("validated");
            (conjugate_update(a, x), conjugate_update(b, y))
        }
    };
    Ok(bayes_r(&p1, &p2, sampler, rng)?.mean)
}

/// Fixed-`(θ₁, θ₂)` study of `R` estimators, recording mean interval
/// endpoints for `R̂_ML`.
pub fn run_r_study(cfg: &SimulationConfig) -> Result<StudyTable> {
    require_kind(cfg, StudyKind::R)?;
    let Truth::FixedPair { theta1, theta2 } = cfg.truth else { unreachable!() };
    let (t1, t2) = (UnitLindleyParam::new(theta1)?, UnitLindleyParam::new(theta2)?);
    let n = cfg.n.expect("validated");
    let true_r = reliability(theta1, theta2);
    let tau = normal_upper_point(cfg.level)?;
    let estimators = cfg.estimators();
    let reps = run_replications(cfg, |rng| {
        let x = sample(t1, cfg.m, rng);
        let y = sample(t2, n, rng);
        let mut errors = Vec::with_capacity(estimators.len());
        for &e in &estimators {
            errors.push(r_estimate(e, &x, &y, None, None, &cfg.sampler, rng)? - true_r);
        }
        let (h1, h2) = (mle_theta(&x)?, mle_theta(&y)?);
        let r = reliability(h1.theta(), h2.theta());
        let se = r_variance(h1, h2, cfg.m, n, DeltaRoute::Gradient)?.sqrt();
        let ci = ((r - tau * se).max(0.0), (r + tau * se).min(1.0));
        Ok(Replication { errors, ci: Some(ci) })
    })?;
    Ok(assemble(cfg, reps, Some(true_r)))
}

/// Prior-drawn `(θ₁, θ₂)` study of Bayes estimators of `R`.
pub fn run_r_prior_study(cfg: &SimulationConfig) -> Result<StudyTable> {
    require_kind(cfg, StudyKind::RPrior)?;
    let Truth::PriorPair { prior1, prior2, misspecified1, misspecified2 } = cfg.truth else {
        unreachable!()
    };
    let n = cfg.n.expect("validated");
    let estimators = cfg.estimators();
    let reps = run_replications(cfg, |rng| {
        let t1 = draw_theta(&prior1, rng)?;
        let t2 = draw_theta(&prior2, rng)?;
        let true_r = reliability(t1.theta(), t2.theta());
        let x = sample(t1, cfg.m, rng);
        let y = sample(t2, n, rng);
        let mut errors = Vec::with_capacity(estimators.len());
        for &e in &estimators {
            let est = r_estimate(
                e,
                &x,
                &y,
                Some((&prior1, &prior2)),
                Some((&misspecified1, &misspecified2)),
                &cfg.sampler,
                rng,
            )?;
            errors.push(est - true_r);
        }
        Ok(Replication { errors, ci: None })
    })?;
    Ok(assemble(cfg, reps, None))
}

/// Dispatches on the configuration's design.
pub fn run_study(cfg: &SimulationConfig) -> Result<StudyTable> {
    match cfg.kind() {
        StudyKind::Theta => run_theta_study(cfg),
        StudyKind::ThetaPrior => run_theta_prior_study(cfg),
        StudyKind::R => run_r_study(cfg),
        StudyKind::RPrior => run_r_prior_study(cfg),
    }
}

fn fmt_wg(w: &WeightedGammaParam) -> String {
    format!("({},{},{})", w.alpha(), w.beta(), w.p())
}

fn truth_label(t: &Truth) -> String {
    match t {
        Truth::Fixed { theta } => format!("{theta:.2}"),
        Truth::FixedPair { theta1, theta2 } => format!("({theta1:.2},{theta2:.2})"),
        Truth::Prior { prior, misspecified } => format!("{} vs {}", fmt_wg(prior), fmt_wg(misspecified)),
        Truth::PriorPair { prior1, prior2, misspecified1, misspecified2 } => format!(
            "{}{} vs {}{}",
            fmt_wg(prior1),
            fmt_wg(prior2),
            fmt_wg(misspecified1),
            fmt_wg(misspecified2)
        ),
    }
}

/// `x` with `digits` significant digits: positional notation for moderate
/// magnitudes, scientific otherwise.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let d = digits.max(1);
    // Round first so that e.g. 9.9999997 is classified by its rounded value.
    let r: f64 = format!("{x:.*e}", d - 1).parse().unwrap_or(x);
    let e = r.abs().log10().floor() as i32;
    if (-4..d as i32).contains(&e) {
        format!("{:.*}", (d as i32 - 1 - e) as usize, r)
    } else {
        format!("{r:.*e}", d - 1)
    }
}

fn sig6(x: f64) -> String {
    format_sig(x, 6)
}

/// CSV header matching [`to_csv_rows`].
pub const CSV_HEADER: &str =
    "kind,m,n,truth,replications,seed,estimator,bias,mse,bias_se,mse_se,true_r,ci_lower,ci_upper";

/// One CSV line per estimator, unscaled, six significant digits.
pub fn to_csv_rows(t: &StudyTable) -> Vec<String> {
    let opt = |v: Option<f64>| v.map(sig6).unwrap_or_default();
    t.rows
        .iter()
        .map(|r| {
            format!(
                "{:?},{},{},\"{}\",{},{},{},{},{},{},{},{},{},{}",
                t.kind,
                t.m,
                t.n.map(|n| n.to_string()).unwrap_or_default(),
                truth_label(&t.truth),
                t.replications,
                t.seed,
                r.estimator.label(),
                sig6(r.bias),
                sig6(r.mse),
                sig6(r.bias_se),
                sig6(r.mse_se),
                opt(t.true_r),
                opt(t.mean_ci.map(|c| c.0)),
                opt(t.mean_ci.map(|c| c.1)),
            )
        })
        .collect()
}

/// Aligned text table in `bias(mse)` layout, values multiplied by
/// `10^{-scale}` and shown to six significant digits.
///
/// Consecutive tables sharing a design and estimator list form one block;
/// blocks are separated by a blank line.
pub fn render_text(tables: &[StudyTable]) -> String {
    let same_block = |a: &StudyTable, b: &StudyTable| {
        a.kind == b.kind
            && a.rows.iter().map(|r| r.estimator).eq(b.rows.iter().map(|r| r.estimator))
    };
    let mut blocks = Vec::new();
    for group in tables.chunk_by(same_block) {
        blocks.push(render_block(group));
    }
    blocks.join("\n")
}

fn render_block(tables: &[StudyTable]) -> String {
    let mut out = String::new();
    let Some(first) = tables.first() else { return out };
    let scale = first.kind.display_scale();
    let mult = 10f64.powi(-scale);
    let estimators: Vec<Estimator> = first.rows.iter().map(|r| r.estimator).collect();
    if scale != 0 {
        let _ = writeln!(out, "bias (mse), in units of 1e{scale}");
    } else {
        let _ = writeln!(out, "bias (mse)");
    }
    let size_col = |t: &StudyTable| match t.n {
        Some(n) => format!("({},{})", t.m, n),
        None => t.m.to_string(),
    };
    let tw = tables.iter().map(|t| truth_label(&t.truth).chars().count()).max().unwrap_or(5).max(5);
    let mut header = format!("{:<10} {:<tw$}", "size", "truth");
    if matches!(first.kind, StudyKind::R) {
        let _ = write!(header, " {:>9}", "R");
    }
    for e in &estimators {
        let _ = write!(header, " {:>26}", e.label());
    }
    if matches!(first.kind, StudyKind::R) {
        let _ = write!(header, " {:>21}", "mean CI");
    }
    let _ = writeln!(out, "{header}");
    for t in tables {
        let label = truth_label(&t.truth);
        let pad = tw - label.chars().count();
        let mut line = format!("{:<10} {label}{:pad$}", size_col(t), "");
        if let Some(r) = t.true_r {
            let _ = write!(line, " {:>9}", sig6(r));
        }
        for r in &t.rows {
            let cell = format!("{}({})", sig6(r.bias * mult), sig6(r.mse * mult));
            let _ = write!(line, " {cell:>26}");
        }
        if let Some((lo, hi)) = t.mean_ci {
            let _ = write!(line, " {:>21}", format!("({},{})", sig6(lo), sig6(hi)));
        }
        let _ = writeln!(out, "{line}");
    }
    out
}

/// Standard design grids.
pub mod presets {
    use super::*;

    fn wg(a: f64, b: f64, p: f64) -> WeightedGammaParam {
        WeightedGammaParam::new(a, b, p).expect("preset hyper-parameters are valid")
    }

    pub const THETA_SIZES: [usize; 3] = [20, 40, 60];
    pub const THETA_VALUES: [f64; 5] = [9.0, 2.33, 1.5, 4.0, 0.43];
    pub const R_SIZES: [(usize, usize); 3] = [(20, 20), (40, 20), (40, 40)];
    pub const R_PAIRS: [(f64, f64); 5] = [(9.0, 4.0), (2.33, 4.0), (1.5, 1.0), (4.0, 0.67), (0.43, 1.0)];
    pub const R_PRIOR_SIZES: [(usize, usize); 3] = [(20, 20), (40, 20), (60, 60)];

    /// `(accurate, misspecified)` prior pairs for the single-parameter design.
    pub fn theta_priors() -> [(WeightedGammaParam, WeightedGammaParam); 3] {
        [
            (wg(1.0, 1.0, 1.0), wg(3.1, 1.9, 2.0)),
            (wg(2.3, 4.7, 3.0), wg(1.2, 3.6, 4.0)),
            (wg(6.0, 5.2, 4.0), wg(6.0, 4.0, 5.0)),
        ]
    }

    /// `(prior1, prior2, misspecified1, misspecified2)` for the two-sample design.
    pub fn r_priors() -> [[WeightedGammaParam; 4]; 3] {
        [
            [wg(1.0, 1.0, 1.0), wg(1.0, 1.0, 1.0), wg(3.1, 1.9, 2.0), wg(2.2, 3.2, 2.0)],
            [wg(2.3, 4.7, 3.0), wg(5.2, 3.6, 4.0), wg(1.2, 3.6, 4.0), wg(7.3, 5.0, 3.0)],
            [wg(6.0, 5.2, 4.0), wg(6.0, 4.0, 5.0), wg(5.0, 4.4, 2.0), wg(7.1, 5.3, 1.0)],
        ]
    }

    pub fn theta_cells(seed: u64) -> Vec<SimulationConfig> {
        THETA_SIZES
            .iter()
            .flat_map(|&m| {
                THETA_VALUES
                    .iter()
                    .map(move |&theta| SimulationConfig::new(m, None, Truth::Fixed { theta }, seed))
            })
            .collect()
    }

    pub fn theta_prior_cells(seed: u64) -> Vec<SimulationConfig> {
        THETA_SIZES
            .iter()
            .flat_map(|&m| {
                theta_priors().into_iter().map(move |(prior, misspecified)| {
                    SimulationConfig::new(m, None, Truth::Prior { prior, misspecified }, seed)
                })
            })
            .collect()
    }

    pub fn r_cells(seed: u64) -> Vec<SimulationConfig> {
        R_SIZES
            .iter()
            .flat_map(|&(m, n)| {
                R_PAIRS.iter().map(move |&(theta1, theta2)| {
                    SimulationConfig::new(m, Some(n), Truth::FixedPair { theta1, theta2 }, seed)
                })
            })
            .collect()
    }

    pub fn r_prior_cells(seed: u64) -> Vec<SimulationConfig> {
        R_PRIOR_SIZES
            .iter()
            .flat_map(|&(m, n)| {
                r_priors().into_iter().map(move |[prior1, prior2, misspecified1, misspecified2]| {
                    SimulationConfig::new(
                        m,
                        Some(n),
                        Truth::PriorPair { prior1, prior2, misspecified1, misspecified2 },
                        seed,
                    )
                })
            })
            .collect()
    }

    pub fn cells(kind: StudyKind, seed: u64) -> Vec<SimulationConfig> {
        match kind {
            StudyKind::Theta => theta_cells(seed),
            StudyKind::ThetaPrior => theta_prior_cells(seed),
            StudyKind::R => r_cells(seed),
            StudyKind::RPrior => r_prior_cells(seed),
        }
    }
}
