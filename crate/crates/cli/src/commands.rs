//! The subcommands, as plain functions from inputs to serialisable reports.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use unit_lindley::bayes::{conjugate_update, credible_interval, flat_posterior, mh_chain_seeded};
use unit_lindley::classical::{ci_theta, Method};
use unit_lindley::gof::{ks_test_with, PValueMethod};
use unit_lindley::montecarlo::{presets, run_study, SimulationConfig, StudyKind, StudyTable};
use unit_lindley::rng::substream;
use unit_lindley::special::WeightedGammaParam;
use unit_lindley::stress::{
    bayes_r, discrepancy, ml_report, DeltaRoute, PosteriorSampler, TwoSampleInput,
};
use unit_lindley::{ChainSummary, MhConfig, PosteriorChain, UnitLindleyParam};

use crate::error::{CliError, Result};
use crate::ingest::{Dataset, Scaling};

#[derive(Debug, Clone, Serialize)]
pub struct DatasetInfo {
    pub name: String,
    pub m: usize,
    pub missing: usize,
    pub scaling: String,
    pub t: f64,
}

impl From<&Dataset> for DatasetInfo {
    fn from(d: &Dataset) -> Self {
        DatasetInfo {
            name: d.name.clone(),
            m: d.scaled.len(),
            missing: d.missing(),
            scaling: d.scaling.to_string(),
            t: d.scaled.t(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    Ml,
    Flat,
    Conjugate,
}

impl std::str::FromStr for FitMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ml" => Ok(FitMethod::Ml),
            "flat" => Ok(FitMethod::Flat),
            "conjugate" => Ok(FitMethod::Conjugate),
            _ => Err(format!("expected ml, flat or conjugate, got `{s}`")),
        }
    }
}

/// Parses `alpha,beta,p`.
pub fn parse_prior(s: &str) -> std::result::Result<WeightedGammaParam, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, p] = parts.as_slice() else {
        return Err(format!("expected alpha,beta,p, got `{s}`"));
    };
    let num = |x: &str| x.parse::<f64>().map_err(|_| format!("`{x}` is not a number"));
    WeightedGammaParam::new(num(a)?, num(b)?, num(p)?).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PosteriorInfo {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
}

impl From<&WeightedGammaParam> for PosteriorInfo {
    fn from(w: &WeightedGammaParam) -> Self {
        PosteriorInfo { alpha: w.alpha(), beta: w.beta(), p: w.p() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub dataset: DatasetInfo,
    pub method: Method,
    pub theta_hat: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub posterior: Option<PosteriorInfo>,
    pub chain: Option<ChainSummary>,
}

/// Point estimate with a Wald interval (ML) or an equal-tailed credible
/// interval (Bayes). `mh` adds a Metropolis–Hastings run as a diagnostic.
pub fn fit(
    data: &Dataset,
    method: FitMethod,
    prior: Option<WeightedGammaParam>,
    level: f64,
    mh: Option<(MhConfig, u64)>,
) -> Result<FitReport> {
    let s = &data.scaled;
    let (est, posterior) = match method {
        FitMethod::Ml => (ci_theta(s, level)?, None),
        FitMethod::Flat => {
            let post = flat_posterior(s);
            (credible_interval(&post, level, Method::BayesFlat)?, Some(post))
        }
        FitMethod::Conjugate => {
            let prior = prior
                .ok_or_else(|| CliError::Usage("--method conjugate needs --prior alpha,beta,p".into()))?;
            let post = conjugate_update(&prior, s);
            (credible_interval(&post, level, Method::BayesConjugate)?, Some(post))
        }
    };
    let chain = match (mh, &posterior) {
        (Some((cfg, seed)), Some(post)) => Some(mh_chain_seeded(post, &cfg, seed)?.summary()),
        (Some(_), None) => {
            return Err(CliError::Usage("MH diagnostics need a Bayesian --method".into()))
        }
        _ => None,
    };
    Ok(FitReport {
        dataset: data.into(),
        method: est.method,
        theta_hat: est.point,
        lower: est.lower,
        upper: est.upper,
        level,
        posterior: posterior.as_ref().map(Into::into),
        chain,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GofReport {
    pub dataset: DatasetInfo,
    pub theta_hat: f64,
    pub statistic: f64,
    pub p_value: f64,
    pub p_method: PValueMethod,
}

pub fn parse_p_method(s: &str) -> std::result::Result<PValueMethod, String> {
    match s {
        "auto" => Ok(PValueMethod::Auto),
        "exact" => Ok(PValueMethod::Exact),
        "asymptotic" => Ok(PValueMethod::Asymptotic),
        "asymptotic-corrected" => Ok(PValueMethod::AsymptoticCorrected),
        _ => Err(format!(
            "expected auto, exact, asymptotic or asymptotic-corrected, got `{s}`"
        )),
    }
}

/// ML fit followed by a one-sample KS test at the fitted parameter.
pub fn gof(data: &Dataset, p_method: PValueMethod) -> Result<GofReport> {
    let theta = unit_lindley::mle_theta(&data.scaled)?;
    let ks = ks_test_with(&data.scaled, theta, p_method)?;
    Ok(GofReport {
        dataset: data.into(),
        theta_hat: ks.theta_hat,
        statistic: ks.statistic,
        p_value: ks.p_value,
        p_method: ks.p_method,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareMethod {
    Ml,
    Flat,
}

impl std::str::FromStr for CompareMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ml" => Ok(CompareMethod::Ml),
            "flat" => Ok(CompareMethod::Flat),
            _ => Err(format!("expected ml or flat, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    /// Region A (the smaller sample) plays the strength role.
    pub a: DatasetInfo,
    pub b: DatasetInfo,
    /// Whether the inputs were swapped so that B is the larger sample.
    pub swapped: bool,
    pub theta_a: f64,
    pub theta_b: f64,
    #[serde(rename = "R_hat")]
    pub r_hat: f64,
    #[serde(rename = "D_hat")]
    pub d_hat: f64,
    #[serde(rename = "CI_R")]
    pub ci_r: Option<(f64, f64)>,
    #[serde(rename = "CI_D")]
    pub ci_d: Option<(f64, f64)>,
    #[serde(rename = "CI_R_unclipped")]
    pub ci_r_unclipped: Option<(f64, f64)>,
    /// Monte Carlo standard error of `D_hat` (Bayes only).
    pub mcse_d: Option<f64>,
    pub level: Option<f64>,
    pub route: Option<DeltaRoute>,
    pub method: Method,
    pub m: usize,
    pub n: usize,
    pub q: f64,
    pub seed: Option<u64>,
    pub warnings: Vec<String>,
}

/// Discrepancy `D(A, B) = 1 − 2 R(A, B)` between two regions, where
/// `R(A, B) = g(θ_A, θ_B)`. The larger sample is labelled B.
pub fn compare(
    a: &Dataset,
    b: &Dataset,
    method: CompareMethod,
    level: f64,
    route: DeltaRoute,
    mh: MhConfig,
    seed: u64,
) -> Result<CompareReport> {
    let swapped = a.scaled.len() > b.scaled.len();
    let (a, b) = if swapped { (b, a) } else { (a, b) };
    let input = TwoSampleInput::new(a.scaled.clone(), b.scaled.clone())?;
    let theta_a = unit_lindley::mle_theta(&a.scaled)?.theta();
    let theta_b = unit_lindley::mle_theta(&b.scaled)?.theta();
    // The q-based notes concern the literal variance formula only.
    let mut warnings = if method == CompareMethod::Ml && route == DeltaRoute::Literal {
        input.warnings()
    } else {
        Vec::new()
    };
    if swapped {
        warnings.insert(0, "inputs swapped so that B is the larger sample".into());
    }
    let base = CompareReport {
        a: a.into(),
        b: b.into(),
        swapped,
        theta_a,
        theta_b,
        r_hat: f64::NAN,
        d_hat: f64::NAN,
        ci_r: None,
        ci_d: None,
        ci_r_unclipped: None,
        mcse_d: None,
        level: None,
        route: None,
        method: Method::Ml,
        m: input.m(),
        n: input.n(),
        q: input.q(),
        seed: None,
        warnings,
    };
    match method {
        CompareMethod::Ml => {
            let r = ml_report(&input, level, route)?;
            Ok(CompareReport {
                r_hat: r.r_hat,
                d_hat: r.d_hat,
                ci_r: r.ci_r,
                ci_d: r.ci_d,
                ci_r_unclipped: r.ci_r_unclipped,
                level: Some(level),
                route: Some(route),
                ..base
            })
        }
        CompareMethod::Flat => {
            let post_a = flat_posterior(&a.scaled);
            let post_b = flat_posterior(&b.scaled);
            let mut rng = substream(seed, 0);
            let r = bayes_r(&post_a, &post_b, &PosteriorSampler::Metropolis(mh), &mut rng)?;
            Ok(CompareReport {
                r_hat: r.mean,
                d_hat: discrepancy(r.mean),
                mcse_d: Some(2.0 * r.mcse),
                method: Method::BayesFlat,
                seed: Some(seed),
                ..base
            })
        }
    }
}

/// What `sample` draws from.
pub enum SampleSource {
    /// `n` unit-Lindley variates.
    Variates { theta: f64, n: usize },
    /// A Metropolis–Hastings chain on the posterior of a dataset.
    Posterior {
        data: Box<Dataset>,
        prior: Option<WeightedGammaParam>,
        mh: MhConfig,
    },
}

pub enum SampleOutput {
    Variates(Vec<f64>),
    Chain(PosteriorChain),
}

pub fn sample(source: SampleSource, seed: u64) -> Result<SampleOutput> {
    match source {
        SampleSource::Variates { theta, n } => {
            let p = UnitLindleyParam::new(theta)?;
            let mut rng = substream(seed, 0);
            Ok(SampleOutput::Variates(
                unit_lindley::sample(p, n, &mut rng).values().to_vec(),
            ))
        }
        SampleSource::Posterior { data, prior, mh } => {
            let post = match prior {
                Some(pr) => conjugate_update(&pr, &data.scaled),
                None => flat_posterior(&data.scaled),
            };
            Ok(SampleOutput::Chain(mh_chain_seeded(&post, &mh, seed)?))
        }
    }
}

/// Named simulation designs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableName {
    /// Fixed `θ`, ML vs flat-prior Bayes.
    Table1,
    /// Prior-drawn `θ`, accurate/misspecified/flat priors.
    Table2,
    /// Fixed `(θ₁, θ₂)`, estimators of `R`.
    Table3,
    /// Prior-drawn `(θ₁, θ₂)`, Bayes estimators of `R`.
    Table4,
    /// Cells listed explicitly under `[[cell]]`.
    Custom,
}

impl TableName {
    pub fn as_str(self) -> &'static str {
        match self {
            TableName::Table1 => "table1",
            TableName::Table2 => "table2",
            TableName::Table3 => "table3",
            TableName::Table4 => "table4",
            TableName::Custom => "custom",
        }
    }

    fn kind(self) -> Option<StudyKind> {
        match self {
            TableName::Table1 => Some(StudyKind::Theta),
            TableName::Table2 => Some(StudyKind::ThetaPrior),
            TableName::Table3 => Some(StudyKind::R),
            TableName::Table4 => Some(StudyKind::RPrior),
            TableName::Custom => None,
        }
    }
}

/// Declarative simulation file (TOML).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationFile {
    pub table: TableName,
    pub replications: Option<usize>,
    pub seed: Option<u64>,
    /// Subset of preset cells by zero-based index.
    pub cells: Option<Vec<usize>>,
    /// Metropolis–Hastings settings for Bayes estimators of `R`.
    pub mh: Option<MhConfig>,
    /// Use exact rejection draws instead of MH chains.
    pub exact_draws: Option<usize>,
    pub level: Option<f64>,
    #[serde(default)]
    pub cell: Vec<SimulationConfig>,
}

impl SimulationFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("cannot read {}", path.display()), e))?;
        toml::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_owned(),
            message: e.to_string().trim_end().to_string(),
        })
    }

    /// Expands presets and applies file-level overrides. `seed` overrides
    /// the file's seed.
    pub fn configs(&self, path: &Path, seed: Option<u64>) -> Result<Vec<SimulationConfig>> {
        let config_err = |field: String, message: String| CliError::Config {
            path: path.to_owned(),
            message: format!("invalid configuration at `{field}`: {message}"),
        };
        let seed = seed.or(self.seed).unwrap_or(0);
        let (mut cfgs, prefix) = match self.table.kind() {
            Some(kind) => {
                if !self.cell.is_empty() {
                    return Err(config_err("cell".into(), "only allowed with table = \"custom\"".into()));
                }
                let all = presets::cells(kind, seed);
                let picked = match &self.cells {
                    None => all,
                    Some(idx) => idx
                        .iter()
                        .enumerate()
                        .map(|(i, &k)| {
                            all.get(k).cloned().ok_or_else(|| {
                                config_err(
                                    format!("cells[{i}]"),
                                    format!("index {k} out of range (0..{})", all.len()),
                                )
                            })
                        })
                        .collect::<Result<_>>()?,
                };
                (picked, "cells")
            }
            None => {
                if self.cell.is_empty() {
                    return Err(config_err("cell".into(), "custom tables need at least one [[cell]]".into()));
                }
                if self.cells.is_some() {
                    return Err(config_err("cells".into(), "not used with table = \"custom\"".into()));
                }
                let mut c = self.cell.clone();
                if self.seed.is_some() || seed != 0 {
                    c.iter_mut().for_each(|x| x.seed = seed);
                }
                (c, "cell")
            }
        };
        for (i, c) in cfgs.iter_mut().enumerate() {
            if let Some(n) = self.replications {
                c.replications = n;
            }
            if let Some(l) = self.level {
                c.level = l;
            }
            if let Some(mh) = self.mh {
                c.sampler = PosteriorSampler::Metropolis(mh);
            }
            if let Some(draws) = self.exact_draws {
                if self.mh.is_some() {
                    return Err(config_err("exact_draws".into(), "conflicts with [mh]".into()));
                }
                c.sampler = PosteriorSampler::Exact { draws };
            }
            c.validate().map_err(|e| match e {
                unit_lindley::Error::Config { field, message } => {
                    config_err(format!("{prefix}[{i}].{field}"), message)
                }
                other => CliError::Core(other),
            })?;
        }
        Ok(cfgs)
    }
}

pub struct SimulationRun {
    pub table: TableName,
    pub tables: Vec<StudyTable>,
}

pub fn simulate(path: &Path, seed: Option<u64>) -> Result<SimulationRun> {
    let file = SimulationFile::load(path)?;
    let cfgs = file.configs(path, seed)?;
    let tables = cfgs.iter().map(run_study).collect::<unit_lindley::Result<Vec<_>>>()?;
    Ok(SimulationRun { table: file.table, tables })
}

impl SimulationRun {
    pub fn csv(&self) -> String {
        let mut s = String::from(unit_lindley::montecarlo::CSV_HEADER);
        s.push('\n');
        for t in &self.tables {
            for row in unit_lindley::montecarlo::to_csv_rows(t) {
                s.push_str(&row);
                s.push('\n');
            }
        }
        s
    }

    pub fn text(&self) -> String {
        unit_lindley::montecarlo::render_text(&self.tables)
    }

    pub fn output_paths(&self, dir: &Path) -> (PathBuf, PathBuf) {
        let stem = self.table.as_str();
        (dir.join(format!("{stem}.csv")), dir.join(format!("{stem}.txt")))
    }
}

/// Convenience for library users: ingest with the default (no) scaling.
pub fn load(path: &Path, scaling: Scaling) -> Result<Dataset> {
    crate::ingest::ingest(path, scaling)
}
