//! Inference for the unit-Lindley distribution on `(0, 1)`.
//!
//! The density is
//!
//! ```text
//! f(x | θ) = θ² / (1 + θ) · (1 − x)⁻³ · exp(−θ x / (1 − x)),   θ > 0.
//! ```
//!
//! This crate provides
//!
//! * the distribution itself ([`distribution`]): density, cdf, quantile and
//!   sampling;
//! * maximum-likelihood estimation with Wald intervals ([`classical`]);
//! * conjugate Bayesian analysis under the weighted-gamma family
//!   ([`special`], [`bayes`]), including a Metropolis–Hastings sampler;
//! * the stress-strength reliability `R = P(X < Y)` and the discrepancy
//!   `D = 1 − 2R` ([`stress`]);
//! * Kolmogorov–Smirnov goodness of fit ([`gof`]);
//! * seeded Monte Carlo studies of estimator bias and MSE ([`montecarlo`]).
//!
//! ```
//! use unit_lindley::{mle_theta, ProportionSample};
//!
//! let s = ProportionSample::new(vec![0.31, 0.52, 0.44, 0.60, 0.28]).unwrap();
//! let theta = mle_theta(&s).unwrap();
//! assert!(theta.theta() > 0.0);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bayes;
pub mod classical;
pub mod distribution;
pub mod error;
pub mod gof;
pub mod montecarlo;
pub mod quad;
pub mod rng;
pub mod special;
pub mod stress;

pub use bayes::{
    bayes_theta, conjugate_update, credible_interval, flat_posterior, log_marginal, mh_chain,
    mh_chain_seeded, sample_wg, ChainSummary, MhConfig, PosteriorChain,
};
pub use classical::{asym_var_theta, ci_theta, mle_theta, IntervalEstimate, Method};
pub use distribution::{cdf, pdf, quantile, sample, ProportionSample, UnitLindleyParam};
pub use error::{Error, Result};
pub use gof::{ks_test, KsResult, PValueMethod};
pub use special::{wg_mean, WeightedGammaParam};
pub use stress::{
    bayes_r, ci_r, discrepancy, reliability, r_mle, PosteriorSampler, StressStrengthReport,
    TwoSampleInput,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/distribution.md")]
    mod distribution {}
    #[doc = include_str!("../../../book/src/estimation.md")]
    mod estimation {}
    #[doc = include_str!("../../../book/src/bayes.md")]
    mod bayes {}
    #[doc = include_str!("../../../book/src/stress_strength.md")]
    mod stress_strength {}
    #[doc = include_str!("../../../book/src/goodness_of_fit.md")]
    mod goodness_of_fit {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
