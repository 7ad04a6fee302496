//! Reference values and pinned tolerances for the acceptance suite in
//! `tests/acceptance.rs`.
//!
//! Printed values come from the published tables and data analysis.
//! Tolerances are fixed here so that a change to any of them shows up in
//! review.

/// Published reference values.
pub mod reference {
    /// `(θ̂, KS statistic, p-value)` for the two WHO vectors.
    pub const GOF_X: (f64, f64, f64) = (0.11282, 0.25394, 0.2772);
    pub const GOF_Y: (f64, f64, f64) = (0.07916, 0.17452, 0.8582);

    /// ML estimate of `D(A, B)` and its 95% interval.
    pub const D_ML: f64 = -0.25967;
    pub const D_ML_CI: (f64, f64) = (-0.57591, 0.05657);

    /// Flat-prior posterior mean of `D(A, B)`.
    pub const D_BAYES: f64 = -0.228254;

    /// `(θ₁, θ₂, R)` rows of the reliability table.
    pub const R_VALUES: [(f64, f64, f64); 5] = [
        (9.0, 4.0, 0.285),
        (2.33, 4.0, 0.659),
        (1.5, 1.0, 0.366),
        (4.0, 0.67, 0.084),
        (0.43, 1.0, 0.771),
    ];

    /// Fixed-θ study: `(m, θ, bias_ML, mse_ML, bias_I, mse_I)`.
    pub const THETA_TABLE: [(usize, f64, f64, f64, f64, f64); 15] = [
        (20, 9.00, 0.445, 4.377, 0.872, 5.374),
        (20, 2.33, 0.097, 0.225, 0.186, 0.271),
        (20, 1.50, 0.049, 0.083, 0.101, 0.097),
        (20, 4.00, 0.166, 0.743, 0.336, 0.901),
        (20, 0.43, 0.011, 0.006, 0.023, 0.006),
        (40, 9.00, 0.204, 1.915, 0.411, 2.136),
        (40, 2.33, 0.041, 0.098, 0.085, 0.108),
        (40, 1.50, 0.023, 0.038, 0.052, 0.041),
        (40, 4.00, 0.080, 0.335, 0.163, 0.372),
        (40, 0.43, 0.006, 0.003, 0.012, 0.003),
        (60, 9.00, 0.153, 1.230, 0.290, 1.330),
        (60, 2.33, 0.033, 0.067, 0.062, 0.071),
        (60, 1.50, 0.014, 0.023, 0.031, 0.025),
        (60, 4.00, 0.062, 0.209, 0.116, 0.226),
        (60, 0.43, 0.005, 0.002, 0.008, 0.002),
    ];

    /// Entries of the fixed-θ table are rounded to three decimals.
    pub const THETA_TABLE_ROUNDING: f64 = 0.0005;
}

/// Pinned tolerances.
pub mod tolerance {
    /// Absolute tolerance on reproduced θ̂ and D̂.
    pub const POINT: f64 = 1e-4;
    /// Absolute tolerance on the KS statistic.
    pub const KS_STAT: f64 = 1e-4;
    /// Absolute tolerance on KS p-values.
    pub const KS_P: f64 = 0.02;
    /// Absolute tolerance on each endpoint of the interval for D.
    pub const CI_ENDPOINT: f64 = 0.005;
    /// Monte Carlo standard errors allowed for chain-based estimates.
    pub const MC_SIGMAS: f64 = 3.0;
    /// `g(θ, θ) = 1/2`.
    pub const DIAGONAL: f64 = 1e-12;
    /// Closed-form `g` against the quadrature oracle.
    pub const R_ORACLE: f64 = 1e-8;
    /// Printed reliability values (three decimals).
    pub const R_PRINTED: f64 = 1e-3;
    /// Relative tolerance of posterior means against quadrature.
    pub const WG_MEAN_REL: f64 = 1e-8;
    /// Two independent N-replication estimates differ with standard
    /// deviation `√2 · SE`; the gate allows three of those.
    pub const TABLE_SIGMAS: f64 = 3.0 * std::f64::consts::SQRT_2;
    /// Kolmogorov 5% critical value, `√n · D`.
    pub const KS_CRIT_5PCT: f64 = 1.358;
}

/// Replication and chain sizes used by the gate.
pub mod design {
    pub const REPLICATIONS: usize = 1000;
    pub const BURN_IN: usize = 5000;
    pub const CHAIN_LENGTH: usize = 14999;
    pub const MEAN_DRAWS: usize = 1_000_000;
    pub const SEED: u64 = 20190413;
}
