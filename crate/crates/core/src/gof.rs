//! One-sample Kolmogorov–Smirnov test against a unit-Lindley law.
//!
//! The null parameter is taken as given (typically the MLE from the same
//! data). No Lilliefors-type correction is applied, so p-values are
//! conservative when `θ` was fitted.

use serde::{Deserialize, Serialize};

use crate::distribution::{cdf, ProportionSample, UnitLindleyParam};
use crate::error::{Error, Result};

/// How the p-value is obtained from the statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PValueMethod {
    /// Exact for `n < 100` without ties, asymptotic otherwise.
    #[default]
    Auto,
    /// Exact finite-`n` distribution of the statistic.
    Exact,
    /// Limiting Kolmogorov distribution at `√n · D`.
    Asymptotic,
    /// Limiting distribution at `(√n + 0.12 + 0.11/√n) · D`.
    AsymptoticCorrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
    pub theta_hat: f64,
    /// The method actually used (never `Auto`).
    pub p_method: PValueMethod,
}

/// Exact `sup |Fₙ − F|` from the order statistics.
pub fn ks_statistic(s: &ProportionSample, p: UnitLindleyParam) -> Result<f64> {
    let mut xs = s.values().to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x, p)?;
        let i = i as f64;
        d = d.max((i + 1.0) / n - f).max(f - i / n);
    }
    Ok(d)
}

fn has_ties(s: &ProportionSample) -> bool {
    let mut xs = s.values().to_vec();
    xs.sort_by(f64::total_cmp);
    xs.windows(2).any(|w| w[0] == w[1])
}

/// Tests `s` against `UL(θ)` with the default p-value rule.
pub fn ks_test(s: &ProportionSample, p: UnitLindleyParam) -> Result<KsResult> {
    ks_test_with(s, p, PValueMethod::Auto)
}

pub fn ks_test_with(
    s: &ProportionSample,
    p: UnitLindleyParam,
    method: PValueMethod,
) -> Result<KsResult> {
    s.require_len(3)?;
    let n = s.len();
    let d = ks_statistic(s, p)?;
    let method = match method {
        PValueMethod::Auto if n < 100 && !has_ties(s) => PValueMethod::Exact,
        PValueMethod::Auto => PValueMethod::Asymptotic,
        other => other,
    };
    Ok(KsResult {
        statistic: d,
        p_value: ks_p_value(d, n, method)?,
        n,
        theta_hat: p.theta(),
        p_method: method,
    })
}

/// P-value of statistic `d` for sample size `n`. `Auto` is treated as
/// `Exact` for `n < 100` and `Asymptotic` otherwise.
pub fn ks_p_value(d: f64, n: usize, method: PValueMethod) -> Result<f64> {
    if !(0.0..=1.0).contains(&d) || n == 0 {
        return Err(Error::domain(format!("invalid KS statistic {d} for n = {n}")));
    }
    let nf = n as f64;
    let p = match method {
        PValueMethod::Exact => 1.0 - kolmogorov_cdf_exact(n, d),
        PValueMethod::Auto if n < 100 => 1.0 - kolmogorov_cdf_exact(n, d),
        PValueMethod::Asymptotic | PValueMethod::Auto => kolmogorov_sf(nf.sqrt() * d),
        PValueMethod::AsymptoticCorrected => {
            kolmogorov_sf((nf.sqrt() + 0.12 + 0.11 / nf.sqrt()) * d)
        }
    };
    Ok(p.clamp(0.0, 1.0))
}

/// Survival function of the limiting Kolmogorov distribution,
/// `P(K > λ)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.0 {
        // Theta-function form converges fast for small λ.
        let w = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let s: f64 = (0..20)
            .map(|j| {
                let k = (2 * j + 1) as f64;
                (-k * k * w).exp()
            })
            .sum();
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s
    } else {
        let s: f64 = (1..=100)
            .map(|k| {
                let k = k as f64;
                let sign = if k as u64 % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * k * k * lambda * lambda).exp()
            })
            .sum();
        2.0 * s
    }
}

/// Exact `P(Dₙ < d)` by the Durbin matrix method in the form of Marsaglia,
/// Tsang and Wang, with exponent tracking to avoid under/overflow.
pub fn kolmogorov_cdf_exact(n: usize, d: f64) -> f64 {
    let nf = n as f64;
    if d <= 0.5 / nf {
        return 0.0;
    }
    if d >= 1.0 {
        return 1.0;
    }
    let k = (nf * d) as usize + 1;
    let m = 2 * k - 1;
    let h = k as f64 - nf * d;

    let mut hm = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            if i + 1 >= j {
                hm[i * m + j] = 1.0;
            }
        }
    }
    for i in 0..m {
        hm[i * m] -= h.powi(i as i32 + 1);
        hm[(m - 1) * m + i] -= h.powi((m - i) as i32);
    }
    if 2.0 * h - 1.0 > 0.0 {
        hm[(m - 1) * m] += (2.0 * h - 1.0).powi(m as i32);
    }
    for i in 0..m {
        for j in 0..m {
            if i + 1 > j {
                for g in 1..=(i + 1 - j) {
                    hm[i * m + j] /= g as f64;
                }
            }
        }
    }
    let (q, mut eq) = matrix_power(&hm, 0, m, n);
    let mut s = q[(k - 1) * m + k - 1];
    for i in 1..=n {
        s = s * i as f64 / nf;
        if s < 1e-140 {
            s *= 1e140;
            eq -= 140;
        }
    }
    s * 10f64.powi(eq)
}

fn matmul(a: &[f64], b: &[f64], m: usize) -> Vec<f64> {
    let mut c = vec![0.0; m * m];
    for i in 0..m {
        for l in 0..m {
            let ail = a[i * m + l];
            if ail == 0.0 {
                continue;
            }
            for j in 0..m {
                c[i * m + j] += ail * b[l * m + j];
            }
        }
    }
    c
}

/// `A^n` as `(V, e)` with the true power equal to `V · 10^e`.
fn matrix_power(a: &[f64], ea: i32, m: usize, n: usize) -> (Vec<f64>, i32) {
    if n == 1 {
        return (a.to_vec(), ea);
    }
    let (v, ev) = matrix_power(a, ea, m, n / 2);
    let b = matmul(&v, &v, m);
    let eb = 2 * ev;
    let (mut v, mut ev) = if n.is_multiple_of(2) {
        (b, eb)
    } else {
        (matmul(a, &b, m), ea + eb)
    };
    if v[(m / 2) * m + m / 2] > 1e140 {
        v.iter_mut().for_each(|x| *x *= 1e-140);
        ev += 140;
    }
    (v, ev)
}
