//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Stopping rule: stop once the estimated error is below
/// `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 0.0,
            rel: 1e-13,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &x) in XGK[..7].iter().enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[a, b]`, bisecting the worst segment until the
/// tolerance is met. Running out of segments is an error, as is a
/// non-finite integrand value.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!("quadrature bounds must be finite, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(Quadrature { value: 0.0, abs_error: 0.0, intervals: 0 });
    }
    let mut segments = vec![gk15(&f, a, b)];
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::convergence(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        if error <= tol.abs.max(tol.rel * value.abs()) {
            return Ok(Quadrature { value, abs_error: error, intervals: segments.len() });
        }
        if segments.len() >= tol.max_intervals {
            return Err(Error::convergence(format!(
                "quadrature on [{a}, {b}] stalled at error {error:.3e} for value {value:.6e} \
                 after {} segments",
                segments.len()
            )));
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // Segment can no longer be split in floating point.
            return Err(Error::convergence(format!(
                "quadrature segment [{}, {}] collapsed before reaching tolerance",
                s.a, s.b
            )));
        }
        segments.push(gk15(&f, s.a, mid));
        segments.push(gk15(&f, mid, s.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, Tolerance::default()).unwrap();
        assert!((q.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn gaussian_bump() {
        let q = integrate(|x| (-x * x).exp(), -10.0, 10.0, Tolerance::default()).unwrap();
        assert!((q.value - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        let q = integrate(|x| x, 1.0, 0.0, Tolerance::default()).unwrap();
        assert!((q.value + 0.5).abs() < 1e-15);
        assert_eq!(integrate(|x| x, 3.0, 3.0, Tolerance::default()).unwrap().value, 0.0);
    }

    #[test]
    fn nan_integrand_is_an_error() {
        let r = integrate(|_| f64::NAN, 0.0, 1.0, Tolerance::default());
        assert!(matches!(r, Err(Error::Convergence(_))));
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let tol = Tolerance { abs: 0.0, rel: 1e-15, max_intervals: 3 };
        let r = integrate(|x: f64| x.sqrt(), 0.0, 1.0, tol);
        assert!(matches!(r, Err(Error::Convergence(_))));
    }
}
