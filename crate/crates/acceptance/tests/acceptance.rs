//! Acceptance gate. Prints one PASS/FAIL line per criterion and fails if any
//! criterion fails.
//!
//! Lines are written straight to the process stdout so they show up even
//! when the test harness captures output.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser as _;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma_lr;
use ulindley_cli::app::{run, Cli};
use ulindley_cli::commands::{self, CompareMethod, CompareReport};
use ulindley_cli::ingest::{ingest, Dataset, Scaling};
use unit_lindley::bayes::{conjugate_update, flat_posterior, mh_chain_seeded, MhConfig};
use unit_lindley::gof::{ks_p_value, ks_test, PValueMethod};
use unit_lindley::montecarlo::{presets, run_study, Estimator, StudyTable};
use unit_lindley::special::wg_mean;
use unit_lindley::stress::{reliability, DeltaRoute};
use unit_lindley::{mle_theta, UnitLindleyParam, WeightedGammaParam};
use unit_lindley_acceptance::{design, reference as refv, tolerance as tol};

struct Gate {
    results: Vec<(String, bool)>,
}

impl Gate {
    fn new() -> Self {
        Gate { results: Vec::new() }
    }

    fn record(&mut self, id: &str, name: &str, pass: bool, detail: String) {
        let line = format!(
            "{} {id:<3} {name}: {detail}\n",
            if pass { "PASS" } else { "FAIL" }
        );
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(line.as_bytes());
        let _ = out.flush();
        self.results.push((format!("{id} {name}"), pass));
    }

    fn note(&self, text: String) {
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(format!("     note: {text}\n").as_bytes());
    }
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn load(name: &str, scaling: Scaling) -> Dataset {
    ingest(&fixture(name), scaling).expect("fixture loads")
}

fn th(t: f64) -> UnitLindleyParam {
    UnitLindleyParam::new(t).unwrap()
}

fn mh() -> MhConfig {
    MhConfig {
        burn_in: design::BURN_IN,
        chain_length: design::CHAIN_LENGTH,
        ..MhConfig::default()
    }
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

// ── criterion 1 ────────────────────────────────────────────────────────────

fn mle_reproduction(g: &mut Gate) {
    let x = mle_theta(&load("x.csv", Scaling::None).scaled).unwrap().theta();
    let y = mle_theta(&load("y.csv", Scaling::None).scaled).unwrap().theta();
    let pass = (x - refv::GOF_X.0).abs() <= tol::POINT && (y - refv::GOF_Y.0).abs() <= tol::POINT;
    g.record(
        "1",
        "MLE reproduction",
        pass,
        format!("θ̂x = {x:.6} (want {}), θ̂y = {y:.6} (want {})", refv::GOF_X.0, refv::GOF_Y.0),
    );
}

// ── criterion 2 ────────────────────────────────────────────────────────────

fn ks_reproduction(g: &mut Gate) {
    let mut pass = true;
    let mut parts = Vec::new();
    for (file, (_, d_ref, p_ref)) in [("x.csv", refv::GOF_X), ("y.csv", refv::GOF_Y)] {
        let s = load(file, Scaling::None).scaled;
        let r = ks_test(&s, mle_theta(&s).unwrap()).unwrap();
        pass &= (r.statistic - d_ref).abs() <= tol::KS_STAT;
        pass &= (r.p_value - p_ref).abs() <= tol::KS_P;
        parts.push(format!(
            "{file}: D = {:.5} (want {d_ref}), p = {:.4} (want {p_ref}, {:?})",
            r.statistic, r.p_value, r.p_method
        ));
    }
    g.record("2", "KS reproduction", pass, parts.join("; "));
    // The printed p-values are what the default rule gives for the printed
    // statistics: exact for x, asymptotic for y (which has ties).
    let px = ks_p_value(refv::GOF_X.1, 14, PValueMethod::Exact).unwrap();
    let py = ks_p_value(refv::GOF_Y.1, 12, PValueMethod::Asymptotic).unwrap();
    g.note(format!(
        "p-values recomputed from the printed statistics: x {px:.4}, y {py:.4}"
    ));
    // Smallest statistic attainable for y over any θ.
    let s = load("y.csv", Scaling::None).scaled;
    let best = (0..2000)
        .map(|i| 0.005 * 400f64.powf(i as f64 / 1999.0))
        .map(|t| unit_lindley::gof::ks_statistic(&s, th(t)).unwrap())
        .fold(f64::INFINITY, f64::min);
    g.note(format!("min over θ in [0.005, 2] of D for y: {best:.5}"));
}

// ── criterion 3 ────────────────────────────────────────────────────────────

fn who_compare(method: CompareMethod, route: DeltaRoute, seed: u64) -> CompareReport {
    let na = load("who_north_america.csv", Scaling::Percent101);
    let sa = load("who_south_america.csv", Scaling::Percent101);
    commands::compare(&na, &sa, method, 0.95, route, mh(), seed).unwrap()
}

fn d_metric(g: &mut Gate) {
    let r = who_compare(CompareMethod::Ml, DeltaRoute::Gradient, 0);
    g.record(
        "3a",
        "D̂_ML on WHO data",
        (r.d_hat - refv::D_ML).abs() <= tol::POINT,
        format!("D̂ = {:.6} (want {})", r.d_hat, refv::D_ML),
    );

    let close = |ci: (f64, f64)| {
        (ci.0 - refv::D_ML_CI.0).abs() <= tol::CI_ENDPOINT
            && (ci.1 - refv::D_ML_CI.1).abs() <= tol::CI_ENDPOINT
    };
    let lit = who_compare(CompareMethod::Ml, DeltaRoute::Literal, 0);
    let lit_ci = lit.ci_d.unwrap();
    let grad_ci = r.ci_d.unwrap();
    g.record(
        "3b",
        "95% interval for D",
        close(lit_ci) || close(grad_ci),
        format!(
            "literal ({:.5}, {:.5}), gradient ({:.5}, {:.5}); want ({}, {})",
            lit_ci.0, lit_ci.1, grad_ci.0, grad_ci.1, refv::D_ML_CI.0, refv::D_ML_CI.1
        ),
    );
    let implied_se = (refv::D_ML_CI.1 - refv::D_ML_CI.0) / (4.0 * 1.959_964);
    let se = |c: &CompareReport| {
        let (lo, hi) = c.ci_r_unclipped.unwrap();
        (hi - lo) / (2.0 * 1.959_964)
    };
    g.note(format!(
        "SE of R̂: printed interval implies {implied_se:.5}; literal {:.5}; gradient {:.5}",
        se(&lit),
        se(&r)
    ));
}

// ── criterion 4 ────────────────────────────────────────────────────────────

/// Posterior mean of `g(θ_A, θ_B)` by a product Simpson rule on the log
/// scale of each posterior.
fn exact_posterior_r(a: &WeightedGammaParam, b: &WeightedGammaParam) -> f64 {
    fn nodes(w: &WeightedGammaParam) -> (Vec<f64>, Vec<f64>) {
        let lk = |s: f64| w.p() * s - w.alpha() * s.exp() - w.beta() * s.exp().ln_1p();
        let grid: Vec<f64> = (0..=20_000).map(|i| -30.0 + i as f64 * 0.003).collect();
        let peak = grid.iter().copied().map(lk).fold(f64::NEG_INFINITY, f64::max);
        let inside: Vec<f64> = grid.into_iter().filter(|&s| lk(s) > peak - 40.0).collect();
        let (lo, hi) = (inside[0], inside[inside.len() - 1]);
        let n = 400;
        let h = (hi - lo) / n as f64;
        let mut xs = Vec::new();
        let mut ws = Vec::new();
        for i in 0..=n {
            let s = lo + i as f64 * h;
            let c = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            xs.push(s.exp());
            ws.push(c * (lk(s) - peak).exp());
        }
        let total: f64 = ws.iter().sum();
        ws.iter_mut().for_each(|w| *w /= total);
        (xs, ws)
    }
    let (xa, wa) = nodes(a);
    let (xb, wb) = nodes(b);
    let mut acc = 0.0;
    for (ta, pa) in xa.iter().zip(&wa) {
        for (tb, pb) in xb.iter().zip(&wb) {
            acc += pa * pb * reliability(*ta, *tb);
        }
    }
    acc
}

fn bayes_d(g: &mut Gate) {
    let r = who_compare(CompareMethod::Flat, DeltaRoute::Gradient, design::SEED);
    let mcse = r.mcse_d.unwrap();
    g.record(
        "4",
        "Bayes D (flat prior)",
        (r.d_hat - refv::D_BAYES).abs() <= tol::MC_SIGMAS * mcse,
        format!(
            "D̂ = {:.6} ± {:.6} MCSE, k = {} (want {} within {} MCSE)",
            r.d_hat,
            mcse,
            design::CHAIN_LENGTH + 1 - design::BURN_IN,
            refv::D_BAYES,
            tol::MC_SIGMAS
        ),
    );
    let sa = load("who_south_america.csv", Scaling::Percent101).scaled;
    let na = load("who_north_america.csv", Scaling::Percent101).scaled;
    let exact = 1.0 - 2.0 * exact_posterior_r(&flat_posterior(&sa), &flat_posterior(&na));
    g.note(format!("posterior mean of D by quadrature: {exact:.6}"));
}

// ── criterion 5 ────────────────────────────────────────────────────────────

fn reliability_oracle(t1: f64, t2: f64) -> f64 {
    let f = |w: f64, t: f64| t * t / (1.0 + t) * (1.0 + w) * (-t * w).exp();
    let cdf = |w: f64, t: f64| 1.0 - (1.0 + t * w / (1.0 + t)) * (-t * w).exp();
    let hi = (900.0 / t1.min(t2)).ln();
    simpson(|s| {
        let w = s.exp();
        f(w, t1) * cdf(w, t2) * w
    }, -40.0, hi, 200_000)
}

fn r_closed_form(g: &mut Gate) {
    let grid: Vec<f64> = (0..20).map(|i| 0.05 * 400f64.powf(i as f64 / 19.0)).collect();
    let diag = grid.iter().map(|&t| (reliability(t, t) - 0.5).abs()).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for &a in &grid {
        for &b in &grid {
            worst = worst.max((reliability(a, b) - reliability_oracle(a, b)).abs());
        }
    }
    let table: Vec<f64> = refv::R_VALUES.iter().map(|&(a, b, _)| reliability(a, b)).collect();
    let table_ok = refv::R_VALUES
        .iter()
        .zip(&table)
        .all(|(&(_, _, want), got)| (got - want).abs() <= tol::R_PRINTED);
    g.record(
        "5",
        "R closed form",
        diag <= tol::DIAGONAL && worst <= tol::R_ORACLE && table_ok,
        format!(
            "max |g(θ,θ)−½| = {diag:.1e}, max |g − quadrature| on 20×20 = {worst:.1e}, table {:?}",
            table.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()
        ),
    );
}

// ── criterion 6 ────────────────────────────────────────────────────────────

fn wg_log_integral(a: f64, b: f64, p: f64) -> f64 {
    let lk = |s: f64| p * s - a * s.exp() - b * s.exp().ln_1p();
    let grid: Vec<f64> = (0..=8000).map(|i| -60.0 + i as f64 * 0.01).collect();
    let peak = grid.iter().copied().map(lk).fold(f64::NEG_INFINITY, f64::max);
    let inside: Vec<f64> = grid.into_iter().filter(|&s| lk(s) > peak - 80.0).collect();
    let (lo, hi) = (inside[0] - 0.5, inside[inside.len() - 1] + 0.5);
    peak + simpson(|s| (lk(s) - peak).exp(), lo, hi, 40_000).ln()
}

fn posterior_means(g: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(design::SEED);
    let mut worst: f64 = 0.0;
    let mut largest_m = 0;
    for i in 0..50 {
        let prior = WeightedGammaParam::new(
            rng.random_range(0.1..8.0),
            rng.random_range(0.0..6.0),
            rng.random_range(0.5..6.0),
        )
        .unwrap();
        let m = if i == 0 { 200 } else { rng.random_range(2..=200usize) };
        largest_m = largest_m.max(m);
        let s = unit_lindley::sample(th(rng.random_range(0.05..10.0)), m, &mut rng);
        let post = if i % 5 == 0 { flat_posterior(&s) } else { conjugate_update(&prior, &s) };
        let want = (wg_log_integral(post.alpha(), post.beta(), post.p() + 1.0)
            - wg_log_integral(post.alpha(), post.beta(), post.p()))
        .exp();
        let got = wg_mean(&post).unwrap();
        worst = worst.max(((got - want) / want).abs());
    }
    g.record(
        "6",
        "Posterior-mean closed forms",
        worst <= tol::WG_MEAN_REL,
        format!("50 posteriors, m up to {largest_m}, max relative error {worst:.1e}"),
    );
}

// ── criterion 7 ────────────────────────────────────────────────────────────

fn mh_validity(g: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(design::SEED + 7);
    let mut worst: f64 = 0.0;
    let mut fails = 0;
    for i in 0..20 {
        let w = WeightedGammaParam::new(
            rng.random_range(0.1..300.0),
            rng.random_range(0.0..60.0),
            rng.random_range(1.0..120.0),
        )
        .unwrap();
        let s = mh_chain_seeded(&w, &mh(), design::SEED + i).unwrap().summary();
        let z = ((s.mean - wg_mean(&w).unwrap()) / s.mcse).abs();
        worst = worst.max(z);
        fails += (z > tol::MC_SIGMAS) as usize;
    }
    g.record(
        "7",
        "MH validity",
        fails == 0,
        format!("20 targets, max |chain mean − closed form| = {worst:.2} MCSE"),
    );
}

// ── criterion 8 ────────────────────────────────────────────────────────────

fn run_cells(cells: Vec<unit_lindley::montecarlo::SimulationConfig>) -> Vec<StudyTable> {
    cells
        .into_iter()
        .map(|mut c| {
            c.replications = design::REPLICATIONS;
            run_study(&c).unwrap()
        })
        .collect()
}

fn table1(g: &mut Gate) {
    let tables = run_cells(presets::theta_cells(design::SEED));
    let mut within = 0;
    let mut total = 0;
    let mut ordered = 0;
    let mut misses = Vec::new();
    for (t, &(m, theta, b_ml, e_ml, b_i, e_i)) in tables.iter().zip(&refv::THETA_TABLE) {
        assert_eq!(t.m, m);
        let ml = t.row(Estimator::Ml).unwrap();
        let fl = t.row(Estimator::Flat).unwrap();
        for (label, got, se, want) in [
            ("bias ML", ml.bias, ml.bias_se, b_ml),
            ("MSE ML", ml.mse, ml.mse_se, e_ml),
            ("bias I", fl.bias, fl.bias_se, b_i),
            ("MSE I", fl.mse, fl.mse_se, e_i),
        ] {
            total += 1;
            let allowed = tol::TABLE_SIGMAS * se + refv::THETA_TABLE_ROUNDING;
            if (got - want).abs() <= allowed {
                within += 1;
            } else {
                misses.push(format!("m={m} θ={theta} {label}: {got:.4} vs {want} (±{allowed:.4})"));
            }
        }
        ordered += (ml.mse <= fl.mse) as usize;
    }
    g.record(
        "8",
        "Fixed-θ table",
        within == total && ordered == tables.len(),
        format!(
            "{within}/{total} entries within 3·√2·SE + 0.0005, MSE(ML) ≤ MSE(I) in {ordered}/{} cells",
            tables.len()
        ),
    );
    for m in misses {
        g.note(m);
    }
}

// ── criterion 9 ────────────────────────────────────────────────────────────

fn best_mse(t: &StudyTable, e: Estimator) -> bool {
    let target = t.row(e).unwrap().mse;
    t.rows.iter().all(|r| r.estimator == e || target <= r.mse)
}

fn prior_tables(g: &mut Gate) {
    let t2 = run_cells(presets::theta_prior_cells(design::SEED));
    let a_best_2 = t2.iter().filter(|t| best_mse(t, Estimator::Conjugate)).count();
    let t4 = run_cells(presets::r_prior_cells(design::SEED));
    let a_best_4 = t4.iter().filter(|t| best_mse(t, Estimator::Conjugate)).count();
    let m_worse = t4
        .iter()
        .filter(|t| {
            t.row(Estimator::Misspec).unwrap().bias.abs() > t.row(Estimator::Flat).unwrap().bias.abs()
        })
        .count();
    let majority = t4.len() / 2 + 1;
    g.record(
        "9",
        "Prior-study rankings",
        a_best_2 == t2.len() && a_best_4 >= majority && m_worse >= majority,
        format!(
            "θ̂_A best in {a_best_2}/{} cells; R̂_A best in {a_best_4}/{}, |bias R̂_M| > |bias R̂_I| in {m_worse}/{}",
            t2.len(),
            t4.len(),
            t4.len()
        ),
    );
}

// ── criterion 10 ───────────────────────────────────────────────────────────

fn lindley_sum_cdf(w: f64, m: usize, t: f64) -> f64 {
    let pe = t / (1.0 + t);
    (0..=m)
        .map(|k| {
            let ln_c: f64 = (1..=k).map(|i| ((m - k + i) as f64 / i as f64).ln()).sum();
            let wt = (ln_c + k as f64 * pe.ln() + (m - k) as f64 * (1.0 - pe).ln()).exp();
            wt * gamma_lr((2 * m - k) as f64, t * w)
        })
        .sum()
}

fn sampler(g: &mut Gate) {
    let t = 1.5;
    let mut rng = ChaCha8Rng::seed_from_u64(design::SEED + 10);
    let s = unit_lindley::sample(th(t), design::MEAN_DRAWS, &mut rng);
    let n = s.len() as f64;
    let mean = s.values().iter().sum::<f64>() / n;
    let sd = (s.values().iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let z = (mean - 1.0 / (1.0 + t)) / (sd / n.sqrt());

    let (m, reps) = (10, 2000);
    let mut ts: Vec<f64> = (0..reps).map(|_| unit_lindley::sample(th(t), m, &mut rng).t()).collect();
    ts.sort_by(f64::total_cmp);
    let d = ts
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let f = lindley_sum_cdf(w, m, t);
            ((i + 1) as f64 / reps as f64 - f).max(f - i as f64 / reps as f64)
        })
        .fold(0.0, f64::max);
    let scaled = d * (reps as f64).sqrt();
    g.record(
        "10",
        "Sampler correctness",
        z.abs() <= tol::MC_SIGMAS && scaled < tol::KS_CRIT_5PCT,
        format!(
            "mean of 10⁶ draws off by {z:.2}σ; KS of t (m = {m}, {reps} draws) √n·D = {scaled:.3} (5% critical {})",
            tol::KS_CRIT_5PCT
        ),
    );
}

// ── criterion 11 ───────────────────────────────────────────────────────────

fn invoke(args: &[&str]) -> Vec<u8> {
    let cli = Cli::try_parse_from(std::iter::once("ulindley").chain(args.iter().copied())).unwrap();
    let mut out = Vec::new();
    let mut err = Vec::new();
    run(cli, &mut out, &mut err).unwrap();
    out
}

fn determinism(g: &mut Gate) {
    let f = |n: &str| fixture(n).to_string_lossy().into_owned();
    let (x, na, sa) = (f("x.csv"), f("who_north_america.csv"), f("who_south_america.csv"));
    let sim = f("sim/custom.toml");
    let dir = std::env::temp_dir().join(format!("ulindley-accept-{}", std::process::id()));
    let (d1, d2) = (dir.join("a"), dir.join("b"));
    let d1s = d1.to_string_lossy().into_owned();
    let d2s = d2.to_string_lossy().into_owned();
    let commands: Vec<Vec<&str>> = vec![
        vec!["fit", &x, "--method", "flat", "--mh", "--seed", "3", "--format", "json"],
        vec!["gof", &x, "--format", "csv"],
        vec!["compare", &na, &sa, "--scale", "percent101", "--method", "flat", "--seed", "5"],
        vec!["sample", "--theta", "1.5", "-n", "50", "--seed", "9"],
        vec!["sample", "--data", &x, "--seed", "9", "--chain-length", "3000", "--burn-in", "1000"],
    ];
    let mut identical = 0;
    for c in &commands {
        identical += (invoke(c) == invoke(c)) as usize;
    }
    let a = invoke(&["simulate", &sim, "--out", &d1s]);
    let b = invoke(&["simulate", &sim, "--out", &d2s]);
    let files_same = ["custom.csv", "custom.txt"]
        .iter()
        .all(|n| std::fs::read(d1.join(n)).unwrap() == std::fs::read(d2.join(n)).unwrap());
    identical += (a == b && files_same) as usize;
    let _ = std::fs::remove_dir_all(&dir);
    let total = commands.len() + 1;
    g.record(
        "11",
        "Determinism",
        identical == total,
        format!("{identical}/{total} repeated invocations byte-identical (stdout and files)"),
    );
}

#[test]
fn acceptance_criteria() {
    let mut g = Gate::new();
    mle_reproduction(&mut g);
    ks_reproduction(&mut g);
    d_metric(&mut g);
    bayes_d(&mut g);
    r_closed_form(&mut g);
    posterior_means(&mut g);
    mh_validity(&mut g);
    table1(&mut g);
    prior_tables(&mut g);
    sampler(&mut g);
    determinism(&mut g);

    let failed: Vec<&str> = g.results.iter().filter(|r| !r.1).map(|r| r.0.as_str()).collect();
    let passed = g.results.len() - failed.len();
    let _ = std::io::stdout().write_all(
        format!("acceptance: {passed}/{} criteria passed\n", g.results.len()).as_bytes(),
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
