//! Acceptance criteria 1 to 10. Each test prints one line:
//! `criterion NN PASS|FAIL <title>: <detail>`.
//!
//! Run with `cargo test -p toruspdo --test acceptance -- --nocapture --test-threads 1`.

mod trivial;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toruspdo_core::apply::{matrix_consistency_residual, PeriodicFunction};
use toruspdo_core::assoc::{build_assoc_matrix, gram_block, gram_blocks, CoeffVector};
use toruspdo_core::calculus::{compose_asymptotic, compose_exact_matrix, symbol_from_matrix};
use toruspdo_core::linalg::singular_values;
use toruspdo_core::riesz::{classify, classify_profile, mikhlin_check, ClassifyParams, StrictlySingularExample, Verdict};
use toruspdo_core::spectral::{
    crone_norm_diagonal, crone_norm_truncation, eigensolve_truncated, gershgorin_discs,
    multiplier_spectrum, resolvent_test, schur_bound, ResolventVerdict, SANDWICH_RTOL,
};
use toruspdo_core::symbol::{fourier_table, japanese_bracket, Symbol, ToroidalGrid};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn bracket_inv(k: i64) -> Complex64 {
    c(1.0 / japanese_bracket(k as f64), 0.0)
}

pub fn symbols_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/symbols")
}

fn verdict(id: u32, title: &str, passed: bool, detail: String) {
    let status = if passed { "PASS" } else { "FAIL" };
    println!("criterion {id:02} {status} {title}: {detail}");
    assert!(passed, "criterion {id} ({title}) failed: {detail}");
}

/// `Σ_{|m| ≤ band} (a_m + b_m/⟨k⟩) e^{imx}` with uniform random complex coefficients.
fn random_banded(rng: &mut ChaCha8Rng, band: usize, k_window: usize, resolution: usize) -> Symbol {
    let mut draw = || c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let coeffs: Vec<(Complex64, Complex64)> = (0..2 * band + 1).map(|_| (draw(), draw())).collect();
    let coeffs = Arc::new(coeffs);
    let b = band as i64;
    Symbol::closed_form(
        move |x, k| {
            (-b..=b)
                .map(|m| {
                    let (a, bb) = coeffs[(m + b) as usize];
                    (a + bb / japanese_bracket(k as f64)) * Complex64::from_polar(1.0, m as f64 * x)
                })
                .sum()
        },
        k_window,
        resolution,
    )
    .unwrap()
}

fn sup_diff_from(a: &ToroidalGrid, b: &ToroidalGrid, k0: i64) -> f64 {
    let kw = a.k_window().min(b.k_window()) as i64;
    let mut worst = 0.0f64;
    for k in (-kw..=kw).filter(|k| k.abs() >= k0) {
        for q in 0..a.resolution() {
            worst = worst.max((a.get(q, k) - b.get(q, k)).norm());
        }
    }
    worst
}

#[test]
fn criterion_01_finite_gershgorin() {
    let (n, band) = (16usize, 4usize);
    let mut worst = f64::NEG_INFINITY;
    let mut disc_mismatch = 0.0f64;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sym = random_banded(&mut rng, band, n, 64);
        let table = fourier_table(&sym.sample().unwrap(), band).unwrap();
        let matrix = build_assoc_matrix(&table, n).unwrap();
        let a = matrix.entries();
        let size = 2 * n + 1;
        // row discs read off the truncation itself
        let discs: Vec<(Complex64, f64)> = (0..size)
            .map(|i| (a[(i, i)], (0..size).filter(|&j| j != i).map(|j| a[(i, j)].norm()).sum()))
            .collect();
        for (d, (center, radius)) in gershgorin_discs(&table, n).unwrap().iter().zip(&discs) {
            disc_mismatch = disc_mismatch.max((d.center - center).norm()).max((d.radius_row - radius).abs());
        }
        for lambda in eigensolve_truncated(&matrix).unwrap() {
            let excess = discs.iter().map(|(z, r)| (lambda - z).norm() - r).fold(f64::INFINITY, f64::min);
            worst = worst.max(excess);
        }
    }
    verdict(
        1,
        "finite Gershgorin exactness",
        worst <= 1e-8 && disc_mismatch <= 1e-12,
        format!("50 symbols, n=16, M=4; worst excess over row discs {worst:.3e} (slack 1e-8), disc routine vs matrix {disc_mismatch:.1e}"),
    );
}

#[test]
fn criterion_02_quadratic_potential() {
    let n = 16usize;
    let sym = Symbol::closed_form(|x, k| c((k * k) as f64, 0.0) + Complex64::from_polar(0.25, x), n, 64).unwrap();
    let table = fourier_table(&sym.sample().unwrap(), 4).unwrap();
    let discs = gershgorin_discs(&table, n).unwrap();
    let center_err = discs.iter().map(|d| (d.center - c((d.k * d.k) as f64, 0.0)).norm()).fold(0.0, f64::max);
    let radius_err = discs.iter().map(|d| (d.radius_full - 0.25).abs()).fold(0.0, f64::max);
    let eigs = eigensolve_truncated(&build_assoc_matrix(&table, n).unwrap()).unwrap();
    let ni = n as i64;
    let max_dist = eigs
        .iter()
        .map(|l| (-ni..=ni).map(|k| (l - c((k * k) as f64, 0.0)).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let lambda = c(0.5, 0.0);
    let resolvent = resolvent_test(&table, lambda, n).unwrap().verdict;
    let min_gap = eigs.iter().map(|l| (l - lambda).norm()).fold(f64::INFINITY, f64::min);
    let passed = center_err <= 1e-12
        && radius_err <= 1e-12
        && max_dist <= 0.25 + 1e-8
        && resolvent == ResolventVerdict::InResolvent
        && min_gap >= 0.25;
    verdict(
        2,
        "k^2 + e^ix/4 discs and resolvent",
        passed,
        format!(
            "center err {center_err:.1e}, radius err {radius_err:.1e}, max eig distance to k^2 {max_dist:.3e}, \
             lambda=1/2 {}, min |eig - 1/2| = {min_gap:.4}",
            resolvent.as_str()
        ),
    );
}

#[test]
fn criterion_03_piecewise_decay() {
    let (n, resolution) = (16usize, 4096usize);
    let sym = Symbol::closed_form(
        |x, k| {
            let edge = 2.0 * PI / 2f64.powi(k.unsigned_abs() as i32);
            c(if x < edge { 1.0 } else { 0.0 }, 0.0)
        },
        n,
        resolution,
    )
    .unwrap();
    let grid = sym.sample().unwrap();
    let table = fourier_table(&grid, 64).unwrap();
    let gram = gram_block(&table, &grid, n).unwrap();
    let ni = n as i64;
    let mut worst_margin = f64::NEG_INFINITY;
    let mut checked = 0;
    for j in (-ni..=ni).filter(|j| j.abs() >= 4) {
        for k in (-ni..=ni).filter(|k| k.abs() >= 4 && *k != j) {
            let entry = gram[((j + ni) as usize, (k + ni) as usize)].norm();
            let bound = 2f64.powi(-(j.abs().max(k.abs()) as i32)) + 1e-3;
            worst_margin = worst_margin.max(entry - bound);
            checked += 1;
        }
    }
    verdict(
        3,
        "piecewise symbol Gram decay",
        worst_margin <= 0.0,
        format!("{checked} entries, Q=4096; max(|entry| - bound) = {worst_margin:.3e}"),
    );
}

#[test]
fn criterion_04_multiplication_norm() {
    let n = 64usize;
    let sym = Symbol::closed_form(|x, _| c(2.0, 0.0) + Complex64::from_polar(1.0, x), n, 256).unwrap();
    let grid = sym.sample().unwrap();
    let table = fourier_table(&grid, 1).unwrap();
    let matrix = build_assoc_matrix(&table, n).unwrap();
    let diag = crone_norm_diagonal(&matrix, 32).unwrap();
    let blocks = gram_blocks(&table, &grid, &[0, 1, 2, 4, 8, 16, 32, 64]).unwrap();
    let trunc = crone_norm_truncation(&blocks).unwrap();
    let schur = schur_bound(&matrix);
    let in_range = |v: f64| (8.5..=9.0).contains(&v);
    let diag_ok = in_range(diag.estimate);
    let trunc_ok = in_range(trunc.estimate);
    let schur_ok = (schur * schur - 9.0).abs() <= 4.0 * f64::EPSILON * 9.0;
    let sandwich_ok = diag.lower <= trunc.estimate * (1.0 + SANDWICH_RTOL) && trunc.estimate <= 9.0 * (1.0 + SANDWICH_RTOL);
    verdict(
        4,
        "multiplication operator norm",
        diag_ok && trunc_ok && schur_ok && sandwich_ok,
        format!(
            "crone_diagonal(max_power=32) = {:.4} [{}], crone_truncation(n=64) = {:.4} [{}], schur^2 = {:.17} [{}], \
             sandwich {:.4} <= {:.4} <= 9 [{}]",
            diag.estimate,
            ok(diag_ok),
            trunc.estimate,
            ok(trunc_ok),
            schur * schur,
            ok(schur_ok),
            diag.lower,
            trunc.estimate,
            ok(sandwich_ok)
        ),
    );
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

#[test]
fn criterion_05_multiplier_spectrum() {
    let n = 64usize;
    let sym = Symbol::multiplier(bracket_inv, n, 8).unwrap();
    let table = fourier_table(&sym.sample().unwrap(), 2).unwrap();
    let mut eigs = eigensolve_truncated(&build_assoc_matrix(&table, n).unwrap()).unwrap();
    let ni = n as i64;
    let mut want: Vec<Complex64> = (-ni..=ni).map(bracket_inv).collect();
    let key = |z: &Complex64| (z.re, z.im);
    eigs.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
    want.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
    let exact = eigs == want;
    let spectrum = multiplier_spectrum(&sym, n).unwrap();
    let has_zero = spectrum.accumulation_points.iter().any(|z| z.norm() < 1e-3);
    let m = mikhlin_check(&sym, n).unwrap();
    verdict(
        5,
        "multiplier spectrum",
        exact && has_zero && m.passed,
        format!(
            "129 eigenvalues equal <k>^-1 exactly: {exact}; accumulation points {:?}; Mikhlin C(64) = {:.6}, C(128) = {:.6}, passed {}",
            spectrum.accumulation_points.iter().map(|z| z.re).collect::<Vec<_>>(),
            m.c_estimate,
            m.c_doubled,
            m.passed
        ),
    );
}

#[test]
fn criterion_06_riesz_classification() {
    let k_window = 64usize;
    let compact = Symbol::closed_form(
        |x, k| Complex64::from_polar(1.0, x) / japanese_bracket(k as f64).sqrt(),
        k_window,
        16,
    )
    .unwrap();
    let yes = classify(&compact, &ClassifyParams::default()).unwrap();
    let tail_want = 1.0 / japanese_bracket(k_window as f64).sqrt();
    let tail_err = (yes.profile.tail_estimate - tail_want).abs();

    let identity = Symbol::closed_form(|_, _| c(1.0, 0.0), k_window, 16).unwrap();
    let no = classify(&identity, &ClassifyParams::default()).unwrap();

    // Eckart-Young: min over rank r <= n of ||M_n - K_r|| is the (n+1)-th singular value
    let n = 32usize;
    let table = fourier_table(&compact.sample().unwrap(), 1).unwrap();
    let sv = singular_values(build_assoc_matrix(&table, n).unwrap().entries()).unwrap();
    let best = sv[n];
    let floor = yes.gohberg_bound - 5e-2;

    let passed = yes.compact_l2 == Verdict::Yes
        && tail_err <= 1e-12
        && no.compact_l2 == Verdict::No
        && no.gohberg_bound == 1.0
        && best >= floor;
    verdict(
        6,
        "Riesz classification",
        passed,
        format!(
            "e^ix<k>^-1/2: {} tail {:.15} (want {tail_want:.15}); 1: {} gohberg {}; \
             Eckart-Young n=32 best {best:.4} >= {floor:.4}",
            yes.compact_l2.as_str(),
            yes.profile.tail_estimate,
            no.compact_l2.as_str(),
            no.gohberg_bound
        ),
    );
}

#[test]
fn criterion_07_calculus_oracle() {
    let (k, q) = (32usize, 64usize);
    let sigma = Symbol::multiplier(bracket_inv, k, q).unwrap();
    let tau = Symbol::closed_form(|x, _| Complex64::from_polar(1.0, x), k, q).unwrap();
    let expansion = compose_asymptotic(&sigma, &tau, 3).unwrap();
    let ts = fourier_table(&sigma.sample().unwrap(), 1).unwrap();
    let tt = fourier_table(&tau.sample().unwrap(), 1).unwrap();
    let exact = symbol_from_matrix(&compose_exact_matrix(&ts, &tt, k).unwrap(), q).unwrap();
    let errs: Vec<f64> = [4, 8, 16].iter().map(|&k0| sup_diff_from(&expansion.symbol_grid, &exact, k0)).collect();
    let monotone = errs[0] > errs[1] && errs[1] > errs[2];

    let mut exact_err = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let a = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let alpha = Symbol::multiplier(move |k| a * k as f64 + 1.0, 16, 16).unwrap();
        let beta = Symbol::multiplier(move |k| b / japanese_bracket(k as f64), 16, 16).unwrap();
        let r = compose_asymptotic(&alpha, &beta, 4).unwrap();
        for kk in -13i64..=13 {
            let want = (a * kk as f64 + 1.0) * (b / japanese_bracket(kk as f64));
            exact_err = exact_err.max((r.symbol_grid.get(0, kk) - want).norm());
        }
        let phi = Symbol::closed_form(move |x, _| a * x.cos() + b, 8, 32).unwrap();
        let psi = Symbol::closed_form(move |x, _| b * Complex64::from_polar(1.0, 2.0 * x), 8, 32).unwrap();
        let r = compose_asymptotic(&phi, &psi, 3).unwrap();
        for qq in 0..32 {
            let x = 2.0 * PI * qq as f64 / 32.0;
            let want = (a * x.cos() + b) * b * Complex64::from_polar(1.0, 2.0 * x);
            for kk in -6i64..=6 {
                exact_err = exact_err.max((r.symbol_grid.get(qq, kk) - want).norm());
            }
        }
    }
    verdict(
        7,
        "calculus oracle agreement",
        errs[1] < 1e-2 && monotone && exact_err <= 1e-12,
        format!(
            "N=3 sup error for |k| >= 4, 8, 16: {:.3e}, {:.3e}, {:.3e}; exact classes max error {exact_err:.1e}",
            errs[0], errs[1], errs[2]
        ),
    );
}

#[test]
fn criterion_08_diagram_commutativity() {
    let (n, band, resolution) = (16usize, 8usize, 1024usize);
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let sym = random_banded(&mut rng, band, n, resolution);
        let values = (0..2 * n + 1).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let f = PeriodicFunction::from_coeffs(CoeffVector::new(n, values).unwrap(), resolution).unwrap();
        worst = worst.max(matrix_consistency_residual(&sym, &f, n, band).unwrap());
    }
    verdict(
        8,
        "diagram commutativity",
        worst < 1e-8,
        format!("20 pairs, n=16, M=8, Q=1024; worst residual {worst:.3e}"),
    );
}

#[test]
fn criterion_09_strictly_singular_example() {
    let ex = StrictlySingularExample::new(1.5, 64).unwrap();
    let fit = ex.sup_abs(16).max(ex.sup_abs(-16)) * 4.0;
    let mut worst_ratio = 0.0f64;
    for k in [32i64, 64, -32, -64] {
        worst_ratio = worst_ratio.max(ex.sup_abs(k) / (fit / (k.abs() as f64).sqrt()));
    }
    let params = ClassifyParams { lp_exponent: 1.5, ..ClassifyParams::default() };
    let class = classify_profile(&ex.profile(64, params.tail_band).unwrap(), &params, None).unwrap();
    verdict(
        9,
        "strictly singular example",
        worst_ratio <= 1.0 && class.riesz_lp == Verdict::Yes,
        format!(
            "C fitted at |k|=16: {fit:.6}; max sup|sigma_A| / (C|k|^-1/2) at |k| in {{32, 64}}: {worst_ratio:.4}; riesz_Lp {}",
            class.riesz_lp.as_str()
        ),
    );
}

#[test]
fn criterion_10_cli_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let symbol = symbols_dir().join("quadratic_potential.json");
    let mut outputs = Vec::new();
    let mut statuses = Vec::new();
    for name in ["first.json", "second.json"] {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_toruspdo"))
            .arg("report")
            .arg("--symbol")
            .arg(&symbol)
            .arg("--out")
            .arg(&path)
            .status()
            .unwrap();
        statuses.push(status.code());
        outputs.push(std::fs::read(&path).unwrap());
    }
    let identical = outputs[0] == outputs[1] && !outputs[0].is_empty();
    let results = trivial::run_all();
    let failed: Vec<&str> = results.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
    verdict(
        10,
        "CLI reproducibility",
        identical && statuses == [Some(0), Some(0)] && failed.is_empty(),
        format!(
            "two report runs byte-identical: {identical} ({} bytes, exit {:?}); TRIVIAL examples {}/{} pass{}",
            outputs[0].len(),
            statuses,
            results.len() - failed.len(),
            results.len(),
            if failed.is_empty() { String::new() } else { format!(", failing: {failed:?}") }
        ),
    );
}
