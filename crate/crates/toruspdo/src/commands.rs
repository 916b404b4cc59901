//! Subcommand implementations. Each returns the rendered output and an exit code.

use std::fmt::Write as _;
use std::path::Path;
use std::thread;

use serde::Serialize;
use toruspdo_core::apply::{apply_grid, consistency_residual_grid, PeriodicFunction};
use toruspdo_core::assoc::{build_assoc_matrix, gram_blocks, AssocMatrix};
use toruspdo_core::calculus::{adjoint_grid, compose_grids, ExpansionResult};
use toruspdo_core::riesz::{classify, Classification, ClassifyParams, Verdict};
use toruspdo_core::spectral::{
    crone_norm_diagonal, crone_norm_truncation, disc_union_report, eigensolve_truncated,
    gershgorin_discs, invertibility_test, max_feasible_power, multiplier_spectrum, schur_bound,
    InvertibilityReport, InvertibilityVerdict, MultiplierSpectrum, NormEstimate, SpectralReport,
};
use toruspdo_core::symbol::{fourier_table, FourierTable, Symbol, ToroidalGrid};
use toruspdo_core::Complex64;

use crate::config::{Command, OutputFormat, RunConfig, Settings};
use crate::error::{CliError, Result};
use crate::formats::{
    function_from_csv, function_to_csv, grid_to_csv, matrix_to_csv, read_text, CoeffFile, SymbolFile,
};
use crate::json::{self, format_f64};
use crate::report::*;

/// Modes below this fraction of the largest coefficient are dropped from the band.
pub const BAND_RTOL: f64 = 1e-14;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub body: String,
    /// Diagnostics for stderr.
    pub messages: Vec<String>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self { exit_code: EXIT_OK, body, messages: Vec::new() }
    }
}

/// A symbol sampled on the configured window, with its trimmed table and truncation.
pub struct Prepared {
    pub symbol: Symbol,
    pub grid: ToroidalGrid,
    pub table: FourierTable,
    pub matrix: AssocMatrix,
}

pub fn prepare(file: &SymbolFile, s: &Settings) -> Result<Prepared> {
    let symbol = file.to_symbol(s.k_window, s.resolution)?;
    let grid = symbol.sample()?;
    let table = fourier_table(&grid, s.m_window)?.trim_band(BAND_RTOL);
    let matrix = build_assoc_matrix(&table, s.n)?;
    Ok(Prepared { symbol, grid, table, matrix })
}

fn window(p: &Prepared, s: &Settings) -> WindowRecord {
    WindowRecord {
        n: s.n,
        k_window: s.k_window,
        resolution: s.resolution,
        m_window: s.m_window,
        band: p.matrix.band(),
        trusted_radius: p.matrix.trusted_radius(),
    }
}

/// Worker count from `TORUSPDO_THREADS`, else the available parallelism.
pub fn thread_cap() -> usize {
    std::env::var("TORUSPDO_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| *n >= 1)
        .unwrap_or_else(|| thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

type Job<'a, T> = Box<dyn FnOnce() -> T + Send + 'a>;

/// Run independent jobs on at most `cap` scoped threads; results keep job order.
fn run_jobs<'a, T: Send>(cap: usize, jobs: Vec<Job<'a, T>>) -> Vec<T> {
    if cap <= 1 {
        return jobs.into_iter().map(|j| j()).collect();
    }
    let mut out = Vec::with_capacity(jobs.len());
    let mut jobs = jobs.into_iter().peekable();
    while jobs.peek().is_some() {
        let wave: Vec<Job<'a, T>> = jobs.by_ref().take(cap).collect();
        thread::scope(|scope| {
            let handles: Vec<_> = wave.into_iter().map(|j| scope.spawn(j)).collect();
            for h in handles {
                out.push(h.join().expect("analysis thread panicked"));
            }
        });
    }
    out
}

fn render<T: Serialize>(value: &T) -> Result<String> {
    json::to_string(value)
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let s = &cfg.settings;
    match cfg.command {
        Command::Matrix => matrix(&prepare(&cfg.symbols[0].1, s)?, s),
        Command::Gershgorin => gershgorin(&prepare(&cfg.symbols[0].1, s)?, s),
        Command::Eigs => eigs(&prepare(&cfg.symbols[0].1, s)?, s),
        Command::Norm => {
            let p = prepare(&cfg.symbols[0].1, s)?;
            let norms = norm_summary(&p, s)?;
            Ok(Outcome::ok(match s.format {
                OutputFormat::Json => render(&norms)?,
                OutputFormat::Csv => norms_csv(&norms),
            }))
        }
        Command::Classify => classify_cmd(&cfg.symbols[0].1, s),
        Command::Compose => {
            let a = cfg.symbols[0].1.to_symbol(s.k_window, s.resolution)?.sample()?;
            let b = cfg.symbols[1].1.to_symbol(s.k_window, s.resolution)?.sample()?;
            expansion_out(&compose_grids(&a, &b, s.expansion_order)?, s)
        }
        Command::Adjoint => {
            let a = cfg.symbols[0].1.to_symbol(s.k_window, s.resolution)?.sample()?;
            expansion_out(&adjoint_grid(&a, s.expansion_order)?, s)
        }
        Command::Apply => apply_cmd(&prepare(&cfg.symbols[0].1, s)?, cfg.input.as_deref().expect("validated"), s),
        Command::Report => report(&prepare(&cfg.symbols[0].1, s)?, s),
    }
}

fn matrix(p: &Prepared, s: &Settings) -> Result<Outcome> {
    #[derive(Serialize)]
    struct MatrixJson {
        n: usize,
        #[serde(rename = "M")]
        band: usize,
        trusted_radius: Option<usize>,
        /// `[j, k, re, im]` rows.
        entries: Vec<(i64, i64, f64, f64)>,
    }
    Ok(Outcome::ok(match s.format {
        OutputFormat::Csv => matrix_to_csv(&p.matrix)?,
        OutputFormat::Json => {
            let m = &p.matrix;
            let entries = m
                .indices()
                .flat_map(|j| m.indices().map(move |k| (j, k)))
                .map(|(j, k)| {
                    let v = m.get(j, k);
                    (j, k, v.re, v.im)
                })
                .collect();
            render(&MatrixJson { n: m.n(), band: m.band(), trusted_radius: m.trusted_radius(), entries })?
        }
    }))
}

fn discs_csv(discs: &[DiscRecord]) -> String {
    let mut out = String::from("k,center_re,center_im,r_row,r_col,r_full\n");
    for d in discs {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            d.k,
            format_f64(d.center[0]),
            format_f64(d.center[1]),
            format_f64(d.r_row),
            format_f64(d.r_col),
            format_f64(d.r_full)
        )
        .expect("String write");
    }
    out
}

fn gershgorin(p: &Prepared, s: &Settings) -> Result<Outcome> {
    #[derive(Serialize)]
    struct DiscsJson {
        window: WindowRecord,
        discs: Vec<DiscRecord>,
    }
    let discs: Vec<DiscRecord> = gershgorin_discs(&p.table, s.n)?.iter().map(DiscRecord::from).collect();
    Ok(Outcome::ok(match s.format {
        OutputFormat::Csv => discs_csv(&discs),
        OutputFormat::Json => render(&DiscsJson { window: window(p, s), discs })?,
    }))
}

fn eigs(p: &Prepared, s: &Settings) -> Result<Outcome> {
    #[derive(Serialize)]
    struct EigsJson {
        window: WindowRecord,
        eigenvalues: Vec<Pair>,
    }
    let eig = eigensolve_truncated(&p.matrix)?;
    Ok(Outcome::ok(match s.format {
        OutputFormat::Csv => {
            let mut out = String::from("re,im\n");
            for z in &eig {
                writeln!(out, "{},{}", format_f64(z.re), format_f64(z.im)).expect("String write");
            }
            out
        }
        OutputFormat::Json => render(&EigsJson { window: window(p, s), eigenvalues: eig.into_iter().map(pair).collect() })?,
    }))
}

/// Gram block sizes `0, 1, 2, 4, …` up to and including `t`.
fn truncation_sizes(t: usize) -> Vec<usize> {
    let mut ns = vec![0];
    let mut n = 1;
    while n < t {
        ns.push(n);
        n *= 2;
    }
    if t > 0 {
        ns.push(t);
    }
    ns
}

struct Norms {
    diagonal: Option<NormEstimate>,
    truncation: NormEstimate,
    schur: f64,
    notes: Vec<String>,
}

fn compute_norms(p: &Prepared, s: &Settings) -> Result<Norms> {
    let mut notes = Vec::new();
    let powers = s.max_power.min(max_feasible_power(&p.matrix));
    if powers < s.max_power {
        notes.push(format!(
            "max_power reduced from {} to {powers}: higher powers of M*M have no trusted region at n={}",
            s.max_power, s.n
        ));
    }
    let diagonal = if powers >= 1 { Some(crone_norm_diagonal(&p.matrix, powers)?) } else { None };
    let Some(t) = p.matrix.trusted_radius() else {
        return Err(toruspdo_core::Error::TrustedRegionEmpty(format!(
            "band {} exceeds window {}",
            p.matrix.band(),
            s.n
        ))
        .into());
    };
    let truncation = crone_norm_truncation(&gram_blocks(&p.table, &p.grid, &truncation_sizes(t))?)?;
    Ok(Norms { diagonal, truncation, schur: schur_bound(&p.matrix), notes })
}

fn summarize(n: &Norms) -> NormSummary {
    NormSummary {
        crone_diagonal: n.diagonal.as_ref().map(NormRecord::from),
        crone_truncation: NormRecord::from(&n.truncation),
        schur: n.schur,
        schur_squared: n.schur * n.schur,
        operator_norm: n.truncation.estimate.sqrt(),
        notes: n.notes.clone(),
    }
}

fn norm_summary(p: &Prepared, s: &Settings) -> Result<NormSummary> {
    Ok(summarize(&compute_norms(p, s)?))
}

fn norms_csv(n: &NormSummary) -> String {
    let mut out = String::from("method,index,value\n");
    let mut rows = |rec: &NormRecord| {
        for (i, v) in &rec.per_n {
            writeln!(out, "{},{i},{}", rec.method, format_f64(*v)).expect("String write");
        }
    };
    if let Some(d) = &n.crone_diagonal {
        rows(d);
    }
    rows(&n.crone_truncation);
    writeln!(out, "schur,0,{}", format_f64(n.schur)).expect("String write");
    out
}

fn classification(file: &SymbolFile, s: &Settings) -> Result<Classification> {
    let symbol = file.to_symbol(s.k_window, s.resolution)?;
    let params = ClassifyParams { tol_decay: s.tol_decay, ..ClassifyParams::default() };
    Ok(classify(&symbol, &params)?)
}

fn undecided(c: &Classification) -> bool {
    c.compact_l2 == Verdict::Undecided || c.riesz_lp == Verdict::Undecided
}

fn classify_cmd(file: &SymbolFile, s: &Settings) -> Result<Outcome> {
    let c = classification(file, s)?;
    let body = match s.format {
        OutputFormat::Json => render(&ClassificationRecord::from(&c))?,
        OutputFormat::Csv => {
            let mut out = String::from("k,sup_abs\n");
            let kw = c.profile.k_window as i64;
            for (k, v) in (-kw..=kw).zip(&c.profile.per_k) {
                writeln!(out, "{k},{}", format_f64(*v)).expect("String write");
            }
            out
        }
    };
    let mut outcome = Outcome::ok(body);
    if s.strict && undecided(&c) {
        outcome.exit_code = EXIT_UNDECIDED;
        outcome.messages.push("classification is UNDECIDED".into());
    }
    Ok(outcome)
}

fn expansion_out(r: &ExpansionResult, s: &Settings) -> Result<Outcome> {
    let g = &r.symbol_grid;
    let body = match s.format {
        OutputFormat::Csv => grid_to_csv(g),
        OutputFormat::Json => render(&ExpansionRecord {
            order_n: r.order_n,
            remainder_proxy: r.remainder_proxy,
            term_sups: r.term_sups.clone(),
            warnings: r.warnings.clone(),
            k_window: g.k_window(),
            resolution: g.resolution(),
            samples: g.values().iter().copied().map(pair).collect(),
        })?,
    };
    Ok(Outcome { exit_code: EXIT_OK, body, messages: r.warnings.clone() })
}

fn load_function(path: &Path, s: &Settings) -> Result<PeriodicFunction> {
    let text = read_text(path)?;
    let f = if path.extension().is_some_and(|e| e == "json") {
        PeriodicFunction::from_coeffs(CoeffFile::parse(&text)?.to_vector()?, s.resolution)?
    } else {
        function_from_csv(&text)?
    };
    if f.resolution() != s.resolution {
        return Err(CliError::Config(format!(
            "input has Q={}, run uses Q={}",
            f.resolution(),
            s.resolution
        )));
    }
    Ok(f)
}

fn apply_cmd(p: &Prepared, input: &Path, s: &Settings) -> Result<Outcome> {
    let f = load_function(input, s)?;
    let g = apply_grid(&p.grid, &f, s.n)?;
    let residual = consistency_residual_grid(&p.grid, &f, s.n, p.table.m_window())?;
    let mut messages = Vec::new();
    if let Some(t) = g.truncation() {
        messages.push(format!("input truncated to |k| <= {}; dropped L2 mass {:e}", t.n, t.dropped_l2));
    }
    let body = match s.format {
        OutputFormat::Csv => function_to_csv(&g),
        OutputFormat::Json => render(&ApplyRecord {
            resolution: g.resolution(),
            n: s.n,
            samples: g.samples().iter().copied().map(pair).collect(),
            truncation: g.truncation().map(|t| TruncationRecord { n: t.n, dropped_l2: t.dropped_l2 }),
            matrix_consistency_residual: residual,
        })?,
    };
    Ok(Outcome { exit_code: EXIT_OK, body, messages })
}

enum Part {
    Eigs(Result<Vec<Complex64>>),
    Norms(Result<Norms>),
    Class(Result<Classification>),
    Inv(Result<InvertibilityReport>),
    Spectrum(Option<MultiplierSpectrum>),
}

pub fn report(p: &Prepared, s: &Settings) -> Result<Outcome> {
    let params = ClassifyParams { tol_decay: s.tol_decay, ..ClassifyParams::default() };
    let jobs: Vec<Job<'_, Part>> = vec![
        Box::new(|| Part::Eigs(eigensolve_truncated(&p.matrix).map_err(Into::into))),
        Box::new(|| Part::Norms(compute_norms(p, s))),
        Box::new(move || Part::Class(classify(&p.symbol, &params).map_err(Into::into))),
        Box::new(|| Part::Inv(invertibility_test(&p.table, &p.grid, s.n).map_err(Into::into))),
        Box::new(|| {
            Part::Spectrum(if p.symbol.is_multiplier() { multiplier_spectrum(&p.symbol, s.k_window).ok() } else { None })
        }),
    ];
    let (mut eig, mut norms, mut class, mut inv, mut spectrum) = (None, None, None, None, None);
    for part in run_jobs(thread_cap(), jobs) {
        match part {
            Part::Eigs(r) => eig = Some(r?),
            Part::Norms(r) => norms = Some(r?),
            Part::Class(r) => class = Some(r?),
            Part::Inv(r) => inv = Some(r?),
            Part::Spectrum(r) => spectrum = r,
        }
    }
    let (eig, norms, class, inv) = (
        eig.expect("eigs job"),
        norms.expect("norm job"),
        class.expect("classify job"),
        inv.expect("invertibility job"),
    );
    let discs = gershgorin_discs(&p.table, s.n)?;
    let containment = disc_union_report(&discs, &eig);
    let summary = summarize(&norms);
    let core = SpectralReport {
        n: s.n,
        discs,
        eigenvalues: eig,
        containment,
        norm_diagonal: norms.diagonal,
        norm_truncation: norms.truncation,
        schur: norms.schur,
        invertibility: inv,
        resolvent_tests: Vec::new(),
    };
    let failures = core.cross_validate();
    let record = SpectralReportRecord {
        window: window(p, s),
        discs: core.discs.iter().map(DiscRecord::from).collect(),
        eigenvalues: core.eigenvalues.iter().copied().map(pair).collect(),
        containment: ContainmentRecord::from(&core.containment),
        norm: summary,
        verdicts: Verdicts {
            invertibility: InvertibilityRecord::from(&core.invertibility),
            classification: ClassificationRecord::from(&class),
            spectrum: spectrum.as_ref().map(SpectrumRecord::from),
        },
        cross_checks: CrossChecks { passed: failures.is_empty(), failures: failures.clone() },
    };
    let body = match s.format {
        OutputFormat::Json => render(&record)?,
        OutputFormat::Csv => discs_csv(&record.discs),
    };
    let mut outcome = Outcome::ok(body);
    if !failures.is_empty() {
        outcome.exit_code = EXIT_ERROR;
        outcome.messages.extend(failures.iter().map(|f| format!("cross-check failed: {f}")));
    } else if s.strict && (undecided(&class) || core.invertibility.verdict == InvertibilityVerdict::Undecided) {
        outcome.exit_code = EXIT_UNDECIDED;
        outcome.messages.push("report contains UNDECIDED verdicts".into());
    }
    Ok(outcome)
}
