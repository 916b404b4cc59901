//! Gershgorin localization, invertibility and resolvent tests, norm
//! estimates and the dense eigenvalue oracle for truncated associated
//! matrices.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::assoc::{adjoint, build_assoc_matrix, matmul, AssocMatrix};
use crate::error::{Error, Result};
use crate::fft::{signed_mode, Radix2};
use crate::linalg::{eigenvalues, hermitian_eigenvalues, sort_lexicographic, CMatrix};
use crate::riesz::{mikhlin_check, MikhlinResult};
use crate::symbol::{FourierTable, Symbol, ToroidalGrid};
use crate::tail::{aitken, aitken_complex, is_nondecreasing, is_nonincreasing, loglog_slope};

/// Largest truncation handed to the dense eigensolver.
pub const DENSE_LIMIT: usize = 2049;

/// Absolute slack for disc containment.
pub const CONTAINMENT_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GershgorinDisc {
    pub k: i64,
    pub center: Complex64,
    /// Off-diagonal row sum of the truncation at row `k`.
    pub radius_row: f64,
    /// Off-diagonal column sum of the truncation at column `k`.
    pub radius_col: f64,
    /// `Σ_{m ≠ 0} |σ̂(m, k)|` over the whole table band, ignoring the window.
    pub radius_full: f64,
}

fn effective_band(table: &FourierTable, n: usize) -> usize {
    if table.is_multiplier() {
        0
    } else {
        table.m_window().min(2 * n)
    }
}

/// One disc per `k ∈ [-n, n]`, radii summed over the truncation window.
pub fn gershgorin_discs(table: &FourierTable, n: usize) -> Result<Vec<GershgorinDisc>> {
    if n > table.k_window() {
        return Err(Error::WindowTooSmall(format!(
            "window n={n} exceeds the table's K={}",
            table.k_window()
        )));
    }
    let band = effective_band(table, n) as i64;
    let ni = n as i64;
    Ok((-ni..=ni)
        .map(|k| {
            let mut radius_row = 0.0;
            let mut radius_col = 0.0;
            let mut radius_full = 0.0;
            for m in -band..=band {
                if m == 0 {
                    continue;
                }
                radius_full += table.get(m, k).norm();
                // column k holds σ̂(j-k, k) at row j = k+m
                if (k + m).abs() <= ni {
                    radius_col += table.get(m, k).norm();
                }
                // row k holds σ̂(k-j, j) at column j = k-m
                let j = k - m;
                if j.abs() <= ni {
                    radius_row += table.get(m, j).norm();
                }
            }
            GershgorinDisc { k, center: table.get(0, k), radius_row, radius_col, radius_full }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvertibilityVerdict {
    Invertible,
    /// A sufficient condition is violated; nothing is claimed.
    Fails,
    /// The sampled centers do not allow an extrapolation of their infimum.
    Undecided,
}

impl InvertibilityVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            InvertibilityVerdict::Invertible => "INVERTIBLE",
            InvertibilityVerdict::Fails => "FAILS",
            InvertibilityVerdict::Undecided => "UNDECIDED",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvertibilityReport {
    pub verdict: InvertibilityVerdict,
    /// Conditions (i) nonzero centers, (ii) column ratios < 1, (iii) row ratios < 1.
    pub conditions: [bool; 3],
    /// The factor-2 forms, evaluated through L¹ norms of the columns of `M` and `M*`.
    pub primed: [bool; 3],
    pub primed_disagree: bool,
    /// `inf |σ̂(0,k)|` over the trusted region, lowered by the tail extrapolation.
    pub inf_center: f64,
    pub sup_ratio_col: f64,
    pub sup_ratio_row: f64,
    pub compact_inverse: bool,
    pub trusted_radius: usize,
    pub notes: Vec<String>,
}

impl InvertibilityReport {
    pub fn sup_ratio(&self) -> f64 {
        self.sup_ratio_col.max(self.sup_ratio_row)
    }
}

const DECAY_TOL: f64 = 1e-6;

fn check_decay(table: &FourierTable, grid: &ToroidalGrid, trusted: usize) -> Result<()> {
    if table.is_multiplier() || grid.is_x_independent() {
        return Ok(());
    }
    let resolution = grid.resolution();
    let plan = Radix2::new(resolution);
    let m = table.m_window() as i64;
    let mut buf = vec![Complex64::new(0.0, 0.0); resolution];
    let t = trusted as i64;
    for k in -t..=t {
        buf.copy_from_slice(grid.column(k));
        plan.forward(&mut buf);
        let mut missing = 0.0;
        let mut l1 = 0.0;
        for (idx, c) in buf.iter().enumerate() {
            if signed_mode(idx, resolution).abs() > m {
                missing += c.norm_sqr();
            } else {
                l1 += c.norm();
            }
        }
        if missing.sqrt() > DECAY_TOL * l1 {
            return Err(Error::InsufficientDecay(format!(
                "column k={k} keeps {:.3e} of its L2 mass beyond |m| > {m}",
                missing.sqrt()
            )));
        }
    }
    Ok(())
}

fn conditions(table: &FourierTable, n: usize) -> Result<InvertibilityReport> {
    if n > table.k_window() {
        return Err(Error::WindowTooSmall(format!(
            "window n={n} exceeds the table's K={}",
            table.k_window()
        )));
    }
    let band = effective_band(table, n);
    let Some(trusted) = n.checked_sub(band) else {
        return Err(Error::TrustedRegionEmpty(format!("band {band} exceeds window {n}")));
    };
    let discs = gershgorin_discs(table, n)?;
    let matrix = build_assoc_matrix(table, n)?;
    let star = adjoint(&matrix);
    let col_l1 = |m: &AssocMatrix, k: i64| m.indices().map(|j| m.get(j, k).norm()).sum::<f64>();

    let t = trusted as i64;
    let at = |k: i64| &discs[(k + n as i64) as usize];
    let mut notes = Vec::new();
    let mut inf_center = f64::INFINITY;
    let mut sup_col = 0.0f64;
    let mut sup_row = 0.0f64;
    let mut sup_col_primed = 0.0f64;
    let mut sup_row_primed = 0.0f64;
    for k in -t..=t {
        let d = at(k);
        let c = d.center.norm();
        inf_center = inf_center.min(c);
        sup_col = sup_col.max(d.radius_col / c);
        sup_row = sup_row.max(d.radius_row / c);
        sup_col_primed = sup_col_primed.max(col_l1(&matrix, k) / c);
        sup_row_primed = sup_row_primed.max(col_l1(&star, k) / c);
    }

    // the infimum over all of Z is extrapolated from the outer half of the window
    let mut tail_ok = true;
    let mut compact_inverse = false;
    if trusted >= 4 {
        let s = |a: usize| at(a as i64).center.norm().min(at(-(a as i64)).center.norm());
        let tail: Vec<f64> = (trusted / 2..=trusted).map(s).collect();
        if is_nondecreasing(&tail) {
            let (lo, hi) = (s(trusted / 2), s(trusted));
            if hi > lo && lo > 0.0 {
                compact_inverse = loglog_slope((trusted / 2) as f64, lo, trusted as f64, hi) >= 0.25;
            }
        } else if is_nonincreasing(&tail) {
            match aitken([s(trusted / 4), s(trusted / 2), s(trusted)]) {
                Some(l) => {
                    inf_center = inf_center.min(l.max(0.0));
                    notes.push(format!("center tail decreases; extrapolated infimum {l:.6e}"));
                }
                None => {
                    tail_ok = false;
                    notes.push(String::from("center tail decreases without a usable extrapolation"));
                }
            }
        } else {
            tail_ok = false;
            notes.push(String::from("center tail is not monotone"));
        }
    } else {
        tail_ok = false;
        notes.push(format!("trusted radius {trusted} too small to extrapolate the centers"));
    }

    let scale = (-(n as i64)..=n as i64)
        .flat_map(|k| (-(band as i64)..=band as i64).map(move |m| (m, k)))
        .map(|(m, k)| table.get(m, k).norm())
        .fold(0.0f64, f64::max);
    let nonzero = inf_center > 1e-12 * scale.max(f64::MIN_POSITIVE);
    let cond = [nonzero, nonzero && sup_col < 1.0, nonzero && sup_row < 1.0];
    let primed = [nonzero, nonzero && sup_col_primed < 2.0, nonzero && sup_row_primed < 2.0];
    let primed_disagree = cond != primed;
    if primed_disagree {
        notes.push(String::from("primed and unprimed conditions disagree"));
    }
    let verdict = if !cond.iter().all(|c| *c) {
        InvertibilityVerdict::Fails
    } else if !tail_ok {
        InvertibilityVerdict::Undecided
    } else {
        InvertibilityVerdict::Invertible
    };
    Ok(InvertibilityReport {
        verdict,
        conditions: cond,
        primed,
        primed_disagree,
        inf_center,
        sup_ratio_col: if nonzero { sup_col } else { f64::INFINITY },
        sup_ratio_row: if nonzero { sup_row } else { f64::INFINITY },
        compact_inverse: compact_inverse && verdict == InvertibilityVerdict::Invertible,
        trusted_radius: trusted,
        notes,
    })
}

/// Diagonal-dominance test for invertibility with a bounded inverse.
///
/// Ratios are taken on the trusted region `|k| ≤ n - M`; the grid is used to
/// confirm that the off-diagonal sums have converged within the band `M`.
pub fn invertibility_test(
    table: &FourierTable,
    grid: &ToroidalGrid,
    n: usize,
) -> Result<InvertibilityReport> {
    let report = conditions(table, n)?;
    check_decay(table, grid, report.trusted_radius)?;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolventVerdict {
    InResolvent,
    Undecided,
}

impl ResolventVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            ResolventVerdict::InResolvent => "IN_RESOLVENT",
            ResolventVerdict::Undecided => "UNDECIDED",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventReport {
    pub lambda: Complex64,
    pub verdict: ResolventVerdict,
    pub shifted: InvertibilityReport,
}

/// `λ ∈ Res(T_σ)` when the shifted symbol `σ - λ` passes the invertibility test.
pub fn resolvent_test(table: &FourierTable, lambda: Complex64, n: usize) -> Result<ResolventReport> {
    let shifted = conditions(&table.shifted(lambda), n)?;
    let verdict = if shifted.verdict == InvertibilityVerdict::Invertible {
        ResolventVerdict::InResolvent
    } else {
        ResolventVerdict::Undecided
    };
    Ok(ResolventReport { lambda, verdict, shifted })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscComponent {
    pub ks: Vec<i64>,
    pub eigenvalue_count: usize,
    /// Eigenvalue count equals the number of discs; `None` with a single component.
    pub multiplicity_ok: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscUnionReport {
    pub components: Vec<DiscComponent>,
    /// Eigenvalues outside every row disc (beyond the slack).
    pub uncontained: Vec<Complex64>,
    /// `max_λ min_k (|λ - c_k| - r_k)`; nonpositive when every eigenvalue is contained.
    pub max_excess: f64,
}

impl DiscUnionReport {
    pub fn violations(&self) -> usize {
        self.uncontained.len()
            + self.components.iter().filter(|c| c.multiplicity_ok == Some(false)).count()
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Group row discs into connected components and count the eigenvalues in each.
pub fn disc_union_report(discs: &[GershgorinDisc], eigenvalues: &[Complex64]) -> DiscUnionReport {
    let n = discs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for a in 0..n {
        for b in a + 1..n {
            let gap = (discs[a].center - discs[b].center).norm();
            if gap <= discs[a].radius_row + discs[b].radius_row {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut comp_of = vec![0usize; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        let idx = match roots.iter().position(|&x| x == r) {
            Some(p) => p,
            None => {
                roots.push(r);
                roots.len() - 1
            }
        };
        comp_of[i] = idx;
    }
    let mut counts = vec![0usize; roots.len()];
    let mut uncontained = Vec::new();
    let mut max_excess = f64::NEG_INFINITY;
    for &lambda in eigenvalues {
        let mut best = f64::INFINITY;
        let mut owner = None;
        for (i, d) in discs.iter().enumerate() {
            let excess = (lambda - d.center).norm() - d.radius_row;
            if excess < best {
                best = excess;
                owner = Some(i);
            }
        }
        max_excess = max_excess.max(best);
        match owner {
            Some(i) if best <= CONTAINMENT_SLACK => counts[comp_of[i]] += 1,
            _ => uncontained.push(lambda),
        }
    }
    let several = roots.len() > 1;
    let components = (0..roots.len())
        .map(|c| {
            let ks: Vec<i64> = (0..n).filter(|&i| comp_of[i] == c).map(|i| discs[i].k).collect();
            let size = ks.len();
            DiscComponent {
                ks,
                eigenvalue_count: counts[c],
                multiplicity_ok: several.then_some(counts[c] == size),
            }
        })
        .collect();
    DiscUnionReport { components, uncontained, max_excess }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    CroneDiagonal,
    CroneTruncation,
    Schur,
}

impl NormMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            NormMethod::CroneDiagonal => "crone_diagonal",
            NormMethod::CroneTruncation => "crone_truncation",
            NormMethod::Schur => "schur",
        }
    }
}

/// Estimate of `‖M‖²` from a sequence whose supremum realizes it.
#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub lower: f64,
    pub upper: Option<f64>,
    pub estimate: f64,
    pub per_n: Vec<(usize, f64)>,
    pub method: NormMethod,
    /// The last two values of `per_n` agree to [`CONVERGENCE_RTOL`].
    pub converged: bool,
}

pub const CONVERGENCE_RTOL: f64 = 1e-3;

fn converged(per_n: &[(usize, f64)]) -> bool {
    match per_n {
        [.., (_, a), (_, b)] => (b - a).abs() <= CONVERGENCE_RTOL * b.abs().max(a.abs()),
        _ => false,
    }
}

/// Largest power `p` for which `(M*M)^p` keeps a nonempty trusted region.
pub fn max_feasible_power(matrix: &AssocMatrix) -> usize {
    let Some(t) = matrix.trusted_radius() else {
        return 0;
    };
    let b = matrix.band();
    if b == 0 {
        return usize::MAX;
    }
    match t.checked_sub(b) {
        // G = M*M trusts t - b with band 2b; each further factor costs 2b
        Some(g) => 1 + g / (2 * b),
        None => 0,
    }
}

/// `per_n = sup_k |((M*M)^p)_{kk}|^{1/p}` over the trusted region, `p = 1..=max_power`.
pub fn crone_norm_diagonal(matrix: &AssocMatrix, max_power: usize) -> Result<NormEstimate> {
    if max_power == 0 {
        return Err(Error::InvalidArgument("max_power must be >= 1".into()));
    }
    let gram = matmul(&adjoint(matrix), matrix)?;
    let mut power = gram.clone();
    let mut per_n = Vec::with_capacity(max_power);
    for p in 1..=max_power {
        let Some(t) = power.trusted_radius() else {
            return Err(Error::TrustedRegionEmpty(format!(
                "power {p} of M*M with band {} on window {}",
                matrix.band(),
                matrix.n()
            )));
        };
        let t = t as i64;
        let sup = (-t..=t).map(|k| power.get(k, k).norm()).fold(0.0f64, f64::max);
        per_n.push((p, sup.powf(1.0 / p as f64)));
        if p < max_power {
            power = matmul(&power, &gram)?;
        }
    }
    let lower = per_n.iter().map(|v| v.1).fold(0.0, f64::max);
    let schur = schur_bound(matrix);
    Ok(NormEstimate {
        lower,
        upper: Some(schur * schur),
        estimate: lower,
        converged: converged(&per_n),
        per_n,
        method: NormMethod::CroneDiagonal,
    })
}

const HERMITIAN_TOL: f64 = 1e-10;

/// `per_n = ‖P_n M* M P_n‖` from Gram blocks of increasing size.
pub fn crone_norm_truncation(blocks: &[(usize, CMatrix)]) -> Result<NormEstimate> {
    if blocks.is_empty() {
        return Err(Error::InvalidArgument("no Gram blocks given".into()));
    }
    let mut per_n = Vec::with_capacity(blocks.len());
    for (n, block) in blocks {
        let scale = block.as_slice().iter().fold(1.0f64, |m, v| m.max(v.norm()));
        let deviation = block.hermitian_deviation();
        if deviation > HERMITIAN_TOL * scale {
            return Err(Error::NonHermitianBlock { deviation });
        }
        let eig = hermitian_eigenvalues(block)?;
        per_n.push((*n, eig.last().copied().unwrap_or(0.0).max(0.0)));
    }
    let lower = per_n.iter().map(|v| v.1).fold(0.0, f64::max);
    Ok(NormEstimate {
        lower,
        upper: None,
        estimate: per_n.last().map(|v| v.1).unwrap_or(0.0),
        converged: converged(&per_n),
        per_n,
        method: NormMethod::CroneTruncation,
    })
}

/// `√(max row sum · max column sum)` of `|M_{jk}|` over the trusted rows and columns.
pub fn schur_bound(matrix: &AssocMatrix) -> f64 {
    let t = matrix.trusted_radius().unwrap_or(matrix.n()) as i64;
    let mut row = 0.0f64;
    let mut col = 0.0f64;
    for a in -t..=t {
        row = row.max(matrix.indices().map(|k| matrix.get(a, k).norm()).sum());
        col = col.max(matrix.indices().map(|j| matrix.get(j, a).norm()).sum());
    }
    (row * col).sqrt()
}

/// All eigenvalues of the truncation, ordered by `(re, im)`.
pub fn eigensolve_truncated(matrix: &AssocMatrix) -> Result<Vec<Complex64>> {
    let size = 2 * matrix.n() + 1;
    if size > DENSE_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "truncation of size {size} exceeds the dense limit {DENSE_LIMIT}"
        )));
    }
    eigenvalues(matrix.entries())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumStatus {
    ExactSampled,
    ClosureEstimated,
}

impl SpectrumStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectrumStatus::ExactSampled => "EXACT_SAMPLED",
            SpectrumStatus::ClosureEstimated => "CLOSURE_ESTIMATED",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierSpectrum {
    /// `{σ(k) : |k| ≤ K}`, ordered by `(re, im)` without duplicates.
    pub sampled: Vec<Complex64>,
    /// Extrapolated limits of `σ(k)` as `k → ±∞` not already in `sampled`.
    pub accumulation_points: Vec<Complex64>,
    pub status: SpectrumStatus,
    pub mikhlin: MikhlinResult,
    pub notes: Vec<String>,
}

/// Spectrum of a Fourier multiplier: the closure of its range.
pub fn multiplier_spectrum(sym: &Symbol, k_window: usize) -> Result<MultiplierSpectrum> {
    if k_window < 4 {
        return Err(Error::WindowTooSmall(format!("spectrum needs K >= 4, got {k_window}")));
    }
    let mikhlin = mikhlin_check(sym, k_window)?;
    if !mikhlin.passed {
        return Err(Error::MikhlinFailed {
            c_estimate: mikhlin.c_estimate,
            c_doubled: mikhlin.c_doubled,
        });
    }
    let kw = k_window as i64;
    let mut sampled: Vec<Complex64> = (-kw..=kw).map(|k| sym.eval(0.0, k)).collect::<Result<_>>()?;
    sort_lexicographic(&mut sampled);
    sampled.dedup();
    let scale = sampled.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let close = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE);

    let mut accumulation_points: Vec<Complex64> = Vec::new();
    let mut notes = Vec::new();
    for sign in [1i64, -1] {
        let z = [
            sym.eval(0.0, sign * kw / 4)?,
            sym.eval(0.0, sign * kw / 2)?,
            sym.eval(0.0, sign * kw)?,
        ];
        match aitken_complex(z) {
            Some(l) => {
                let known = sampled.iter().chain(&accumulation_points).any(|s| close(*s, l))
                    || accumulation_points.iter().any(|s| (s - l).norm() <= 1e-9 * scale);
                if !known {
                    accumulation_points.push(l);
                }
            }
            None => notes.push(format!(
                "no limit estimate as k -> {}infinity",
                if sign > 0 { "+" } else { "-" }
            )),
        }
    }
    sort_lexicographic(&mut accumulation_points);
    let status = if accumulation_points.is_empty() && notes.is_empty() {
        SpectrumStatus::ExactSampled
    } else {
        SpectrumStatus::ClosureEstimated
    };
    Ok(MultiplierSpectrum { sampled, accumulation_points, status, mikhlin, notes })
}

/// Aggregated spectral analysis of one truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub n: usize,
    pub discs: Vec<GershgorinDisc>,
    pub eigenvalues: Vec<Complex64>,
    pub containment: DiscUnionReport,
    /// `None` when no power of `M*M` keeps a trusted region.
    pub norm_diagonal: Option<NormEstimate>,
    pub norm_truncation: NormEstimate,
    pub schur: f64,
    pub invertibility: InvertibilityReport,
    pub resolvent_tests: Vec<ResolventReport>,
}

/// Relative slack of the norm sandwich.
pub const SANDWICH_RTOL: f64 = 1e-8;

impl SpectralReport {
    /// Failed cross-checks, empty when the report is consistent.
    pub fn cross_validate(&self) -> Vec<String> {
        let mut failures = Vec::new();
        for lambda in &self.containment.uncontained {
            failures.push(format!("eigenvalue {lambda} lies outside every row disc"));
        }
        for c in &self.containment.components {
            if c.multiplicity_ok == Some(false) {
                failures.push(format!(
                    "component of {} discs holds {} eigenvalues",
                    c.ks.len(),
                    c.eigenvalue_count
                ));
            }
        }
        let mid = self.norm_truncation.estimate;
        let upper = self.schur * self.schur;
        if let Some(lower) = self.norm_diagonal.as_ref().map(|d| d.lower) {
            if lower > mid * (1.0 + SANDWICH_RTOL) + f64::MIN_POSITIVE {
                failures.push(format!("diagonal estimate {lower} exceeds truncation estimate {mid}"));
            }
        }
        if mid > upper * (1.0 + SANDWICH_RTOL) + f64::MIN_POSITIVE {
            failures.push(format!("truncation estimate {mid} exceeds Schur bound {upper}"));
        }
        if !self
            .norm_truncation
            .per_n
            .windows(2)
            .all(|w| w[1].1 >= w[0].1 - 1e-12 * w[0].1.abs().max(1.0))
        {
            failures.push(String::from("truncation norms are not monotone in n"));
        }
        failures
    }
}
