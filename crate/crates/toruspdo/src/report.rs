//! Serializable views of analysis results.

use num_complex::Complex64;
use serde::Serialize;
use toruspdo_core::riesz::{Classification, MikhlinResult};
use toruspdo_core::spectral::{
    DiscUnionReport, GershgorinDisc, InvertibilityReport, MultiplierSpectrum, NormEstimate,
};

pub type Pair = [f64; 2];

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscRecord {
    pub k: i64,
    pub center: Pair,
    pub r_row: f64,
    pub r_col: f64,
    pub r_full: f64,
}

impl From<&GershgorinDisc> for DiscRecord {
    fn from(d: &GershgorinDisc) -> Self {
        Self { k: d.k, center: pair(d.center), r_row: d.radius_row, r_col: d.radius_col, r_full: d.radius_full }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentRecord {
    pub ks: Vec<i64>,
    pub eigenvalue_count: usize,
    pub multiplicity_ok: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainmentRecord {
    pub components: Vec<ComponentRecord>,
    pub uncontained: Vec<Pair>,
    pub max_excess: f64,
}

impl From<&DiscUnionReport> for ContainmentRecord {
    fn from(r: &DiscUnionReport) -> Self {
        Self {
            components: r
                .components
                .iter()
                .map(|c| ComponentRecord {
                    ks: c.ks.clone(),
                    eigenvalue_count: c.eigenvalue_count,
                    multiplicity_ok: c.multiplicity_ok,
                })
                .collect(),
            uncontained: r.uncontained.iter().copied().map(pair).collect(),
            max_excess: r.max_excess,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NormRecord {
    pub method: &'static str,
    pub estimate: f64,
    pub lower: f64,
    pub upper: Option<f64>,
    pub converged: bool,
    /// `[n or p, value]`.
    pub per_n: Vec<(usize, f64)>,
}

impl From<&NormEstimate> for NormRecord {
    fn from(e: &NormEstimate) -> Self {
        Self {
            method: e.method.as_str(),
            estimate: e.estimate,
            lower: e.lower,
            upper: e.upper,
            converged: e.converged,
            per_n: e.per_n.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NormSummary {
    pub crone_diagonal: Option<NormRecord>,
    pub crone_truncation: NormRecord,
    pub schur: f64,
    pub schur_squared: f64,
    /// `‖T_σ‖` read from the truncation estimate.
    pub operator_norm: f64,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MikhlinRecord {
    pub passed: bool,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "C_doubled")]
    pub c_doubled: f64,
}

impl From<&MikhlinResult> for MikhlinRecord {
    fn from(m: &MikhlinResult) -> Self {
        Self { passed: m.passed, c: m.c_estimate, c_doubled: m.c_doubled }
    }
}

#[derive(Debug, Clone, Serialize)]
#[allow(non_snake_case)]
pub struct ClassificationRecord {
    pub d_sigma_tail: f64,
    pub d_sigma_limit: Option<f64>,
    pub tails: [f64; 3],
    pub trend: &'static str,
    pub compact_L2: &'static str,
    pub riesz_Lp: &'static str,
    pub bounded_multiplier: &'static str,
    pub gohberg_lower_bound: f64,
    pub mikhlin: Option<MikhlinRecord>,
    pub notes: Vec<String>,
}

impl From<&Classification> for ClassificationRecord {
    fn from(c: &Classification) -> Self {
        Self {
            d_sigma_tail: c.profile.tail_estimate,
            d_sigma_limit: c.limit_estimate,
            tails: c.tails,
            trend: c.profile.trend.as_str(),
            compact_L2: c.compact_l2.as_str(),
            riesz_Lp: c.riesz_lp.as_str(),
            bounded_multiplier: c.bounded_multiplier.as_str(),
            gohberg_lower_bound: c.gohberg_bound,
            mikhlin: c.mikhlin.as_ref().map(MikhlinRecord::from),
            notes: c.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvertibilityRecord {
    pub verdict: &'static str,
    pub conditions: [bool; 3],
    pub primed: [bool; 3],
    pub primed_disagree: bool,
    pub inf_center: f64,
    pub sup_ratio_col: Option<f64>,
    pub sup_ratio_row: Option<f64>,
    pub compact_inverse: bool,
    pub trusted_radius: usize,
    pub notes: Vec<String>,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl From<&InvertibilityReport> for InvertibilityRecord {
    fn from(r: &InvertibilityReport) -> Self {
        Self {
            verdict: r.verdict.as_str(),
            conditions: r.conditions,
            primed: r.primed,
            primed_disagree: r.primed_disagree,
            inf_center: r.inf_center,
            sup_ratio_col: finite(r.sup_ratio_col),
            sup_ratio_row: finite(r.sup_ratio_row),
            compact_inverse: r.compact_inverse,
            trusted_radius: r.trusted_radius,
            notes: r.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRecord {
    pub status: &'static str,
    pub sampled: Vec<Pair>,
    pub accumulation_points: Vec<Pair>,
    pub notes: Vec<String>,
}

impl From<&MultiplierSpectrum> for SpectrumRecord {
    fn from(s: &MultiplierSpectrum) -> Self {
        Self {
            status: s.status.as_str(),
            sampled: s.sampled.iter().copied().map(pair).collect(),
            accumulation_points: s.accumulation_points.iter().copied().map(pair).collect(),
            notes: s.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowRecord {
    pub n: usize,
    #[serde(rename = "K")]
    pub k_window: usize,
    #[serde(rename = "Q")]
    pub resolution: usize,
    /// Requested Fourier window in `x`.
    #[serde(rename = "M")]
    pub m_window: usize,
    /// Band after dropping modes that are zero to rounding.
    pub band: usize,
    pub trusted_radius: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdicts {
    pub invertibility: InvertibilityRecord,
    pub classification: ClassificationRecord,
    pub spectrum: Option<SpectrumRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossChecks {
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReportRecord {
    pub window: WindowRecord,
    pub discs: Vec<DiscRecord>,
    pub eigenvalues: Vec<Pair>,
    pub containment: ContainmentRecord,
    pub norm: NormSummary,
    pub verdicts: Verdicts,
    pub cross_checks: CrossChecks,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpansionRecord {
    #[serde(rename = "order_N")]
    pub order_n: usize,
    pub remainder_proxy: f64,
    pub term_sups: Vec<f64>,
    pub warnings: Vec<String>,
    #[serde(rename = "K")]
    pub k_window: usize,
    #[serde(rename = "Q")]
    pub resolution: usize,
    /// Column-major `[re, im]`, `index = (k + K) Q + q`.
    pub samples: Vec<Pair>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TruncationRecord {
    pub n: usize,
    pub dropped_l2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApplyRecord {
    #[serde(rename = "Q")]
    pub resolution: usize,
    pub n: usize,
    pub samples: Vec<Pair>,
    pub truncation: Option<TruncationRecord>,
    pub matrix_consistency_residual: f64,
}
