//! Symbol decay indicators, the Mikhlin multiplier check and the
//! compact / Riesz classification.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::symbol::{japanese_bracket, sup_abs_per_k, Symbol, ToroidalGrid};
use crate::tail::aitken;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Decreasing,
    Flat,
    Increasing,
    Oscillating,
}

impl Trend {
    pub fn as_str(self) -> &'static str {
        match self {
            Trend::Decreasing => "DECREASING",
            Trend::Flat => "FLAT",
            Trend::Increasing => "INCREASING",
            Trend::Oscillating => "OSCILLATING",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Undecided,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
            Verdict::Undecided => "UNDECIDED",
        }
    }
}

/// `sup_x |σ(x, k)|` over a symmetric window with its tail summary.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayProfile {
    /// Ordered `k = -K ..= K`.
    pub per_k: Vec<f64>,
    pub k_window: usize,
    /// Max of `per_k` over `K - W ≤ |k| ≤ K`.
    pub tail_estimate: f64,
    pub tail_band: usize,
    pub trend: Trend,
}

const TREND_RTOL: f64 = 1e-9;

fn direction(from: f64, to: f64) -> Trend {
    let scale = from.abs().max(to.abs());
    if (to - from).abs() <= TREND_RTOL * scale {
        Trend::Flat
    } else if to < from {
        Trend::Decreasing
    } else {
        Trend::Increasing
    }
}

impl DecayProfile {
    /// Profile from `per_k` values ordered `k = -K ..= K`.
    pub fn from_per_k(per_k: Vec<f64>, tail_band: usize) -> Result<Self> {
        if per_k.len() % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "profile needs 2K+1 values, got {}",
                per_k.len()
            )));
        }
        let k_window = per_k.len() / 2;
        if tail_band >= k_window {
            return Err(Error::WindowTooSmall(format!(
                "tail band W={tail_band} must be below K={k_window}"
            )));
        }
        if k_window < 4 {
            return Err(Error::WindowTooSmall(format!("trend needs K >= 4, got {k_window}")));
        }
        let at = |k: i64| per_k[(k + k_window as i64) as usize];
        let band_max = |lo: usize, hi: usize| {
            (lo..=hi)
                .flat_map(|a| [at(a as i64), at(-(a as i64))])
                .fold(0.0f64, f64::max)
        };
        let tail_estimate = band_max(k_window - tail_band, k_window);
        let (q1, q2, q3) = (k_window / 4, k_window / 2, 3 * k_window / 4);
        let b1 = band_max(q1, q2 - 1);
        let b2 = band_max(q2, q3 - 1);
        let b3 = band_max(q3, k_window);
        let late = direction(b2, b3);
        let early = direction(b1, b2);
        let trend = match (early, late) {
            (Trend::Decreasing, Trend::Increasing) | (Trend::Increasing, Trend::Decreasing) => {
                Trend::Oscillating
            }
            _ => late,
        };
        Ok(Self { per_k, k_window, tail_estimate, tail_band, trend })
    }

    pub fn get(&self, k: i64) -> f64 {
        self.per_k[(k + self.k_window as i64) as usize]
    }

    pub fn max(&self) -> f64 {
        self.per_k.iter().copied().fold(0.0, f64::max)
    }

    /// The same profile on the smaller window `|k| ≤ k_window`.
    pub fn restrict(&self, k_window: usize) -> Result<Self> {
        if k_window > self.k_window {
            return Err(Error::WindowTooSmall(format!(
                "cannot restrict K={} to {k_window}",
                self.k_window
            )));
        }
        let off = self.k_window - k_window;
        Self::from_per_k(
            self.per_k[off..off + 2 * k_window + 1].to_vec(),
            self.tail_band.min(k_window.saturating_sub(1)),
        )
    }
}

pub fn decay_profile(grid: &ToroidalGrid, tail_band: usize) -> Result<DecayProfile> {
    if tail_band >= grid.k_window() {
        return Err(Error::WindowTooSmall(format!(
            "tail band W={tail_band} must be below K={}",
            grid.k_window()
        )));
    }
    DecayProfile::from_per_k(sup_abs_per_k(grid), tail_band)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MikhlinResult {
    pub passed: bool,
    /// `max_{t ∈ {0,1}, |k| ≤ K-1} |Δ^t σ(k)| ⟨k⟩^t` on the requested window.
    pub c_estimate: f64,
    /// The same constant on the doubled window.
    pub c_doubled: f64,
}

fn mikhlin_constant(sym: &Symbol, k_window: usize) -> Result<f64> {
    let kw = k_window as i64;
    let values: Vec<Complex64> =
        (-kw..=kw).map(|k| sym.eval(0.0, k)).collect::<Result<_>>()?;
    let mut c = 0.0f64;
    for k in -(kw - 1)..=(kw - 1) {
        let i = (k + kw) as usize;
        c = c.max(values[i].norm());
        let d = values[i + 1] - values[i];
        c = c.max(d.norm() * japanese_bracket(k as f64));
    }
    if !c.is_finite() {
        return Err(Error::NonFiniteSample { q: 0, k: kw });
    }
    Ok(c)
}

/// Mikhlin-type bound `|Δ^t σ(k)| ≤ C ⟨k⟩^{-t}`, `t ∈ {0, 1}`, accepted when
/// the fitted constant grows by less than 5% from `K` to `2K`.
pub fn mikhlin_check(sym: &Symbol, k_window: usize) -> Result<MikhlinResult> {
    if !sym.is_multiplier() {
        return Err(Error::InvalidArgument("Mikhlin check needs a Fourier multiplier".into()));
    }
    if k_window < 1 {
        return Err(Error::WindowTooSmall("Mikhlin check needs K >= 1".into()));
    }
    let c_estimate = mikhlin_constant(sym, k_window)?;
    let c_doubled = mikhlin_constant(sym, 2 * k_window)?;
    Ok(MikhlinResult { passed: c_doubled <= 1.05 * c_estimate, c_estimate, c_doubled })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyParams {
    /// Relative decay tolerance: tails below `tol_decay · max_k sup_x|σ|` count as zero.
    pub tol_decay: f64,
    pub tail_band: usize,
    /// `p` of the target `L^p` space.
    pub lp_exponent: f64,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        Self { tol_decay: 1e-3, tail_band: 0, lp_exponent: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub compact_l2: Verdict,
    pub riesz_lp: Verdict,
    pub bounded_multiplier: Verdict,
    /// Lower bound on the distance from `T_σ` to the compact operators.
    pub gohberg_bound: f64,
    /// Extrapolated `lim sup_x |σ(x,k)|`, clamped at zero, when the tails allow it.
    pub limit_estimate: Option<f64>,
    /// Tail estimates on the windows `K/4`, `K/2`, `K`.
    pub tails: [f64; 3],
    pub trend_half: Trend,
    pub profile: DecayProfile,
    pub mikhlin: Option<MikhlinResult>,
    pub notes: Vec<String>,
}

/// Classification from a precomputed profile on the full window.
pub fn classify_profile(
    profile: &DecayProfile,
    params: &ClassifyParams,
    mikhlin: Option<MikhlinResult>,
) -> Result<Classification> {
    let kw = profile.k_window;
    if kw < 16 {
        return Err(Error::WindowTooSmall(format!(
            "classification needs K >= 16 for two window doublings, got {kw}"
        )));
    }
    let quarter = profile.restrict(kw / 4)?;
    let half = profile.restrict(kw / 2)?;
    let tails = [quarter.tail_estimate, half.tail_estimate, profile.tail_estimate];
    let scale = profile.max();
    let threshold = params.tol_decay * scale;
    let limit = aitken(tails).map(|l| l.max(0.0));
    let mut notes = Vec::new();

    let decreasing = profile.trend == Trend::Decreasing && half.trend == Trend::Decreasing;
    let verdict = if scale == 0.0 {
        Verdict::Yes
    } else if decreasing && (tails[2] < threshold || limit.is_some_and(|l| l < threshold)) {
        Verdict::Yes
    } else if profile.trend == Trend::Flat && tails[2] >= threshold {
        Verdict::No
    } else if profile.trend == Trend::Increasing {
        Verdict::No
    } else if decreasing && limit.is_some_and(|l| l >= threshold) {
        Verdict::No
    } else {
        Verdict::Undecided
    };
    if verdict != Verdict::Undecided && scale != 0.0 && tails[2] >= threshold {
        notes.push(String::from(
            "limit of sup_x|sigma(x,k)| extrapolated from the windows K/4, K/2, K",
        ));
    }

    let riesz_lp = verdict;
    let compact_l2 = if params.lp_exponent == 2.0 {
        verdict
    } else {
        notes.push(format!(
            "p = {}: only the Riesz criterion carries over; compactness on L^p is not decided",
            params.lp_exponent
        ));
        Verdict::Undecided
    };
    let bounded_multiplier = match mikhlin {
        Some(m) if m.passed => Verdict::Yes,
        _ => Verdict::Undecided,
    };
    Ok(Classification {
        compact_l2,
        riesz_lp,
        bounded_multiplier,
        gohberg_bound: profile.tail_estimate,
        limit_estimate: limit,
        tails,
        trend_half: half.trend,
        profile: profile.clone(),
        mikhlin,
        notes,
    })
}

/// Sample `sym` on its own window and classify it.
pub fn classify(sym: &Symbol, params: &ClassifyParams) -> Result<Classification> {
    let grid = sym.sample()?;
    let profile = decay_profile(&grid, params.tail_band)?;
    let mikhlin = if sym.is_multiplier() {
        Some(mikhlin_check(sym, sym.k_window())?)
    } else {
        None
    };
    classify_profile(&profile, params, mikhlin)
}

/// The strictly singular, non-compact Riesz example on `L^p`, `1 < p < 2`:
///
/// `σ_A(x, k) = e^{-ixk} Σ_{n=1}^{N} c_n(k) r_n(x)` with Rademacher functions
/// `r_n(x) = sign sin(2^{n-1} x)` and
/// `c_n(k) = 2^{(n+2)(p-1)/2} ∫_{E_n} e^{-ixk} dx`, `E_n = (2π/2^{n+2}, 2π/2^{n+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrictlySingularExample {
    pub p: f64,
    pub terms: usize,
}

impl StrictlySingularExample {
    pub fn new(p: f64, terms: usize) -> Result<Self> {
        if !(p > 1.0 && p < 2.0) {
            return Err(Error::InvalidArgument(format!("p must lie in (1, 2), got {p}")));
        }
        if terms == 0 || terms > 64 {
            return Err(Error::InvalidArgument(format!("terms must lie in 1..=64, got {terms}")));
        }
        Ok(Self { p, terms })
    }

    /// `c_n(k)` with the normalized measure.
    pub fn coefficient(&self, n: usize, k: i64) -> Complex64 {
        let weight = 2f64.powf((n as f64 + 2.0) * (self.p - 1.0) / 2.0);
        let a = 2.0 * PI / 2f64.powi(n as i32 + 2);
        let b = 2.0 * a;
        if k == 0 {
            return Complex64::new(weight * (b - a) / (2.0 * PI), 0.0);
        }
        let kf = k as f64;
        let num = Complex64::from_polar(1.0, -kf * b) - Complex64::from_polar(1.0, -kf * a);
        num / Complex64::new(0.0, -2.0 * PI * kf) * weight
    }

    /// `r_n(2πt)` evaluated exactly on dyadic arithmetic of `t = x/2π`.
    fn rademacher(n: usize, x: f64) -> f64 {
        let t = (x / (2.0 * PI)).rem_euclid(1.0);
        let s = (t * 2f64.powi(n as i32 - 1)).rem_euclid(1.0);
        if s == 0.0 || s == 0.5 {
            0.0
        } else if s < 0.5 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn eval(&self, x: f64, k: i64) -> Complex64 {
        let sum = (1..=self.terms).fold(Complex64::new(0.0, 0.0), |acc, n| {
            acc + self.coefficient(n, k) * Self::rademacher(n, x)
        });
        Complex64::from_polar(1.0, -x * k as f64) * sum
    }

    /// Closed-form symbol on the given window.
    pub fn symbol(&self, k_window: usize, x_resolution: usize) -> Result<Symbol> {
        let ex = self.clone();
        Symbol::closed_form(move |x, k| ex.eval(x, k), k_window, x_resolution)
    }

    /// `sup_x |σ_A(x, k)|`.
    ///
    /// Every sign pattern of `(r_1, …, r_N)` is attained on a set of positive
    /// measure, so the supremum is `max_ε |Σ ε_n c_n(k)|`, found by sweeping
    /// the direction `θ` across the breakpoints `arg c_n ± π/2`.
    pub fn sup_abs(&self, k: i64) -> f64 {
        let coeffs: Vec<Complex64> = (1..=self.terms).map(|n| self.coefficient(n, k)).collect();
        let mut breaks: Vec<f64> = coeffs
            .iter()
            .filter(|c| c.norm() > 0.0)
            .map(|c| (c.arg() + PI / 2.0).rem_euclid(PI))
            .collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        if breaks.is_empty() {
            return 0.0;
        }
        let mut best = 0.0f64;
        for (i, lo) in breaks.iter().enumerate() {
            let hi = if i + 1 < breaks.len() { breaks[i + 1] } else { breaks[0] + PI };
            let mid = 0.5 * (lo + hi);
            let dir = Complex64::from_polar(1.0, -mid);
            let s = coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, c| {
                if (dir * c).re >= 0.0 {
                    acc + c
                } else {
                    acc - c
                }
            });
            best = best.max(s.norm());
        }
        best
    }

    pub fn profile(&self, k_window: usize, tail_band: usize) -> Result<DecayProfile> {
        let kw = k_window as i64;
        DecayProfile::from_per_k((-kw..=kw).map(|k| self.sup_abs(k)).collect(), tail_band)
    }
}
