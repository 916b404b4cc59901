//! Toroidal symbols `σ(x, k)` on `T × Z`, their samples, partial Fourier
//! coefficients, discrete calculus operators and Hörmander seminorm estimates.
//!
//! Samples live on the equispaced grid `x_q = 2πq/Q`, `0 ≤ q < Q`, for a
//! symmetric frequency window `|k| ≤ K`. `Q` is always a power of two.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fft::{mode_index, signed_mode, Radix2};

/// `⟨k⟩ = (1 + k²)^{1/2}`.
pub fn japanese_bracket(k: f64) -> f64 {
    (1.0 + k * k).sqrt()
}

/// Grid point `x_q = 2πq/Q`.
pub fn grid_point(q: usize, resolution: usize) -> f64 {
    2.0 * PI * q as f64 / resolution as f64
}

pub type PointEvaluator = Arc<dyn Fn(f64, i64) -> Complex64 + Send + Sync>;
pub type MultiplierEvaluator = Arc<dyn Fn(i64) -> Complex64 + Send + Sync>;

/// Samples of a symbol on a `Q × (2K+1)` grid.
///
/// Storage is column-major in `k`: the `Q` samples of one frequency are
/// contiguous.
#[derive(Clone, PartialEq)]
pub struct ToroidalGrid {
    resolution: usize,
    k_window: usize,
    values: Vec<Complex64>,
    x_independent: bool,
}

impl fmt::Debug for ToroidalGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ToroidalGrid")
            .field("resolution", &self.resolution)
            .field("k_window", &self.k_window)
            .field("x_independent", &self.x_independent)
            .finish_non_exhaustive()
    }
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < 2 || !resolution.is_power_of_two() {
        return Err(Error::InvalidGrid(format!(
            "x resolution must be a power of two >= 2, got {resolution}"
        )));
    }
    Ok(())
}

impl ToroidalGrid {
    /// Build from column-major values (`values[(k + K) * Q + q]`).
    pub fn new(resolution: usize, k_window: usize, values: Vec<Complex64>) -> Result<Self> {
        check_resolution(resolution)?;
        if values.len() != resolution * (2 * k_window + 1) {
            return Err(Error::InvalidGrid(format!(
                "expected {} values for Q={resolution}, K={k_window}, got {}",
                resolution * (2 * k_window + 1),
                values.len()
            )));
        }
        let grid = Self { resolution, k_window, values, x_independent: false };
        grid.check_finite()?;
        Ok(grid)
    }

    /// Evaluate `f(q, k)` at every grid node.
    pub fn from_fn(
        resolution: usize,
        k_window: usize,
        mut f: impl FnMut(usize, i64) -> Complex64,
    ) -> Result<Self> {
        check_resolution(resolution)?;
        let kw = k_window as i64;
        let mut values = Vec::with_capacity(resolution * (2 * k_window + 1));
        for k in -kw..=kw {
            for q in 0..resolution {
                values.push(f(q, k));
            }
        }
        let grid = Self { resolution, k_window, values, x_independent: false };
        grid.check_finite()?;
        Ok(grid)
    }

    fn check_finite(&self) -> Result<()> {
        for (i, v) in self.values.iter().enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                let q = i % self.resolution;
                let k = (i / self.resolution) as i64 - self.k_window as i64;
                return Err(Error::NonFiniteSample { q, k });
            }
        }
        Ok(())
    }

    pub(crate) fn mark_x_independent(mut self) -> Self {
        self.x_independent = true;
        self
    }

    /// `Q`.
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// `K`.
    pub fn k_window(&self) -> usize {
        self.k_window
    }

    /// True when the grid was sampled from a Fourier multiplier.
    pub fn is_x_independent(&self) -> bool {
        self.x_independent
    }

    pub fn ks(&self) -> core::ops::RangeInclusive<i64> {
        -(self.k_window as i64)..=self.k_window as i64
    }

    pub fn contains_k(&self, k: i64) -> bool {
        k.unsigned_abs() as usize <= self.k_window
    }

    fn col_offset(&self, k: i64) -> usize {
        assert!(self.contains_k(k), "k={k} outside window {}", self.k_window);
        (k + self.k_window as i64) as usize * self.resolution
    }

    pub fn get(&self, q: usize, k: i64) -> Complex64 {
        self.values[self.col_offset(k) + q]
    }

    pub fn column(&self, k: i64) -> &[Complex64] {
        let o = self.col_offset(k);
        &self.values[o..o + self.resolution]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Same samples restricted to `|k| ≤ k_window`.
    pub fn restrict(&self, k_window: usize) -> Result<Self> {
        if k_window > self.k_window {
            return Err(Error::WindowTooSmall(format!(
                "cannot restrict K={} to larger K={k_window}",
                self.k_window
            )));
        }
        let lo = self.col_offset(-(k_window as i64));
        let hi = self.col_offset(k_window as i64) + self.resolution;
        Ok(Self {
            resolution: self.resolution,
            k_window,
            values: self.values[lo..hi].to_vec(),
            x_independent: self.x_independent,
        })
    }

    /// Pointwise map preserving the layout.
    pub fn map(&self, mut f: impl FnMut(usize, i64, Complex64) -> Complex64) -> Result<Self> {
        let mut out = self.clone();
        for k in self.ks() {
            let o = self.col_offset(k);
            for q in 0..self.resolution {
                out.values[o + q] = f(q, k, self.values[o + q]);
            }
        }
        out.check_finite()?;
        Ok(out)
    }

    /// Pointwise combination of two grids with identical shape.
    pub fn zip_with(
        &self,
        other: &Self,
        mut f: impl FnMut(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.resolution != other.resolution || self.k_window != other.k_window {
            return Err(Error::WindowMismatch {
                left: self.k_window,
                right: other.k_window,
            });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        let out = Self {
            resolution: self.resolution,
            k_window: self.k_window,
            values,
            x_independent: self.x_independent && other.x_independent,
        };
        out.check_finite()?;
        Ok(out)
    }

    /// Largest modulus over the whole grid.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }
}

#[derive(Clone)]
pub enum SymbolKind {
    ClosedForm(PointEvaluator),
    Sampled(ToroidalGrid),
    Multiplier(MultiplierEvaluator),
}

/// A toroidal symbol together with the window it is analysed on.
#[derive(Clone)]
pub struct Symbol {
    kind: SymbolKind,
    k_window: usize,
    x_resolution: usize,
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            SymbolKind::ClosedForm(_) => "closed_form",
            SymbolKind::Sampled(_) => "sampled",
            SymbolKind::Multiplier(_) => "multiplier",
        };
        f.debug_struct("Symbol")
            .field("kind", &kind)
            .field("k_window", &self.k_window)
            .field("x_resolution", &self.x_resolution)
            .finish()
    }
}

impl Symbol {
    fn checked(kind: SymbolKind, k_window: usize, x_resolution: usize) -> Result<Self> {
        check_resolution(x_resolution)?;
        if k_window < 1 {
            return Err(Error::InvalidGrid(format!("K must be >= 1, got {k_window}")));
        }
        Ok(Self { kind, k_window, x_resolution })
    }

    pub fn closed_form(
        f: impl Fn(f64, i64) -> Complex64 + Send + Sync + 'static,
        k_window: usize,
        x_resolution: usize,
    ) -> Result<Self> {
        Self::checked(SymbolKind::ClosedForm(Arc::new(f)), k_window, x_resolution)
    }

    pub fn multiplier(
        f: impl Fn(i64) -> Complex64 + Send + Sync + 'static,
        k_window: usize,
        x_resolution: usize,
    ) -> Result<Self> {
        Self::checked(SymbolKind::Multiplier(Arc::new(f)), k_window, x_resolution)
    }

    /// A symbol known only through its samples; window and resolution are the grid's.
    pub fn sampled(grid: ToroidalGrid) -> Result<Self> {
        let (k, q) = (grid.k_window, grid.resolution);
        Self::checked(SymbolKind::Sampled(grid), k.max(1), q)
    }

    /// Parse an expression; `multiplier` requires the expression to be x-free.
    pub fn from_expr(expr: Expr, multiplier: bool, k_window: usize, x_resolution: usize) -> Result<Self> {
        if multiplier {
            if expr.depends_on_x() {
                return Err(Error::Parse {
                    position: 0,
                    message: "multiplier expression must not depend on x".into(),
                });
            }
            Self::multiplier(move |k| expr.eval(0.0, k), k_window, x_resolution)
        } else {
            Self::closed_form(move |x, k| expr.eval(x, k), k_window, x_resolution)
        }
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    pub fn is_multiplier(&self) -> bool {
        matches!(self.kind, SymbolKind::Multiplier(_))
            || matches!(&self.kind, SymbolKind::Sampled(g) if g.is_x_independent())
    }

    pub fn k_window(&self) -> usize {
        self.k_window
    }

    pub fn x_resolution(&self) -> usize {
        self.x_resolution
    }

    /// Same symbol analysed on a different window.
    pub fn with_window(&self, k_window: usize, x_resolution: usize) -> Result<Self> {
        Self::checked(self.kind.clone(), k_window, x_resolution)
    }

    /// Value at an arbitrary `(x, k)`; sampled symbols use trigonometric
    /// interpolation in `x` and must contain `k`.
    pub fn eval(&self, x: f64, k: i64) -> Result<Complex64> {
        match &self.kind {
            SymbolKind::ClosedForm(f) => Ok(f(x, k)),
            SymbolKind::Multiplier(f) => Ok(f(k)),
            SymbolKind::Sampled(g) => {
                if !g.contains_k(k) {
                    return Err(Error::WindowTooSmall(format!(
                        "k={k} outside sampled window {}",
                        g.k_window
                    )));
                }
                let coeffs = column_spectrum(g.column(k));
                let n = coeffs.len();
                let mut acc = Complex64::new(0.0, 0.0);
                for (idx, c) in coeffs.iter().enumerate() {
                    let m = signed_mode(idx, n);
                    if n > 1 && idx == n / 2 {
                        // split the Nyquist mode symmetrically
                        let m = m as f64;
                        acc += c * Complex64::new((m * x).cos(), 0.0);
                    } else {
                        acc += c * Complex64::from_polar(1.0, m as f64 * x);
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Samples on the symbol's own window.
    pub fn sample(&self) -> Result<ToroidalGrid> {
        sample_symbol(self, self.x_resolution, self.k_window)
    }
}

fn column_spectrum(col: &[Complex64]) -> Vec<Complex64> {
    let mut buf = col.to_vec();
    Radix2::new(buf.len()).forward(&mut buf);
    buf
}

/// Sample `sym` on `Q × (2K+1)` nodes.
///
/// Sampled symbols are resampled by trigonometric interpolation: exact
/// subsampling when `Q` divides the stored resolution, spectral zero padding
/// (Nyquist mode split evenly) when it is finer.
pub fn sample_symbol(sym: &Symbol, resolution: usize, k_window: usize) -> Result<ToroidalGrid> {
    check_resolution(resolution)?;
    if k_window < 1 {
        return Err(Error::InvalidGrid(format!("K must be >= 1, got {k_window}")));
    }
    match &sym.kind {
        SymbolKind::ClosedForm(f) => {
            let mut g = ToroidalGrid::from_fn(resolution, k_window, |q, k| {
                f(grid_point(q, resolution), k)
            })?;
            g.x_independent = g.ks().all(|k| {
                let col = g.column(k);
                col.iter().all(|v| *v == col[0])
            });
            Ok(g)
        }
        SymbolKind::Multiplier(f) => {
            let kw = k_window as i64;
            let col: Vec<Complex64> = (-kw..=kw).map(|k| f(k)).collect();
            ToroidalGrid::from_fn(resolution, k_window, |_, k| col[(k + kw) as usize])
                .map(ToroidalGrid::mark_x_independent)
        }
        SymbolKind::Sampled(g) => {
            if k_window > g.k_window {
                return Err(Error::WindowTooSmall(format!(
                    "sampled symbol has K={}, requested {k_window}",
                    g.k_window
                )));
            }
            let src_q = g.resolution;
            let mut values = Vec::with_capacity(resolution * (2 * k_window + 1));
            let kw = k_window as i64;
            let plan = Radix2::new(resolution);
            for k in -kw..=kw {
                let col = g.column(k);
                if resolution <= src_q {
                    let step = src_q / resolution;
                    values.extend((0..resolution).map(|q| col[q * step]));
                } else {
                    let spec = column_spectrum(col);
                    let mut buf = vec![Complex64::new(0.0, 0.0); resolution];
                    for (idx, c) in spec.iter().enumerate() {
                        let m = signed_mode(idx, src_q);
                        if src_q > 1 && idx == src_q / 2 {
                            let half = c * 0.5;
                            buf[mode_index(m, resolution)] += half;
                            buf[mode_index(-m, resolution)] += half;
                        } else {
                            buf[mode_index(m, resolution)] += c;
                        }
                    }
                    plan.inverse(&mut buf);
                    values.extend(buf);
                }
            }
            let mut out = ToroidalGrid::new(resolution, k_window, values)?;
            out.x_independent = g.x_independent;
            Ok(out)
        }
    }
}

/// Partial Fourier coefficients `σ̂(m, k)` for `|m| ≤ M`, `|k| ≤ K`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable {
    m_window: usize,
    k_window: usize,
    coeffs: Vec<Complex64>,
    multiplier: bool,
}

impl FourierTable {
    /// Build from a function of `(m, k)`; used for tables known in closed form.
    pub fn from_fn(
        m_window: usize,
        k_window: usize,
        mut f: impl FnMut(i64, i64) -> Complex64,
    ) -> Self {
        let (mw, kw) = (m_window as i64, k_window as i64);
        let mut coeffs = Vec::with_capacity((2 * m_window + 1) * (2 * k_window + 1));
        for k in -kw..=kw {
            for m in -mw..=mw {
                coeffs.push(f(m, k));
            }
        }
        Self { m_window, k_window, coeffs, multiplier: false }
    }

    pub fn m_window(&self) -> usize {
        self.m_window
    }

    pub fn k_window(&self) -> usize {
        self.k_window
    }

    pub fn is_multiplier(&self) -> bool {
        self.multiplier
    }

    /// `σ̂(m, k)`; zero outside `|m| ≤ M`.
    pub fn get(&self, m: i64, k: i64) -> Complex64 {
        assert!(k.unsigned_abs() as usize <= self.k_window, "k={k} outside window");
        if m.unsigned_abs() as usize > self.m_window {
            return Complex64::new(0.0, 0.0);
        }
        let row = 2 * self.m_window + 1;
        self.coeffs[(k + self.k_window as i64) as usize * row + (m + self.m_window as i64) as usize]
    }

    /// `σ̂(0, k) = ∫ σ(x, k) dx`.
    pub fn mean(&self, k: i64) -> Complex64 {
        self.get(0, k)
    }

    /// Table of the shifted symbol `σ(x, k) - λ`.
    pub fn shifted(&self, lambda: Complex64) -> Self {
        let mut out = self.clone();
        let row = 2 * self.m_window + 1;
        for kk in 0..2 * self.k_window + 1 {
            out.coeffs[kk * row + self.m_window] -= lambda;
        }
        out
    }

    /// Same coefficients with the window cut to the smallest `M'` such that
    /// every dropped mode is below `rel_tol · max|σ̂|`.
    pub fn trim_band(&self, rel_tol: f64) -> Self {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let (mw, kw) = (self.m_window as i64, self.k_window as i64);
        let mut band = 0usize;
        for m in -mw..=mw {
            let significant = (-kw..=kw).any(|k| self.get(m, k).norm() > rel_tol * scale);
            if significant {
                band = band.max(m.unsigned_abs() as usize);
            }
        }
        let mut out = Self::from_fn(band, self.k_window, |m, k| self.get(m, k));
        out.multiplier = self.multiplier;
        out
    }
}

/// Discrete normalized Fourier coefficients of each `k`-column.
///
/// Exact for columns that are trigonometric polynomials of degree `≤ Q - M - 1`.
/// Multiplier grids are enforced diagonal: `σ̂(0, k) = σ(k)` and every other
/// mode is exactly zero.
/// Coefficients at or below this multiple of `max_q |σ(x_q, k)|` are FFT
/// rounding and are stored as exact zeros.
pub fn noise_floor(resolution: usize) -> f64 {
    4.0 * f64::EPSILON * (resolution.max(2) as f64).log2()
}

pub fn fourier_table(grid: &ToroidalGrid, m_window: usize) -> Result<FourierTable> {
    let resolution = grid.resolution;
    if 2 * m_window + 1 > resolution {
        return Err(Error::WindowTooLarge(format!(
            "2M+1 = {} exceeds Q = {resolution}",
            2 * m_window + 1
        )));
    }
    if grid.x_independent {
        let mut t = FourierTable::from_fn(m_window, grid.k_window, |m, k| {
            if m == 0 {
                grid.get(0, k)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        t.multiplier = true;
        return Ok(t);
    }
    let plan = Radix2::new(resolution);
    let mw = m_window as i64;
    let mut coeffs = Vec::with_capacity((2 * m_window + 1) * (2 * grid.k_window + 1));
    let mut buf = vec![Complex64::new(0.0, 0.0); resolution];
    for k in grid.ks() {
        buf.copy_from_slice(grid.column(k));
        let peak = buf.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        plan.forward(&mut buf);
        let floor = noise_floor(resolution) * peak;
        coeffs.extend((-mw..=mw).map(|m| {
            let c = buf[mode_index(m, resolution)];
            if c.norm() <= floor {
                Complex64::new(0.0, 0.0)
            } else {
                c
            }
        }));
    }
    Ok(FourierTable { m_window, k_window: grid.k_window, coeffs, multiplier: false })
}

pub(crate) fn binomial(t: usize, h: usize) -> f64 {
    let mut c = 1u128;
    for i in 0..h as u128 {
        c = c * (t as u128 - i) / (i + 1);
    }
    c as f64
}

/// `Δ^t φ(k) = Σ_{h=0}^t (-1)^{t-h} C(t,h) φ(k+h)` over a sequence indexed
/// from `k = start`; the result is `t` entries shorter.
pub fn delta_sequence(values: &[Complex64], t: usize) -> Result<Vec<Complex64>> {
    if t >= values.len() {
        return Err(Error::WindowExhausted(format!(
            "order {t} difference needs more than {} samples",
            values.len()
        )));
    }
    let weights: Vec<f64> = (0..=t)
        .map(|h| {
            let sign = if (t - h) % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(t, h)
        })
        .collect();
    Ok((0..values.len() - t)
        .map(|i| {
            weights
                .iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (h, w)| acc + values[i + h] * *w)
        })
        .collect())
}

/// `Δ_k^t` on every `x`-row; the window shrinks to `K - t` on both sides.
pub fn delta_k(grid: &ToroidalGrid, t: usize) -> Result<ToroidalGrid> {
    if t > grid.k_window {
        return Err(Error::WindowExhausted(format!(
            "Δ_k^{t} needs K >= {t}, window is {}",
            grid.k_window
        )));
    }
    if t == 0 {
        return Ok(grid.clone());
    }
    let new_k = grid.k_window - t;
    let nk = new_k as i64;
    let mut values = vec![Complex64::new(0.0, 0.0); grid.resolution * (2 * new_k + 1)];
    for k in -nk..=nk {
        let out = (k + nk) as usize * grid.resolution;
        for h in 0..=t {
            let sign = if (t - h) % 2 == 0 { 1.0 } else { -1.0 };
            let w = sign * binomial(t, h);
            let col = grid.column(k + h as i64);
            for q in 0..grid.resolution {
                values[out + q] += col[q] * w;
            }
        }
    }
    let mut g = ToroidalGrid::new(grid.resolution, new_k, values)?;
    g.x_independent = grid.x_independent;
    Ok(g)
}

/// `Δ_k^t` applied to Fourier coefficients at fixed `m`.
pub fn delta_k_table(table: &FourierTable, t: usize) -> Result<FourierTable> {
    if t > table.k_window {
        return Err(Error::WindowExhausted(format!(
            "Δ_k^{t} needs K >= {t}, window is {}",
            table.k_window
        )));
    }
    let new_k = table.k_window - t;
    let mut out = FourierTable::from_fn(table.m_window, new_k, |m, k| {
        (0..=t).fold(Complex64::new(0.0, 0.0), |acc, h| {
            let sign = if (t - h) % 2 == 0 { 1.0 } else { -1.0 };
            acc + table.get(m, k + h as i64) * (sign * binomial(t, h))
        })
    });
    out.multiplier = table.multiplier;
    Ok(out)
}

/// Spectral `D_x^r` per column, with `D_x = -i ∂_x` so `D_x e^{ixm} = m e^{ixm}`.
///
/// For odd `r` the Nyquist mode is dropped.
pub fn d_x(grid: &ToroidalGrid, r: u32) -> Result<ToroidalGrid> {
    if r == 0 {
        return Ok(grid.clone());
    }
    if grid.x_independent {
        return grid.map(|_, _, _| Complex64::new(0.0, 0.0));
    }
    let resolution = grid.resolution;
    let plan = Radix2::new(resolution);
    let factors: Vec<f64> = (0..resolution)
        .map(|idx| {
            if idx == resolution / 2 && r % 2 == 1 {
                0.0
            } else {
                (signed_mode(idx, resolution) as f64).powi(r as i32)
            }
        })
        .collect();
    let mut values = Vec::with_capacity(grid.values.len());
    let mut buf = vec![Complex64::new(0.0, 0.0); resolution];
    for k in grid.ks() {
        buf.copy_from_slice(grid.column(k));
        plan.forward(&mut buf);
        for (v, f) in buf.iter_mut().zip(&factors) {
            *v *= *f;
        }
        plan.inverse(&mut buf);
        values.extend_from_slice(&buf);
    }
    let mut g = ToroidalGrid::new(resolution, grid.k_window, values)?;
    g.x_independent = grid.x_independent;
    Ok(g)
}

/// `sup_x |σ(x, k)|` for each `k`, ordered `k = -K ..= K`.
pub fn sup_abs_per_k(grid: &ToroidalGrid) -> Vec<f64> {
    grid.ks()
        .map(|k| grid.column(k).iter().fold(0.0f64, |m, v| m.max(v.norm())))
        .collect()
}

/// One estimated Hörmander constant `C_{t,r}` with its values on the nested
/// windows `K'/4`, `K'/2` and `K'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Seminorm {
    pub value: f64,
    pub quarter_window: f64,
    pub half_window: f64,
    /// Strict growth (> 1%) across both window doublings.
    pub growing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HormanderReport {
    pub order_m: f64,
    pub rho: f64,
    pub delta: f64,
    pub max_t: usize,
    pub max_r: u32,
    /// Effective window `K' = K - max_t` the estimates were taken on.
    pub k_window: usize,
    pub seminorms: BTreeMap<(usize, u32), Seminorm>,
}

impl HormanderReport {
    /// Evidence that `σ ∉ S^m_{ρ,δ}`: some constant keeps growing with the window.
    pub fn non_membership(&self) -> bool {
        self.seminorms.values().any(|s| s.growing)
    }
}

/// Finite-sample estimates of `sup |Δ_k^t D_x^r σ| / ⟨k⟩^{m - ρt + δr}`.
pub fn hormander_estimate(
    sym: &Symbol,
    order_m: f64,
    rho: f64,
    delta: f64,
    max_t: usize,
    max_r: u32,
) -> Result<HormanderReport> {
    if !(0.0..=1.0).contains(&rho) || !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidArgument(format!("rho={rho}, delta={delta} must lie in [0,1]")));
    }
    let grid = sym.sample()?;
    if grid.k_window < max_t + 4 {
        return Err(Error::WindowExhausted(format!(
            "K={} too small for max_t={max_t} and window doubling",
            grid.k_window
        )));
    }
    let kw = grid.k_window - max_t;
    let mut seminorms = BTreeMap::new();
    for r in 0..=max_r {
        let dr = d_x(&grid, r)?;
        for t in 0..=max_t {
            let g = delta_k(&dr, t)?;
            let weight = order_m - rho * t as f64 + delta * r as f64;
            let sup_on = |window: usize| -> f64 {
                let w = window as i64;
                (-w..=w)
                    .map(|k| {
                        let scale = japanese_bracket(k as f64).powf(weight);
                        g.column(k).iter().fold(0.0f64, |m, v| m.max(v.norm() / scale))
                    })
                    .fold(0.0, f64::max)
            };
            let (c4, c2, c1) = (sup_on(kw / 4), sup_on(kw / 2), sup_on(kw));
            let growing = c2 > 1.01 * c4 && c1 > 1.01 * c2;
            seminorms.insert(
                (t, r),
                Seminorm { value: c1, quarter_window: c4, half_window: c2, growing },
            );
        }
    }
    Ok(HormanderReport { order_m, rho, delta, max_t, max_r, k_window: kw, seminorms })
}
