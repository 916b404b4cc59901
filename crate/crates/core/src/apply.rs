//! Applying `T_σ` to sampled periodic functions and checking the result
//! against the associated matrix.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::assoc::{apply, build_assoc_matrix, CoeffVector};
use crate::error::{Error, Result};
use crate::fft::{mode_index, signed_mode, unit_root, Radix2};
use crate::symbol::{fourier_table, grid_point, sample_symbol, Symbol, ToroidalGrid};

/// Modes discarded when a function was cut to `|k| ≤ n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub n: usize,
    /// `(Σ_{|k|>n} |f̂(k)|²)^{1/2}`.
    pub dropped_l2: f64,
}

/// Samples at `x_q = 2πq/Q`, optionally with known coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicFunction {
    samples: Vec<Complex64>,
    coeffs: Option<CoeffVector>,
    truncation: Option<Truncation>,
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < 2 || !resolution.is_power_of_two() {
        return Err(Error::InvalidGrid(format!(
            "x resolution must be a power of two >= 2, got {resolution}"
        )));
    }
    Ok(())
}

impl PeriodicFunction {
    pub fn from_samples(samples: Vec<Complex64>) -> Result<Self> {
        check_resolution(samples.len())?;
        if let Some(q) = samples.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFiniteSample { q, k: 0 });
        }
        Ok(Self { samples, coeffs: None, truncation: None })
    }

    pub fn from_fn(resolution: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_resolution(resolution)?;
        Self::from_samples((0..resolution).map(|q| f(grid_point(q, resolution))).collect())
    }

    /// Trigonometric polynomial `Σ_{|k| ≤ n} c_k e^{ikx}`; the coefficients are kept.
    pub fn from_coeffs(coeffs: CoeffVector, resolution: usize) -> Result<Self> {
        check_resolution(resolution)?;
        let n = coeffs.n();
        if 2 * n + 1 > resolution {
            return Err(Error::WindowTooLarge(format!("2n+1 = {} exceeds Q = {resolution}", 2 * n + 1)));
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); resolution];
        for k in -(n as i64)..=n as i64 {
            buf[mode_index(k, resolution)] = coeffs.get(k);
        }
        Radix2::new(resolution).inverse(&mut buf);
        Ok(Self { samples: buf, coeffs: Some(coeffs), truncation: None })
    }

    pub fn resolution(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn coeffs(&self) -> Option<&CoeffVector> {
        self.coeffs.as_ref()
    }

    pub fn truncation(&self) -> Option<Truncation> {
        self.truncation
    }

    /// `a·self + b·other`, keeping coefficients when both carry them.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.resolution() != other.resolution() {
            return Err(Error::WindowMismatch { left: self.resolution(), right: other.resolution() });
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(x, y)| a * x + b * y).collect();
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Some(x), Some(y)) if x.n() == y.n() => Some(CoeffVector::new(
                x.n(),
                x.values().iter().zip(y.values()).map(|(u, v)| a * u + b * v).collect(),
            )?),
            _ => None,
        };
        Ok(Self { samples, coeffs, truncation: None })
    }

    /// L² norm with respect to the normalized measure.
    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.resolution() as f64).sqrt()
    }
}

/// `f̂(k) = (1/Q) Σ_q f(x_q) e^{-i x_q k}` for `|k| ≤ n`.
pub fn forward_coeffs(f: &PeriodicFunction, n: usize) -> Result<CoeffVector> {
    let resolution = f.resolution();
    if 2 * n + 1 > resolution {
        return Err(Error::WindowTooLarge(format!("2n+1 = {} exceeds Q = {resolution}", 2 * n + 1)));
    }
    if let Some(c) = &f.coeffs {
        let ni = n as i64;
        return CoeffVector::new(n, (-ni..=ni).map(|k| c.get(k)).collect());
    }
    let (coeffs, _) = spectrum(f, n);
    Ok(coeffs)
}

fn spectrum(f: &PeriodicFunction, n: usize) -> (CoeffVector, f64) {
    let resolution = f.resolution();
    let mut buf = f.samples.clone();
    Radix2::new(resolution).forward(&mut buf);
    let ni = n as i64;
    let dropped = buf
        .iter()
        .enumerate()
        .filter(|(idx, _)| signed_mode(*idx, resolution).abs() > ni)
        .map(|(_, v)| v.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let values = (-ni..=ni).map(|k| buf[mode_index(k, resolution)]).collect();
    (CoeffVector::new(n, values).expect("2n+1 values"), dropped)
}

/// `(T_σ f)(x_q) = Σ_{|k| ≤ n} σ(x_q, k) f̂(k) e^{i x_q k}` from a sampled symbol.
///
/// `x`-independent grids take the coefficient path `σ(k) f̂(k)`, whose output
/// keeps its coefficients.
pub fn apply_grid(grid: &ToroidalGrid, f: &PeriodicFunction, n: usize) -> Result<PeriodicFunction> {
    let resolution = f.resolution();
    if grid.resolution() != resolution {
        return Err(Error::WindowMismatch { left: grid.resolution(), right: resolution });
    }
    if n > grid.k_window() {
        return Err(Error::WindowTooSmall(format!(
            "window n={n} exceeds the grid's K={}",
            grid.k_window()
        )));
    }
    let (coeffs, dropped) = match &f.coeffs {
        Some(c) if c.n() <= n => (forward_coeffs(f, n)?, 0.0),
        _ => {
            if 2 * n + 1 > resolution {
                return Err(Error::WindowTooLarge(format!("2n+1 = {} exceeds Q = {resolution}", 2 * n + 1)));
            }
            spectrum(f, n)
        }
    };
    let truncation = (dropped > 0.0).then_some(Truncation { n, dropped_l2: dropped });
    let ni = n as i64;
    if grid.is_x_independent() {
        let out = CoeffVector::new(n, (-ni..=ni).map(|k| grid.get(0, k) * coeffs.get(k)).collect())?;
        let mut g = PeriodicFunction::from_coeffs(out, resolution)?;
        g.truncation = truncation;
        return Ok(g);
    }
    let samples = (0..resolution)
        .map(|q| {
            (-ni..=ni).fold(Complex64::new(0.0, 0.0), |acc, k| {
                acc + grid.get(q, k) * coeffs.get(k) * unit_root(q as i64 * k, resolution)
            })
        })
        .collect();
    Ok(PeriodicFunction { samples, coeffs: None, truncation })
}

/// [`apply_grid`] on the symbol sampled at the function's resolution.
pub fn apply_operator(sym: &Symbol, f: &PeriodicFunction, n: usize) -> Result<PeriodicFunction> {
    apply_grid(&sample_symbol(sym, f.resolution(), n)?, f, n)
}

/// `‖F(T_σ f) - M_σ f̂‖ / ‖M_σ f̂‖` over the trusted rows `|j| ≤ n - M`.
pub fn consistency_residual_grid(
    grid: &ToroidalGrid,
    f: &PeriodicFunction,
    n: usize,
    m_window: usize,
) -> Result<f64> {
    let table = fourier_table(grid, m_window)?;
    let band = if table.is_multiplier() { 0 } else { m_window };
    let Some(trusted) = n.checked_sub(band) else {
        return Err(Error::TrustedRegionEmpty(format!("band {band} exceeds window {n}")));
    };
    let coeffs = forward_coeffs(f, n)?;
    let via_matrix = apply(&build_assoc_matrix(&table, n)?, &coeffs)?;
    let direct = forward_coeffs(&apply_grid(&grid.restrict(n)?, &PeriodicFunction::from_coeffs(coeffs, f.resolution())?, n)?, n)?;
    let t = trusted as i64;
    let mut diff = 0.0;
    let mut norm = 0.0;
    for j in -t..=t {
        diff += (direct.get(j) - via_matrix.get(j)).norm_sqr();
        norm += via_matrix.get(j).norm_sqr();
    }
    Ok(if norm > 0.0 { (diff / norm).sqrt() } else { diff.sqrt() })
}

/// Residual between the symbol-level and matrix-level routes to `T_σ f`.
pub fn matrix_consistency_residual(
    sym: &Symbol,
    f: &PeriodicFunction,
    n: usize,
    m_window: usize,
) -> Result<f64> {
    consistency_residual_grid(&sample_symbol(sym, f.resolution(), n)?, f, n, m_window)
}
