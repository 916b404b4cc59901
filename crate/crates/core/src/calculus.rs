//! Truncated composition and adjoint expansions, with matrix-level oracles.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::assoc::{build_assoc_matrix, matmul, AssocMatrix};
use crate::error::{Error, Result};
use crate::fft::unit_root;
use crate::symbol::{d_x, delta_k, FourierTable, Symbol, ToroidalGrid};

/// Largest expansion order accepted.
pub const MAX_ORDER: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionResult {
    pub symbol_grid: ToroidalGrid,
    pub order_n: usize,
    /// Sup norm of the last retained term (`h = N - 1`).
    pub remainder_proxy: f64,
    /// Sup norm of each retained term on the output window.
    pub term_sups: Vec<f64>,
    pub warnings: Vec<String>,
}

fn factorial(h: usize) -> f64 {
    (1..=h as u64).product::<u64>() as f64
}

fn check_order(n: usize, k_window: usize) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::InvalidArgument(format!("expansion order must be in 1..={MAX_ORDER}, got {n}")));
    }
    if n - 1 > k_window {
        return Err(Error::WindowExhausted(format!(
            "order {n} needs K >= {}, window is {k_window}",
            n - 1
        )));
    }
    Ok(())
}

fn check_shapes(a: &ToroidalGrid, b: &ToroidalGrid) -> Result<()> {
    if a.k_window() != b.k_window() {
        return Err(Error::WindowMismatch { left: a.k_window(), right: b.k_window() });
    }
    if a.resolution() != b.resolution() {
        return Err(Error::WindowMismatch { left: a.resolution(), right: b.resolution() });
    }
    Ok(())
}

/// `Σ_{h<N} term(h)` on the window `K - (N - 1)`; `term(h)` is produced on
/// the window `K - h`. One extra term is evaluated, when the window allows,
/// to flag a non-decreasing tail.
fn expand(
    k_window: usize,
    order: usize,
    mut term: impl FnMut(usize) -> Result<ToroidalGrid>,
) -> Result<ExpansionResult> {
    check_order(order, k_window)?;
    let out_k = k_window - (order - 1);
    let mut sum: Option<ToroidalGrid> = None;
    let mut term_sups = Vec::with_capacity(order);
    for h in 0..order {
        let t = term(h)?.restrict(out_k)?;
        let scale = 1.0 / factorial(h);
        let t = if h == 0 { t } else { t.map(|_, _, v| v * scale)? };
        term_sups.push(t.sup_norm());
        sum = Some(match sum {
            None => t,
            Some(s) => s.zip_with(&t, |a, b| a + b)?,
        });
    }
    let remainder_proxy = *term_sups.last().unwrap_or(&0.0);
    let mut warnings = Vec::new();
    if order <= MAX_ORDER && order <= k_window {
        let next = term(order)?.restrict(k_window - order)?;
        let next_sup = next.sup_norm() / factorial(order);
        if remainder_proxy > 0.0 && next_sup >= remainder_proxy {
            warnings.push(format!(
                "term {order} (sup {next_sup:.3e}) does not decrease from term {} (sup {remainder_proxy:.3e})",
                order - 1
            ));
        }
    }
    Ok(ExpansionResult {
        symbol_grid: sum.expect("order >= 1"),
        order_n: order,
        remainder_proxy,
        term_sups,
        warnings,
    })
}

/// `Σ_{h<N} (1/h!) Δ_k^h α · D_x^h β` on sampled grids of equal shape.
pub fn compose_grids(alpha: &ToroidalGrid, beta: &ToroidalGrid, order: usize) -> Result<ExpansionResult> {
    check_shapes(alpha, beta)?;
    let k_window = alpha.k_window();
    expand(k_window, order, |h| {
        let a = delta_k(alpha, h)?;
        let b = d_x(beta, h as u32)?.restrict(k_window - h)?;
        a.zip_with(&b, |x, y| x * y)
    })
}

/// Composition symbol of `T_α T_β` to order `N`.
pub fn compose_asymptotic(alpha: &Symbol, beta: &Symbol, order: usize) -> Result<ExpansionResult> {
    compose_grids(&alpha.sample()?, &beta.sample()?, order)
}

/// `Σ_{h<N} (1/h!) Δ_k^h ∂_x^h conj σ` with `∂_x = i D_x`.
pub fn adjoint_grid(sigma: &ToroidalGrid, order: usize) -> Result<ExpansionResult> {
    let conj = sigma.map(|_, _, v| v.conj())?;
    expand(sigma.k_window(), order, |h| {
        let phase = Complex64::i().powu(h as u32);
        let d = d_x(&conj, h as u32)?;
        let d = if h == 0 { d } else { d.map(|_, _, v| v * phase)? };
        delta_k(&d, h)
    })
}

pub fn adjoint_asymptotic(sigma: &Symbol, order: usize) -> Result<ExpansionResult> {
    adjoint_grid(&sigma.sample()?, order)
}

/// `M_α M_β` on the window `n`; the product tracks its own trusted radius.
pub fn compose_exact_matrix(alpha: &FourierTable, beta: &FourierTable, n: usize) -> Result<AssocMatrix> {
    if alpha.k_window() != beta.k_window() {
        return Err(Error::WindowMismatch { left: alpha.k_window(), right: beta.k_window() });
    }
    matmul(&build_assoc_matrix(alpha, n)?, &build_assoc_matrix(beta, n)?)
}

/// Read the symbol back from its matrix: `σ(x_q, k) = Σ_{|m| ≤ b} M_{k+m, k} e^{i x_q m}`
/// for `|k| ≤ n - b`, where `b` is the matrix band.
pub fn symbol_from_matrix(matrix: &AssocMatrix, resolution: usize) -> Result<ToroidalGrid> {
    let band = matrix.band();
    let Some(k_out) = matrix.n().checked_sub(band) else {
        return Err(Error::TrustedRegionEmpty(format!(
            "band {band} exceeds window {}",
            matrix.n()
        )));
    };
    if 2 * band + 1 > resolution {
        return Err(Error::WindowTooLarge(format!(
            "band {band} needs Q >= {}, got {resolution}",
            2 * band + 1
        )));
    }
    let b = band as i64;
    let grid = ToroidalGrid::from_fn(resolution, k_out, |q, k| {
        (-b..=b).fold(Complex64::new(0.0, 0.0), |acc, m| {
            acc + matrix.get(k + m, k) * unit_root(q as i64 * m, resolution)
        })
    })?;
    Ok(if band == 0 { grid.mark_x_independent() } else { grid })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerResult {
    pub expansion: ExpansionResult,
    /// `σ(x,k)^n` on the output window, multiplied in the same order as the expansion.
    pub leading: ToroidalGrid,
    /// `sup |σ^n - σ(x,k)^n|`: the size of the correction terms.
    pub correction_sup: f64,
    /// `sup |σ|` over the sampled grid.
    pub c_sigma: f64,
}

/// `σ ∘ (σ ∘ (… ∘ σ))` by iterated expansion; each step costs `N - 1` in `K`.
pub fn symbol_power(sigma: &Symbol, power: usize, order: usize) -> Result<PowerResult> {
    if power == 0 {
        return Err(Error::InvalidArgument("power must be >= 1".into()));
    }
    let base = sigma.sample()?;
    let c_sigma = base.sup_norm();
    let mut acc = ExpansionResult {
        symbol_grid: base.clone(),
        order_n: order,
        remainder_proxy: 0.0,
        term_sups: Vec::new(),
        warnings: Vec::new(),
    };
    let mut leading = base.clone();
    for _ in 1..power {
        let k = acc.symbol_grid.k_window();
        let left = base.restrict(k)?;
        let step = compose_grids(&left, &acc.symbol_grid, order)?;
        let out_k = step.symbol_grid.k_window();
        leading = left.restrict(out_k)?.zip_with(&leading.restrict(out_k)?, |a, b| a * b)?;
        let mut warnings = core::mem::take(&mut acc.warnings);
        warnings.extend(step.warnings.iter().cloned());
        acc = ExpansionResult {
            remainder_proxy: acc.remainder_proxy.max(step.remainder_proxy),
            warnings,
            ..step
        };
    }
    let correction_sup = acc
        .symbol_grid
        .zip_with(&leading, |a, b| a - b)?
        .sup_norm();
    Ok(PowerResult { expansion: acc, leading, correction_sup, c_sigma })
}
