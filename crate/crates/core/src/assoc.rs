//! Truncations of the associated matrix `(M_σ)_{jk} = σ̂(j - k, k)` on the
//! symmetric window `j, k ∈ [-n, n]`.
//!
//! Every matrix carries its band width and a trusted radius: the largest `t`
//! such that entries with `|j|, |k| ≤ t` agree with the infinite matrix.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::unit_root;
use crate::linalg::CMatrix;
use crate::symbol::{FourierTable, ToroidalGrid};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct AssocMatrix {
    n: usize,
    band: usize,
    trusted_radius: Option<usize>,
    entries: CMatrix,
}

impl AssocMatrix {
    /// Wrap a dense `(2n+1) × (2n+1)` array.
    pub fn from_entries(
        n: usize,
        band: usize,
        trusted_radius: Option<usize>,
        entries: CMatrix,
    ) -> Result<Self> {
        if entries.rows() != 2 * n + 1 || entries.cols() != 2 * n + 1 {
            return Err(Error::WindowMismatch { left: 2 * n + 1, right: entries.rows() });
        }
        if trusted_radius.is_some_and(|t| t > n) {
            return Err(Error::InvalidArgument(format!(
                "trusted radius {trusted_radius:?} exceeds window {n}"
            )));
        }
        Ok(Self { n, band, trusted_radius, entries })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, band: 0, trusted_radius: Some(n), entries: CMatrix::identity(2 * n + 1) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest `|j - k|` with a possibly nonzero entry.
    pub fn band(&self) -> usize {
        self.band
    }

    /// `None` when no entry is known to match the infinite matrix.
    pub fn trusted_radius(&self) -> Option<usize> {
        self.trusted_radius
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn indices(&self) -> core::ops::RangeInclusive<i64> {
        -(self.n as i64)..=self.n as i64
    }

    fn pos(&self, j: i64) -> usize {
        assert!(j.unsigned_abs() as usize <= self.n, "index {j} outside window {}", self.n);
        (j + self.n as i64) as usize
    }

    /// Entry at signed indices `(j, k)`.
    pub fn get(&self, j: i64, k: i64) -> Complex64 {
        self.entries[(self.pos(j), self.pos(k))]
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        self.indices().map(|k| self.get(k, k)).collect()
    }

    /// Sub-window `[-m, m]`; the trusted radius is clipped accordingly.
    pub fn restrict(&self, m: usize) -> Result<Self> {
        if m > self.n {
            return Err(Error::WindowTooSmall(format!("cannot restrict n={} to {m}", self.n)));
        }
        let off = self.n - m;
        let entries = CMatrix::from_fn(2 * m + 1, 2 * m + 1, |a, b| self.entries[(a + off, b + off)]);
        // a row or column cut off by the restriction no longer contributes to products
        let trusted = self.trusted_radius.map(|t| t.min(m));
        Ok(Self { n: m, band: self.band.min(2 * m), trusted_radius: trusted, entries })
    }
}

/// Signed coefficient vector `φ(k)`, `|k| ≤ n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    n: usize,
    values: Vec<Complex64>,
}

impl CoeffVector {
    pub fn new(n: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != 2 * n + 1 {
            return Err(Error::WindowMismatch { left: 2 * n + 1, right: values.len() });
        }
        Ok(Self { n, values })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, values: vec![ZERO; 2 * n + 1] }
    }

    /// Unit vector at signed index `k`.
    pub fn basis(n: usize, k: i64) -> Self {
        let mut v = Self::zeros(n);
        v.values[(k + n as i64) as usize] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.n {
            return ZERO;
        }
        self.values[(k + self.n as i64) as usize]
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `(M_σ)_{jk} = σ̂(j - k, k)` for `|j|, |k| ≤ n`, zero outside the band.
pub fn build_assoc_matrix(table: &FourierTable, n: usize) -> Result<AssocMatrix> {
    if n > table.k_window() {
        return Err(Error::WindowTooSmall(format!(
            "window n={n} exceeds the table's K={}",
            table.k_window()
        )));
    }
    let band = if table.is_multiplier() { 0 } else { table.m_window().min(2 * n) };
    let ni = n as i64;
    let entries = CMatrix::from_fn(2 * n + 1, 2 * n + 1, |a, b| {
        let (j, k) = (a as i64 - ni, b as i64 - ni);
        if (j - k).unsigned_abs() as usize <= band {
            table.get(j - k, k)
        } else {
            ZERO
        }
    });
    Ok(AssocMatrix { n, band, trusted_radius: Some(n), entries })
}

/// `(M*)_{jk} = conj(M_{kj})`.
pub fn adjoint(matrix: &AssocMatrix) -> AssocMatrix {
    AssocMatrix {
        n: matrix.n,
        band: matrix.band,
        trusted_radius: matrix.trusted_radius,
        entries: matrix.entries.adjoint(),
    }
}

/// Finite product on the shared window.
///
/// The trusted radius shrinks by the smaller band, since an entry `(j, k)` of
/// the infinite product only sums over `h` within that band of `j` or `k`.
pub fn matmul(a: &AssocMatrix, b: &AssocMatrix) -> Result<AssocMatrix> {
    if a.n != b.n {
        return Err(Error::WindowMismatch { left: a.n, right: b.n });
    }
    let shrink = a.band.min(b.band);
    let trusted = match (a.trusted_radius, b.trusted_radius) {
        (Some(x), Some(y)) => x.min(y).checked_sub(shrink),
        _ => None,
    };
    Ok(AssocMatrix {
        n: a.n,
        band: (a.band + b.band).min(2 * a.n),
        trusted_radius: trusted,
        entries: a.entries.matmul(&b.entries)?,
    })
}

/// `(Mφ)(j) = Σ_k M_{jk} φ(k)`.
pub fn apply(matrix: &AssocMatrix, v: &CoeffVector) -> Result<CoeffVector> {
    if matrix.n != v.n {
        return Err(Error::WindowMismatch { left: matrix.n, right: v.n });
    }
    Ok(CoeffVector { n: v.n, values: matrix.entries.mul_vec(&v.values)? })
}

/// Discrete inner products `(1/Q) Σ_q conj(u_j(x_q)) u_k(x_q)` with
/// `u_k(x) = σ(x, k) e^{ixk}`, i.e. the block `P_n M* M P_n`.
///
/// Exact for symbols band-limited to the table's `M` when `Q ≥ 2(M + n) + 1`.
pub fn gram_block(table: &FourierTable, grid: &ToroidalGrid, n: usize) -> Result<CMatrix> {
    let resolution = grid.resolution();
    let m = table.m_window();
    if resolution < 2 * (m + n) + 1 {
        return Err(Error::WindowTooSmall(format!(
            "Q={resolution} is below 2(M+n)+1 = {}",
            2 * (m + n) + 1
        )));
    }
    if n > grid.k_window() || n > table.k_window() {
        return Err(Error::WindowTooSmall(format!(
            "window n={n} exceeds K={}",
            grid.k_window().min(table.k_window())
        )));
    }
    let size = 2 * n + 1;
    let ni = n as i64;
    if table.is_multiplier() || grid.is_x_independent() {
        return Ok(CMatrix::from_fn(size, size, |a, b| {
            if a == b {
                Complex64::new(grid.get(0, a as i64 - ni).norm_sqr(), 0.0)
            } else {
                ZERO
            }
        }));
    }
    let u: Vec<Vec<Complex64>> = (-ni..=ni)
        .map(|k| {
            grid.column(k)
                .iter()
                .enumerate()
                .map(|(q, s)| s * unit_root(q as i64 * k, resolution))
                .collect()
        })
        .collect();
    let scale = 1.0 / resolution as f64;
    let mut out = CMatrix::zeros(size, size);
    for a in 0..size {
        for b in a..size {
            let dot = u[a].iter().zip(&u[b]).fold(ZERO, |acc, (x, y)| acc + x.conj() * y) * scale;
            out[(a, b)] = dot;
            out[(b, a)] = dot.conj();
        }
        out[(a, a)] = Complex64::new(out[(a, a)].re, 0.0);
    }
    Ok(out)
}

/// [`gram_block`] for several windows, computed once at the largest and cut down.
pub fn gram_blocks(
    table: &FourierTable,
    grid: &ToroidalGrid,
    windows: &[usize],
) -> Result<Vec<(usize, CMatrix)>> {
    let Some(&largest) = windows.iter().max() else {
        return Ok(Vec::new());
    };
    let full = gram_block(table, grid, largest)?;
    Ok(windows
        .iter()
        .map(|&n| {
            let off = largest - n;
            (n, CMatrix::from_fn(2 * n + 1, 2 * n + 1, |a, b| full[(a + off, b + off)]))
        })
        .collect())
}
