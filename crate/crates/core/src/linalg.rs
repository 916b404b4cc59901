//! Dense complex matrices and the eigenvalue routines behind the truncated
//! spectral analyses.
//!
//! General matrices go through Householder reduction to Hessenberg form
//! followed by single-shift complex QR. Hermitian matrices use cyclic Jacobi.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for h in 0..self.cols {
                let a = self[(i, h)];
                if a == ZERO {
                    continue;
                }
                let src = other.row(h);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::InvalidArgument(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(ZERO, |acc, (a, b)| acc + a * b))
            .collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |A - A^H|` entrywise.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    fn triangular_diagonal(&self) -> Option<Vec<Complex64>> {
        let n = self.rows;
        let lower_zero = (0..n).all(|i| (0..i).all(|j| self[(i, j)] == ZERO));
        let upper_zero = (0..n).all(|i| (i + 1..n).all(|j| self[(i, j)] == ZERO));
        if lower_zero || upper_zero {
            Some((0..n).map(|i| self[(i, i)]).collect())
        } else {
            None
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Sort lexicographically by `(re, im)`.
pub fn sort_lexicographic(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

fn hessenberg(a: &mut CMatrix) {
    let n = a.rows;
    if n < 3 {
        return;
    }
    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        let tail: f64 = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let norm = (tail + x0.norm_sqr()).sqrt();
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let len = n - k - 1;
        for i in 0..len {
            v[i] = a[(k + 1 + i, k)];
        }
        v[0] -= alpha;
        let vv: f64 = v[..len].iter().map(|z| z.norm_sqr()).sum();
        if vv == 0.0 {
            continue;
        }
        let scale = 2.0 / vv;
        for j in 0..n {
            let mut w = ZERO;
            for i in 0..len {
                w += v[i].conj() * a[(k + 1 + i, j)];
            }
            w *= scale;
            for i in 0..len {
                let vi = v[i];
                a[(k + 1 + i, j)] -= vi * w;
            }
        }
        for r in 0..n {
            let mut w = ZERO;
            for i in 0..len {
                w += a[(r, k + 1 + i)] * v[i];
            }
            w *= scale;
            for i in 0..len {
                let vi = v[i];
                a[(r, k + 1 + i)] -= w * vi.conj();
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
}

fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b == ZERO {
        return (1.0, ZERO);
    }
    if a == ZERO {
        return (0.0, b.conj() / b.norm());
    }
    let r = a.norm().hypot(b.norm());
    let c = a.norm() / r;
    let s = (a / a.norm()) * b.conj() / r;
    (c, s)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// All eigenvalues of a square matrix, ordered lexicographically by `(re, im)`.
///
/// Triangular inputs return their diagonal exactly.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::InvalidArgument(format!(
            "eigenvalues of a non-square {}x{} matrix",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    if let Some(mut d) = a.triangular_diagonal() {
        sort_lexicographic(&mut d);
        return Ok(d);
    }
    let mut h = a.clone();
    hessenberg(&mut h);
    let scale = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let max_iter = 30 * n.max(1);
    let mut total = 0usize;
    let mut its = 0usize;
    let mut hi = n - 1;
    let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(n);
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let mut s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if s == 0.0 {
                s = scale;
            }
            if h[(lo, lo - 1)].norm() <= eps * s {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            its = 0;
            continue;
        }
        total += 1;
        its += 1;
        if total > max_iter {
            return Err(Error::ConvergenceFailure { iterations: total });
        }
        let mu = if its % 10 == 0 {
            h[(hi, hi)] + h[(hi, hi - 1)].norm() * 0.75
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for i in lo..=hi {
            h[(i, i)] -= mu;
        }
        rots.clear();
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let u = h[(k, j)];
                let v = h[(k + 1, j)];
                h[(k, j)] = u * c + s * v;
                h[(k + 1, j)] = -s.conj() * u + v * c;
            }
            h[(k + 1, k)] = ZERO;
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = lo + idx;
            for i in lo..=(k + 2).min(hi) {
                let u = h[(i, k)];
                let v = h[(i, k + 1)];
                h[(i, k)] = u * c + v * s.conj();
                h[(i, k + 1)] = -u * s + v * c;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += mu;
        }
    }
    let mut eig: Vec<Complex64> = (0..n).map(|i| h[(i, i)]).collect();
    sort_lexicographic(&mut eig);
    Ok(eig)
}

/// Eigenvalues of a Hermitian matrix in ascending order (cyclic Jacobi).
///
/// The strictly lower triangle is assumed to mirror the upper one; callers
/// check [`CMatrix::hermitian_deviation`] first when that is in doubt.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::InvalidArgument(format!(
            "eigenvalues of a non-square {}x{} matrix",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in 0..i {
            m[(i, j)] = m[(j, i)].conj();
        }
    }
    let total = m.frobenius_norm();
    const MAX_SWEEPS: usize = 60;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * total || off == 0.0 {
            let mut eig: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
            eig.sort_by(f64::total_cmp);
            return Ok(eig);
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let b = apq.norm();
                if b == 0.0 {
                    continue;
                }
                let d = apq.conj() / b;
                for r in 0..n {
                    m[(r, q)] *= d;
                    m[(q, r)] *= d.conj();
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (2.0 * b);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..n {
                    let x = m[(r, p)];
                    let y = m[(r, q)];
                    m[(r, p)] = x * c - y * s;
                    m[(r, q)] = x * s + y * c;
                }
                for r in 0..n {
                    let x = m[(p, r)];
                    let y = m[(q, r)];
                    m[(p, r)] = x * c - y * s;
                    m[(q, r)] = x * s + y * c;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                m[(p, p)] = Complex64::new(app - t * b, 0.0);
                m[(q, q)] = Complex64::new(aqq + t * b, 0.0);
            }
        }
    }
    Err(Error::ConvergenceFailure { iterations: MAX_SWEEPS })
}

/// Singular values in descending order, from the eigenvalues of `A^H A`.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    let gram = a.adjoint().matmul(a)?;
    let mut sv: Vec<f64> = hermitian_eigenvalues(&gram)?
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    sv.reverse();
    Ok(sv)
}
