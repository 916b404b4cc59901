//! Tail extrapolation helpers shared by the spectral and Riesz modules.

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Aitken's Δ² limit of three successive terms of a geometrically converging
/// sequence. Returns `None` unless the ratio of successive increments lies in
/// `(0, 1)`; a constant sequence is its own limit.
pub fn aitken(t: [f64; 3]) -> Option<f64> {
    let d1 = t[1] - t[0];
    let d2 = t[2] - t[1];
    if d1 == 0.0 && d2 == 0.0 {
        return Some(t[2]);
    }
    if d1 == 0.0 {
        return None;
    }
    let r = d2 / d1;
    if !(r > 0.0 && r < 1.0) {
        return None;
    }
    Some(t[2] + d2 * r / (1.0 - r))
}

/// Complex version of [`aitken`]; requires `|r| < 1`.
pub fn aitken_complex(t: [Complex64; 3]) -> Option<Complex64> {
    let d1 = t[1] - t[0];
    let d2 = t[2] - t[1];
    let zero = Complex64::new(0.0, 0.0);
    if d1 == zero && d2 == zero {
        return Some(t[2]);
    }
    if d1 == zero {
        return None;
    }
    let r = d2 / d1;
    if !(r.norm() < 1.0) {
        return None;
    }
    Some(t[2] + d2 * r / (Complex64::new(1.0, 0.0) - r))
}

/// Slope of `log v` against `log k` between two points.
pub fn loglog_slope(k1: f64, v1: f64, k2: f64, v2: f64) -> f64 {
    (v2.ln() - v1.ln()) / (k2.ln() - k1.ln())
}

pub fn is_nondecreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] >= w[0])
}

pub fn is_nonincreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0])
}
