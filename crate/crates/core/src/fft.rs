//! Radix-2 discrete Fourier transforms on power-of-two lengths.
//!
//! Conventions follow the normalized Haar measure on the circle: the forward
//! transform of `f` returns `(1/Q) Σ_q f(x_q) e^{-2πiqm/Q}` and the inverse
//! returns `Σ_m c_m e^{2πiqm/Q}`, so the pair is a round trip.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// `e^{2πi j/n}` with exact values at multiples of `n/8`'s quarter points.
///
/// The angle is folded into the first octant before calling `sin`/`cos`, so
/// symmetric roots are bitwise symmetric and quarter turns are exact.
pub fn unit_root(j: i64, n: usize) -> Complex64 {
    let n_i = n as i64;
    let j = j.rem_euclid(n_i) as u64;
    let n = n as u64;
    // Work in units of n/8 where possible: reduce j/n to [0, 1/8].
    let eighth_num = 8 * j;
    let octant = (eighth_num / n) as u32;
    let rem = eighth_num % n;
    // angle within octant in [0, π/4) measured in radians
    let base = |num: u64| 2.0 * PI * (num as f64) / (8.0 * n as f64);
    let (c, s) = match octant % 2 {
        0 => {
            let a = base(rem);
            (a.cos(), a.sin())
        }
        _ => {
            // reflect: angle = π/4 - a' where a' measured from the next octant boundary
            let a = base(n - rem);
            (a.sin(), a.cos())
        }
    };
    // (c, s) now is cos/sin of the reduced angle θ ∈ [0, π/4] (octant 0) or
    // θ ∈ (π/4, π/2] (octant 1) expressed in the first quadrant.
    let quadrant = octant / 2;
    let (re, im) = match quadrant {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    };
    Complex64::new(re, im)
}

/// Precomputed plan for length-`n` transforms.
#[derive(Debug, Clone)]
pub struct Radix2 {
    n: usize,
    // forward twiddles e^{-2πij/n}, j < n/2
    twiddles: Vec<Complex64>,
}

impl Radix2 {
    /// Panics if `n` is not a power of two.
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "transform length must be a power of two");
        let twiddles = (0..n / 2).map(|j| unit_root(-(j as i64), n)).collect();
        Self { n, twiddles }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn transform(&self, buf: &mut [Complex64], inverse: bool) {
        let n = self.n;
        assert_eq!(buf.len(), n);
        if n <= 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let r = i.reverse_bits() >> (usize::BITS - bits);
            if r > i {
                buf.swap(i, r);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for j in 0..half {
                    let mut w = self.twiddles[j * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = buf[start + j];
                    let b = buf[start + j + half] * w;
                    buf[start + j] = a + b;
                    buf[start + j + half] = a - b;
                }
            }
            len <<= 1;
        }
    }

    /// Normalized forward transform in place: `c_m = (1/n) Σ_q f_q e^{-2πiqm/n}`.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.transform(buf, false);
        let scale = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    /// Inverse of [`Radix2::forward`]: `f_q = Σ_m c_m e^{2πiqm/n}`.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.transform(buf, true);
    }
}

/// Position of signed mode `m` in an FFT buffer of length `n`.
pub fn mode_index(m: i64, n: usize) -> usize {
    m.rem_euclid(n as i64) as usize
}

/// Signed mode carried by buffer slot `idx` (`-n/2 ..= n/2 - 1`).
pub fn signed_mode(idx: usize, n: usize) -> i64 {
    if idx < n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}
