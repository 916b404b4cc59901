#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toruspdo_core::symbol::{japanese_bracket, Symbol};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rand_c(rng: &mut ChaCha8Rng, scale: f64) -> Complex64 {
    c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// `σ(x,k) = Σ_{|m| ≤ M} (a_m + b_m / ⟨k⟩) e^{imx}`: band-limited in `x`, smooth in `k`.
#[derive(Clone, Debug)]
pub struct BandedSymbol {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

impl BandedSymbol {
    pub fn random(rng: &mut ChaCha8Rng, band: usize) -> Self {
        let a = (0..2 * band + 1).map(|_| rand_c(rng, 1.0)).collect();
        let b = (0..2 * band + 1).map(|_| rand_c(rng, 1.0)).collect();
        Self { a, b }
    }

    pub fn band(&self) -> usize {
        (self.a.len() - 1) / 2
    }

    pub fn coeff(&self, m: i64, k: i64) -> Complex64 {
        let i = (m + self.band() as i64) as usize;
        self.a[i] + self.b[i] / japanese_bracket(k as f64)
    }

    pub fn eval(&self, x: f64, k: i64) -> Complex64 {
        let b = self.band() as i64;
        (-b..=b).map(|m| self.coeff(m, k) * Complex64::from_polar(1.0, m as f64 * x)).sum()
    }

    pub fn symbol(&self, k_window: usize, resolution: usize) -> Symbol {
        let me = Arc::new(self.clone());
        Symbol::closed_form(move |x, k| me.eval(x, k), k_window, resolution).unwrap()
    }
}

pub fn grid_x(q: usize, resolution: usize) -> f64 {
    2.0 * PI * q as f64 / resolution as f64
}
