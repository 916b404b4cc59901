//! Periodic pseudo-differential operators on the circle, realized through
//! their symbols and truncated associated matrices.
//!
//! The crate is `no_std` (it needs `alloc`); file formats and the command
//! line live in the `toruspdo` crate.

#![no_std]

extern crate alloc;

pub mod apply;
pub mod assoc;
pub mod calculus;
pub mod error;
pub mod expr;
pub mod fft;
pub mod linalg;
pub mod riesz;
pub mod spectral;
pub mod symbol;
pub mod tail;

pub use error::{Error, Result};
pub use num_complex::Complex64;
