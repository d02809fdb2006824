//! Littlewood-Paley paraproducts on a periodic grid, a spectral Dirichlet
//! solver, finite Neumann-series parametrices for `-u'' + u u' = f` on
//! `[0, 1]`, and a symbolic regularity calculus over the `(s, p)` plane.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dyadic;
mod error;
mod fft;
pub mod green;
pub mod parametrix;
pub mod paraproduct;
pub mod regcalc;

pub use error::{Error, Result};
