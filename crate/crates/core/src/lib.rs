//! Reconstruction of bandlimited functions from nonuniform samples of the
//! function and its first `k - 1` derivatives.
//!
//! The crate is `no_std` (with `alloc`) and contains only the numerical
//! machinery. File formats and the command line live in the `derivsamp`
//! companion crate.
//!
//! Module map:
//!
//! * [`signal`]: exact sinc-series test functions, sinc kernel derivatives,
//!   uniform grid functions and quadrature.
//! * [`constants`]: Cimmino constants, Schmidt constants, sampling weights,
//!   stable-sampling bounds and the contraction factor.
//! * [`hermite`]: two-point Hermite interpolation and piecewise assembly.
//! * [`spectral`]: band-limited trigonometric models on a periodic window.
//! * [`operators`]: the Hermite approximation operator and its contractive
//!   reconstruction iteration.
//! * [`frame`]: the weighted kernel-derivative frame on a band-pass subspace.
//! * [`analysis`]: sampling sets, gap statistics and stability sweeps.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod constants;
mod error;
pub mod frame;
pub mod hermite;
pub mod operators;
pub mod signal;
pub mod spectral;

pub use error::{Error, Result};

/// Anything that can report exact derivatives of a real function.
pub trait RealFunction {
    /// Value of the `order`-th derivative at `x`.
    fn derivative(&self, x: f64, order: usize) -> Result<f64>;
}
