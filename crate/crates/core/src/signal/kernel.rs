//! Derivatives of the sinc kernel `K(t) = sin(σt) / (σt)`.
//!
//! With `s(u) = sin(u) / u` we have `K^(l)(t) = σ^l s^(l)(σt)` and
//! `s^(l)(-u) = (-1)^l s^(l)(u)`, so only `u >= 0` is ever evaluated.
//!
//! Two evaluation routes are used:
//!
//! * the power series `s^(l)(u) = Σ_{2m>=l} (-1)^m u^(2m-l) / ((2m+1) (2m-l)!)`
//!   for `u` below the switch radius,
//! * the forward recurrence obtained by differentiating `u s(u) = sin u`
//!   `l` times, `s_l = (sin(u + lπ/2) - l s_{l-1}) / u`, above it.
//!
//! The recurrence amplifies rounding by `l / u` per step, so the switch
//! radius is `max(0.5, l)`; below it the series has at most `e^l` of
//! cancellation.

use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Largest derivative order supported by default.
pub const DEFAULT_MAX_ORDER: usize = 16;

/// Upper bound on series terms; the series converges long before this for
/// every `u` below the switch radius of a supported order.
const MAX_SERIES_TERMS: usize = 80;

/// Radius in `u = σt` below which the power series is used.
pub fn switch_radius(order: usize) -> f64 {
    (order as f64).max(0.5)
}

/// `sin(u + order·π/2)` without rounding the phase.
fn shifted_sin(u: f64, order: usize) -> f64 {
    match order % 4 {
        0 => u.sin(),
        1 => u.cos(),
        2 => -u.sin(),
        _ => -u.cos(),
    }
}

/// Power-series evaluation of `s^(l)(u)`.
pub fn unit_sinc_series(order: usize, u: f64) -> f64 {
    let l = order as i64;
    let m0 = (l + 1) / 2;
    // first term: (-1)^m0 u^(2m0-l) / ((2m0+1) (2m0-l)!)
    let p = (2 * m0 - l) as usize; // 0 or 1
    let mut term = if m0 % 2 == 0 { 1.0 } else { -1.0 };
    term /= (2 * m0 + 1) as f64;
    if p == 1 {
        term *= u;
    }
    let mut sum = term;
    let u2 = u * u;
    let mut m = m0;
    for _ in 0..MAX_SERIES_TERMS {
        // ratio between consecutive terms m -> m + 1
        let a = (2 * m - l) as f64;
        term *= -u2 * (2 * m + 1) as f64 / ((2 * m + 3) as f64 * (a + 1.0) * (a + 2.0));
        sum += term;
        m += 1;
        if term.abs() <= 1e-18 * sum.abs().max(f64::MIN_POSITIVE) && m > m0 + 2 {
            break;
        }
    }
    sum
}

/// Closed-form (recurrence) evaluation of `s^(l)(u)`, `u > 0`.
pub fn unit_sinc_closed(order: usize, u: f64) -> f64 {
    let mut s = u.sin() / u;
    for j in 1..=order {
        s = (shifted_sin(u, j) - j as f64 * s) / u;
    }
    s
}

fn unit_sinc_derivative(order: usize, u: f64) -> f64 {
    let a = u.abs();
    let v = if a < switch_radius(order) {
        unit_sinc_series(order, a)
    } else {
        unit_sinc_closed(order, a)
    };
    if u < 0.0 && order % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Evaluator for `K_σ^(l)`, `l = 0..=max_order`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelDerivativeTable {
    sigma: f64,
    max_order: usize,
}

impl KernelDerivativeTable {
    pub fn new(sigma: f64, max_order: usize) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        Ok(Self { sigma, max_order })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// `K_σ^(order)(t)`.
    pub fn eval(&self, order: usize, t: f64) -> Result<f64> {
        if order > self.max_order {
            return Err(Error::UnsupportedOrder {
                order,
                max: self.max_order,
            });
        }
        Ok(self.sigma.powi(order as i32) * unit_sinc_derivative(order, self.sigma * t))
    }
}

/// `K_σ^(order)(t)` with the default order limit.
pub fn kernel_derivative(sigma: f64, order: usize, t: f64) -> Result<f64> {
    KernelDerivativeTable::new(sigma, DEFAULT_MAX_ORDER)?.eval(order, t)
}
