//! Two-point Hermite interpolation.
//!
//! For data `f^(j)(ξ), f^(j)(η)`, `j = 0..=r`, the interpolant of degree
//! `2r+1` is
//!
//! ```text
//! H(x) = Σ_j A_0j(x) f^(j)(ξ) + Σ_j A_1j(x) f^(j)(η)
//! A_0j(x) = (x-η)^(r+1) (x-ξ)^j / j! · Σ_{s=0}^{r-j} g_0^(s)(ξ) (x-ξ)^s / s!
//! A_1j(x) = (x-ξ)^(r+1) (x-η)^j / j! · Σ_{s=0}^{r-j} g_1^(s)(η) (x-η)^s / s!
//! ```
//!
//! with `g_0 = (x-η)^-(r+1)` and `g_1 = (x-ξ)^-(r+1)`. The sums over `s` are
//! truncated Taylor expansions of `g_0`, `g_1`; they are never empty because
//! `j <= r`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::constants::factorial;
use crate::operators::DerivativeSamples;
use crate::signal::{Grid, GridFunction};
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Segments shorter than this are rejected.
pub const MIN_SEGMENT_LENGTH: f64 = 1e-10;

/// `d^s/dx^s (x - pole)^-(r+1)` at `x = base`.
pub fn g_factor_derivative(r: usize, s: usize, base: f64, pole: f64) -> Result<f64> {
    let d = base - pole;
    if d == 0.0 {
        return Err(Error::Singularity(base));
    }
    let rising: f64 = (r + 1..=r + s).map(|v| v as f64).product();
    let sign = if s.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * rising * d.powi(-((r + 1 + s) as i32)))
}

/// Hermite interpolant on `[xi, eta]`, stored as monomial coefficients in
/// `x - (xi + eta)/2`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HermiteSegment {
    pub xi: f64,
    pub eta: f64,
    pub r: usize,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub coeffs: Vec<f64>,
}

pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn poly_square(p: &[f64]) -> Vec<f64> {
    poly_mul(p, p)
}

fn poly_pow(base: &[f64], n: usize) -> Vec<f64> {
    (0..n).fold(vec![1.0], |acc, _| poly_mul(&acc, base))
}

/// Coefficients of the basis polynomial `A_{side,j}` in `y = x - mid`.
fn basis_polynomial(r: usize, j: usize, xi: f64, eta: f64, left_side: bool) -> Result<Vec<f64>> {
    let half = 0.5 * (eta - xi);
    // x - ξ = y + half, x - η = y - half
    let (own, other, base, pole) = if left_side {
        ([half, 1.0], [-half, 1.0], xi, eta)
    } else {
        ([-half, 1.0], [half, 1.0], eta, xi)
    };
    let mut taylor = vec![0.0; r - j + 1];
    for s in 0..=r - j {
        let g = g_factor_derivative(r, s, base, pole)? / factorial(s);
        for (t, c) in poly_pow(&own, s).iter().enumerate() {
            taylor[t] += g * c;
        }
    }
    let lead = poly_mul(&poly_pow(&other, r + 1), &poly_pow(&own, j));
    let mut p = poly_mul(&lead, &taylor);
    let jf = factorial(j);
    for c in p.iter_mut() {
        *c /= jf;
    }
    Ok(p)
}

/// Builds the interpolant matching `left[j] = f^(j)(xi)`, `right[j] = f^(j)(eta)`.
pub fn build_segment(
    xi: f64,
    eta: f64,
    left: &[f64],
    right: &[f64],
    r: usize,
) -> Result<HermiteSegment> {
    if !(eta > xi) {
        return Err(Error::Ordering {
            left: xi,
            right: eta,
        });
    }
    if eta - xi < MIN_SEGMENT_LENGTH {
        return Err(Error::InvalidParameter(format!(
            "segment [{xi}, {eta}] shorter than {MIN_SEGMENT_LENGTH}"
        )));
    }
    if left.len() != r + 1 || right.len() != r + 1 {
        return Err(Error::Data(format!(
            "need {} values per endpoint, got {} and {}",
            r + 1,
            left.len(),
            right.len()
        )));
    }
    let mut coeffs = vec![0.0; 2 * r + 2];
    for j in 0..=r {
        for (side, data) in [(true, left[j]), (false, right[j])] {
            if data == 0.0 {
                continue;
            }
            let p = basis_polynomial(r, j, xi, eta, side)?;
            for (c, v) in coeffs.iter_mut().zip(&p) {
                *c += data * v;
            }
        }
    }
    Ok(HermiteSegment {
        xi,
        eta,
        r,
        left: left.to_vec(),
        right: right.to_vec(),
        coeffs,
    })
}

/// Coefficients of the `m`-th derivative of a polynomial.
pub fn differentiate(coeffs: &[f64], m: usize) -> Vec<f64> {
    if m >= coeffs.len() {
        return Vec::new();
    }
    coeffs[m..]
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let falling: f64 = (i + 1..=i + m).map(|v| v as f64).product();
            c * falling
        })
        .collect()
}

/// Horner evaluation.
pub fn horner(coeffs: &[f64], y: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * y + c)
}

impl HermiteSegment {
    pub fn mid(&self) -> f64 {
        0.5 * (self.xi + self.eta)
    }

    /// Monomial coefficients of `H^(m)` in `x - mid`.
    pub fn derivative_coeffs(&self, m: usize) -> Vec<f64> {
        differentiate(&self.coeffs, m)
    }
}

/// `H^(m)(x)`; zero for `m > 2r + 1`.
pub fn eval_segment(seg: &HermiteSegment, x: f64, m: usize) -> f64 {
    horner(&seg.derivative_coeffs(m), x - seg.mid())
}

/// Interpolants on every interval `[x_i, x_{i+1}]` of a sample set.
pub fn build_segments(samples: &DerivativeSamples) -> Result<Vec<HermiteSegment>> {
    let x = samples.points().points();
    if x.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 sample points, got {}",
            x.len()
        )));
    }
    let r = samples.order() - 1;
    (0..x.len() - 1)
        .map(|i| build_segment(x[i], x[i + 1], samples.row(i), samples.row(i + 1), r))
        .collect()
}

/// Index of the half-open interval `[x_i, x_{i+1})` containing `x` (the last
/// interval is closed), or `None` outside `[x_0, x_N]`.
pub fn locate(points: &[f64], x: f64) -> Option<usize> {
    let n = points.len();
    if n < 2 || x < points[0] || x > points[n - 1] {
        return None;
    }
    if x == points[n - 1] {
        return Some(n - 2);
    }
    Some(points.partition_point(|&p| p <= x) - 1)
}

/// `Σ_i H^(m)(x_i, x_{i+1}, f; ·) χ_[x_i, x_{i+1})` rendered on `grid`; zero
/// outside the hull of the sample points.
pub fn piecewise_hermite_derivative(
    samples: &DerivativeSamples,
    m: usize,
    grid: &Grid,
) -> Result<GridFunction> {
    let segments = build_segments(samples)?;
    let derivs: Vec<Vec<f64>> = segments.iter().map(|s| s.derivative_coeffs(m)).collect();
    let points = samples.points().points();
    Ok(GridFunction::from_fn(*grid, |x| match locate(points, x) {
        Some(i) => horner(&derivs[i], x - segments[i].mid()),
        None => 0.0,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_factor_examples() {
        assert_eq!(g_factor_derivative(0, 0, 0.0, 1.0).unwrap(), -1.0);
        assert_eq!(g_factor_derivative(0, 1, 0.0, 1.0).unwrap(), -1.0);
        assert_eq!(g_factor_derivative(2, 2, 0.0, 1.0).unwrap(), -12.0);
        assert!(matches!(
            g_factor_derivative(1, 0, 2.0, 2.0),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn segment_examples() {
        let line = build_segment(0.0, 1.0, &[0.0], &[1.0], 0).unwrap();
        assert!((eval_segment(&line, 0.5, 0) - 0.5).abs() < 1e-15);
        assert!((eval_segment(&line, 0.2, 1) - 1.0).abs() < 1e-15);

        let cubic = build_segment(0.0, 1.0, &[0.0, 0.0], &[1.0, 3.0], 1).unwrap();
        assert!((eval_segment(&cubic, 0.5, 0) - 0.125).abs() < 1e-15);
        assert!((eval_segment(&cubic, 0.5, 2) - 3.0).abs() < 1e-13);

        let quintic = build_segment(0.0, 1.0, &[0.0, 0.0, 0.0], &[1.0, 5.0, 20.0], 2).unwrap();
        assert!((eval_segment(&quintic, 0.3, 0) - 0.00243).abs() < 1e-14);
        assert!((eval_segment(&quintic, 0.3, 2) - 0.54).abs() < 1e-12);
        assert_eq!(eval_segment(&quintic, 0.3, 6), 0.0);
    }

    #[test]
    fn rejects_bad_segments() {
        assert!(matches!(
            build_segment(1.0, 1.0, &[0.0], &[0.0], 0),
            Err(Error::Ordering { .. })
        ));
        assert!(build_segment(0.0, 1e-12, &[0.0], &[0.0], 0).is_err());
        assert!(build_segment(0.0, 1.0, &[0.0], &[0.0, 1.0], 1).is_err());
    }

    #[test]
    fn locate_uses_half_open_intervals() {
        let p = [0.0, 1.0, 2.5];
        assert_eq!(locate(&p, 0.0), Some(0));
        assert_eq!(locate(&p, 1.0), Some(1));
        assert_eq!(locate(&p, 2.5), Some(1));
        assert_eq!(locate(&p, 2.6), None);
        assert_eq!(locate(&p, -0.1), None);
    }
}
