//! Cimmino constants `ν_r`.
//!
//! `ν_r = λ_{r,r-1}`, where `λ_{r,r-1}²` is the first eigenvalue `λ` of
//!
//! ```text
//! u^(2r) + λ u^(2r-2) = 0 on [0, 1],   u^(j)(0) = u^(j)(1) = 0,  j < r.
//! ```
//!
//! (The general problem is `u^(2r) - λ(-1)^(r+k) u^(2k) = 0` with exponent
//! `2r - 2k`; at `k = r - 1` the sign is `-1` and the exponent is 2.) With
//! `μ = sqrt(λ)` the solution space is spanned by
//! `1, x, ..., x^(2r-3), cos μx, sin μx`, so eigenvalues are the zeros in
//! `μ` of the determinant of the `2r × 2r` boundary matrix, and `ν_r = μ`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use once_cell::race::OnceBox;

use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Start of the root scan; the determinant vanishes identically at 0.
pub const SCAN_START: f64 = 1e-3;
/// Step of the root scan.
pub const SCAN_STEP: f64 = 0.01;
/// Orders held in the process-wide cache.
pub const CACHED_ORDERS: usize = 8;
/// Bisection tolerance used for cached values.
const CACHE_TOLERANCE: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CimminoResult {
    pub r: usize,
    pub nu: f64,
    pub mu_root: f64,
    /// `|det|` of the column-normalized boundary matrix at the root.
    pub determinant_residual: f64,
    /// Largest `|det|` seen on the scan interval bracketing the root.
    pub determinant_scale: f64,
}

/// `E_n(z) = e^z - Σ_{m<=n} z^m/m!` (so `E_{-1} = e^z`).
fn exp_remainder(n: i64, z: Complex64) -> Complex64 {
    if n < 0 {
        return z.exp();
    }
    if z.norm() < n as f64 + 2.0 {
        let mut term = Complex64::new(1.0, 0.0);
        for m in 1..=n + 1 {
            term = term * z / m as f64;
        }
        let mut sum = term;
        let mut m = n + 1;
        loop {
            m += 1;
            term = term * z / m as f64;
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() || m > n + 200 {
                break;
            }
        }
        sum
    } else {
        let mut partial = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for m in 0..=n {
            if m > 0 {
                term = term * z / m as f64;
            }
            partial += term;
        }
        z.exp() - partial
    }
}

/// `j`-th derivative of the `col`-th basis function at `x`.
///
/// Columns `0..2r-2` are the monomials. The last two are `cos μx` and
/// `sin μx` with their Taylor polynomials through degree `2r-3` removed (these
/// lie in the monomial span, so the determinant is unchanged) and divided by
/// `μ^(2r-2)`; both stay of order one as `μ → 0`, which keeps the
/// determinant free of cancellation near the origin.
fn basis_derivative(r: usize, mu: f64, col: usize, j: usize, x: f64) -> f64 {
    let poly_count = 2 * r - 2;
    if col < poly_count {
        let p = col;
        if j > p {
            return 0.0;
        }
        let falling: f64 = ((p - j + 1)..=p).map(|v| v as f64).product();
        falling * x.powi((p - j) as i32)
    } else {
        let degree = 2 * r as i64 - 3;
        let i_pow = match j % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let value = i_pow
            * exp_remainder(degree - j as i64, Complex64::new(0.0, mu * x))
            * mu.powi(j as i32 - (degree + 1) as i32);
        if col == poly_count {
            value.re
        } else {
            value.im
        }
    }
}

/// `max_{j<r} sup_{[0,1]} |φ_col^(j)|`; continuous and positive in `μ`, so
/// dividing by it moves no roots.
fn column_scale(r: usize, col: usize) -> f64 {
    let poly_count = 2 * r - 2;
    if col < poly_count {
        (0..r.min(col + 1))
            .map(|j| ((col - j + 1)..=col).map(|v| v as f64).product::<f64>())
            .fold(1.0, f64::max)
    } else {
        1.0
    }
}

fn raw_boundary_matrix(r: usize, mu: f64) -> DMatrix<f64> {
    let n = 2 * r;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for col in 0..n {
        for j in 0..r {
            m[(j, col)] = basis_derivative(r, mu, col, j, 0.0);
            m[(r + j, col)] = basis_derivative(r, mu, col, j, 1.0);
        }
    }
    m
}

/// Boundary-condition matrix with every basis function scaled to unit
/// sup-norm (over `[0, 1]` and derivative orders `< r`).
pub fn boundary_matrix(r: usize, mu: f64) -> DMatrix<f64> {
    let mut m = raw_boundary_matrix(r, mu);
    for col in 0..2 * r {
        let scale = column_scale(r, col);
        m.column_mut(col).scale_mut(1.0 / scale);
    }
    m
}

/// Determinant by Gaussian elimination with partial pivoting.
fn determinant(mut m: DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut det = 1.0;
    for c in 0..n {
        let (p, pivot) = (c..n)
            .map(|i| (i, m[(i, c)]))
            .fold((c, 0.0f64), |best, (i, v)| {
                if v.abs() > best.1.abs() {
                    (i, v)
                } else {
                    best
                }
            });
        if pivot == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap_rows(p, c);
            det = -det;
        }
        det *= pivot;
        for i in c + 1..n {
            let factor = m[(i, c)] / pivot;
            if factor != 0.0 {
                for j in c..n {
                    let v = m[(c, j)];
                    m[(i, j)] -= factor * v;
                }
            }
        }
    }
    det
}

/// Normalized boundary determinant as a function of `μ`.
pub fn boundary_determinant(r: usize, mu: f64) -> f64 {
    determinant(boundary_matrix(r, mu))
}

/// Smallest positive `μ` where the boundary determinant changes sign.
pub fn cimmino_nu(r: usize, tol: f64) -> Result<CimminoResult> {
    if r == 0 {
        return Err(Error::InvalidParameter("Cimmino order must be >= 1".into()));
    }
    let hi = 4.0 * PI * r as f64;
    let mut lo_mu = SCAN_START;
    let mut lo_det = boundary_determinant(r, lo_mu);
    while lo_mu < hi {
        let next_mu = (lo_mu + SCAN_STEP).min(hi);
        let next_det = boundary_determinant(r, next_mu);
        if lo_det == 0.0 || lo_det.signum() != next_det.signum() {
            let scale = lo_det.abs().max(next_det.abs());
            let root = bisect(r, lo_mu, next_mu, lo_det, tol);
            let residual = boundary_determinant(r, root).abs();
            return Ok(CimminoResult {
                r,
                nu: root,
                mu_root: root,
                determinant_residual: residual,
                determinant_scale: scale,
            });
        }
        lo_mu = next_mu;
        lo_det = next_det;
    }
    Err(Error::RootBracketing { lo: SCAN_START, hi })
}

fn bisect(r: usize, mut a: f64, mut b: f64, mut fa: f64, tol: f64) -> f64 {
    if fa == 0.0 {
        return a;
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = boundary_determinant(r, m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Coefficients (in the basis order above) of a unit null vector of the
/// boundary matrix at `mu`.
pub fn eigenfunction_coefficients(r: usize, mu: f64) -> Vec<f64> {
    let m = boundary_matrix(r, mu);
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let (idx, _) =
        svd.singular_values
            .iter()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |best, (i, &s)| if s < best.1 { (i, s) } else { best },
            );
    // undo the column scaling so coefficients refer to the raw basis
    (0..2 * r)
        .map(|col| v_t[(idx, col)] / column_scale(r, col))
        .collect()
}

/// `j`-th derivative at `x` of the function with the given basis coefficients.
pub fn eigenfunction_derivative(r: usize, mu: f64, coeffs: &[f64], j: usize, x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(col, c)| c * basis_derivative(r, mu, col, j, x))
        .sum()
}

static CACHE: OnceBox<Vec<CimminoResult>> = OnceBox::new();

fn cached_table() -> &'static [CimminoResult] {
    CACHE.get_or_init(|| {
        let table: Vec<CimminoResult> = (1..=CACHED_ORDERS)
            .map(|r| cimmino_nu(r, CACHE_TOLERANCE).expect("cached Cimmino orders bracket"))
            .collect();
        alloc::boxed::Box::new(table)
    })
}

/// `ν_r`, memoized for `r <= CACHED_ORDERS`.
pub fn nu(r: usize) -> Result<f64> {
    if (1..=CACHED_ORDERS).contains(&r) {
        Ok(cached_table()[r - 1].nu)
    } else {
        cimmino_nu(r, CACHE_TOLERANCE).map(|c| c.nu)
    }
}

/// Matrix of boundary conditions of an arbitrary candidate; used by the
/// eigenfunction check.
pub fn boundary_values(r: usize, mu: f64, coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; 2 * r];
    for j in 0..r {
        out[j] = eigenfunction_derivative(r, mu, coeffs, j, 0.0);
        out[r + j] = eigenfunction_derivative(r, mu, coeffs, j, 1.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_constants() {
        let nu1 = cimmino_nu(1, 1e-13).unwrap();
        assert!((nu1.nu - PI).abs() < 1e-9);
        let nu2 = cimmino_nu(2, 1e-13).unwrap();
        assert!((nu2.nu - 2.0 * PI).abs() < 1e-8);
        let nu3 = cimmino_nu(3, 1e-13).unwrap();
        assert!((nu3.nu - 8.9868).abs() < 5e-4, "{}", nu3.nu);
    }

    #[test]
    fn clamped_case_matches_closed_form_determinant() {
        // r = 2: the raw determinant is 2 - 2cos μ - μ sin μ (up to a factor)
        let g = |mu: f64| 2.0 - 2.0 * mu.cos() - mu * mu.sin();
        let root = cimmino_nu(2, 1e-13).unwrap().nu;
        assert!(g(root).abs() < 1e-10);
        for &mu in &[1.0, 3.0, 5.5, 6.0] {
            assert_eq!(
                g(mu).signum(),
                boundary_determinant(2, mu).signum()
                    * g(1.0).signum()
                    * boundary_determinant(2, 1.0).signum()
            );
        }
    }

    #[test]
    fn residual_is_small_relative_to_scale() {
        for r in 1..=4 {
            let c = cimmino_nu(r, 1e-14).unwrap();
            assert!(
                c.determinant_residual < 1e-10 * c.determinant_scale,
                "r={r}: {c:?}"
            );
        }
    }

    #[test]
    fn zero_order_rejected() {
        assert!(cimmino_nu(0, 1e-12).is_err());
    }
}
