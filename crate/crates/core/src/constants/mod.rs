//! Named constants of derivative sampling: Cimmino constants `ν_r`, Schmidt
//! constants `μ_n`, the combinatorial constant `C(k)`, interval weights
//! `c_{i,l}` and the stable-sampling bounds `A`, `B`.

mod cimmino;

pub use cimmino::{
    boundary_determinant, boundary_matrix, boundary_values, cimmino_nu, eigenfunction_coefficients,
    eigenfunction_derivative, nu, CimminoResult, CACHED_ORDERS, SCAN_START, SCAN_STEP,
};

use alloc::format;

use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// `n!` as a float; exact for `n <= 22`.
pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Schmidt constant `μ_n = n(n+1)(n+2)(n+3)/2`.
pub fn schmidt_mu(n: u64) -> u64 {
    n * (n + 1) * (n + 2) * (n + 3) / 2
}

/// `C(k) = [Σ_{s=0}^{k-1} binom(k+s-1, s)]²`.
pub fn c_of_k(k: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidParameter("C(k) needs k >= 1".into()));
    }
    let s: u64 = (0..k).map(|s| binomial(k + s - 1, s)).sum();
    Ok(s * s)
}

/// `c_{i,l} = (x_{i+1} - x_i)^(2l+1) / ((2l+1) (l!)²)`.
pub fn weight_c(x_i: f64, x_next: f64, l: usize) -> Result<f64> {
    if !(x_next > x_i) {
        return Err(Error::Ordering {
            left: x_i,
            right: x_next,
        });
    }
    let gap = x_next - x_i;
    let lf = factorial(l);
    Ok(gap.powi(2 * l as i32 + 1) / ((2 * l + 1) as f64 * lf * lf))
}

/// Lower and upper stable-sampling bounds for the weighted derivative samples.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameBounds {
    pub a: f64,
    pub b: f64,
    pub k: usize,
    pub delta: f64,
    pub sigma: f64,
    pub gamma: f64,
    /// Set when `δσ >= ν_k`; `a` is then reported as 0.
    pub degenerate: bool,
}

/// `A = (1 - δσ/ν_k)² γ^(2(k-1)) / (2k C(k) μ_{2k-1}^(k-1))` and
/// `B = 2 (Σ_{l<k} (δσ)^(2l) / l!²) e^(δ² + σ²)`.
pub fn frame_bounds(k: usize, delta: f64, sigma: f64, gamma: f64) -> Result<FrameBounds> {
    if k == 0 || !(gamma > 0.0) || !(delta >= gamma) || !(sigma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "frame bounds need k >= 1, sigma > 0 and delta >= gamma > 0 (k={k}, delta={delta}, sigma={sigma}, gamma={gamma})"
        )));
    }
    let factor = contraction_factor(k, delta, sigma)?;
    let ds = delta * sigma;
    let sum: f64 = (0..k)
        .map(|l| {
            let lf = factorial(l);
            ds.powi(2 * l as i32) / (lf * lf)
        })
        .sum();
    let b = 2.0 * sum * (delta * delta + sigma * sigma).exp();
    let degenerate = factor >= 1.0;
    let a = if degenerate {
        0.0
    } else {
        let ck = c_of_k(k as u64)? as f64;
        let mu = schmidt_mu(2 * k as u64 - 1) as f64;
        (1.0 - factor).powi(2) / (2.0 * k as f64 * ck) * gamma.powi(2 * (k as i32 - 1))
            / mu.powi(k as i32 - 1)
    };
    Ok(FrameBounds {
        a,
        b,
        k,
        delta,
        sigma,
        gamma,
        degenerate,
    })
}

/// Contraction factor `δσ/ν_k` of the Hermite approximation operator.
pub fn contraction_factor(k: usize, delta: f64, sigma: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    Ok(delta * sigma / nu(k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn schmidt_examples() {
        assert_eq!(schmidt_mu(1), 12);
        assert_eq!(schmidt_mu(3), 180);
        assert_eq!(schmidt_mu(5), 840);
        assert_eq!(schmidt_mu(0), 0);
    }

    #[test]
    fn c_of_k_examples() {
        assert_eq!(c_of_k(1).unwrap(), 1);
        assert_eq!(c_of_k(2).unwrap(), 9);
        assert_eq!(c_of_k(3).unwrap(), 100);
        assert!(c_of_k(0).is_err());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight_c(0.0, 1.0, 0).unwrap(), 1.0);
        assert!((weight_c(0.0, 1.0, 1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((weight_c(1.0, 3.0, 1).unwrap() - 8.0 / 3.0).abs() < 1e-15);
        assert!(matches!(weight_c(1.0, 1.0, 0), Err(Error::Ordering { .. })));
    }

    #[test]
    fn frame_bound_examples() {
        let fb = frame_bounds(1, 0.5, PI, 0.3).unwrap();
        let f = 0.5 * PI / PI;
        assert!((fb.a - (1.0 - f).powi(2) / 2.0).abs() < 1e-15);
        assert!((fb.b - 2.0 * (0.25 + PI * PI).exp()).abs() < 1e-9 * fb.b);

        let fb = frame_bounds(2, 1.0, PI, 0.5).unwrap();
        assert!((fb.a - 0.25 / 36.0 * 0.25 / 180.0).abs() < 1e-18);
        assert!((fb.a - 9.645e-6).abs() < 1e-9);

        let fb = frame_bounds(1, 1.0, PI, 0.5).unwrap();
        assert!(fb.degenerate);
        assert_eq!(fb.a, 0.0);

        assert!(frame_bounds(1, 0.2, PI, 0.5).is_err());
    }

    #[test]
    fn contraction_examples() {
        assert!((contraction_factor(1, 0.5, PI).unwrap() - 0.5).abs() < 1e-12);
        assert!((contraction_factor(2, 1.0, PI).unwrap() - 0.5).abs() < 1e-12);
        assert!((contraction_factor(3, 1.0, 2.0).unwrap() - 2.0 / 8.9868).abs() < 2e-5);
    }

    #[test]
    fn cached_values_are_increasing() {
        let values: alloc::vec::Vec<f64> = (1..=4).map(|r| nu(r).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]));
    }
}
