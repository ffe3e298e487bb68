#![allow(dead_code)]

use derivsamp_core::constants::factorial;
use derivsamp_core::signal::{BandlimitedSignal, LocalizedSignalSpec};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Localized test signal in `B_σ` centred at the origin.
pub fn localized(sigma: f64, seed: u64) -> (BandlimitedSignal, (f64, f64)) {
    let spec = LocalizedSignalSpec::new(sigma, 0.0);
    (spec.generate(&mut rng(seed)).unwrap(), spec.window())
}

/// Localized test signal in `B_{σ,ε}`.
pub fn localized_bandpass(sigma: f64, epsilon: f64, seed: u64) -> (BandlimitedSignal, (f64, f64)) {
    let spec = LocalizedSignalSpec::bandpass(sigma, epsilon, 0.0);
    (spec.generate(&mut rng(seed)).unwrap(), spec.window())
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300)
}

/// Interpolant by solving the confluent Vandermonde system in `x - mid`.
pub fn brute_force(xi: f64, eta: f64, left: &[f64], right: &[f64]) -> Vec<f64> {
    let r = left.len() - 1;
    let n = 2 * r + 2;
    let half = 0.5 * (eta - xi);
    let mut m = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);
    for (side, (y, data)) in [(-half, left), (half, right)].into_iter().enumerate() {
        for (j, &d) in data.iter().enumerate() {
            let row = side * (r + 1) + j;
            for p in j..n {
                m[(row, p)] = factorial(p) / factorial(p - j) * y.powi((p - j) as i32);
            }
            rhs[row] = d;
        }
    }
    m.lu().solve(&rhs).unwrap().iter().copied().collect()
}

pub fn poly_derivs(c: &[f64], x: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|j| {
            c.iter()
                .enumerate()
                .skip(j)
                .map(|(p, v)| v * factorial(p) / factorial(p - j) * x.powi((p - j) as i32))
                .sum()
        })
        .collect()
}
