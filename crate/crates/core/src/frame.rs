//! Weighted kernel-derivative frame on the band-pass space `B_{σ,ε}`.
//!
//! On `B_{σ,ε}` (frequencies `2πε <= |ω| <= σ`) the family
//! `{√w_{i,l} K_{x_i}^(l)}` with `w_{i,l} = c_{i,l} + c_{i-1,l}` is a frame
//! whenever `δσ < ν_k`, with bounds `A_ε` and `B`. The frame operator is
//!
//! ```text
//! S_k f = Σ_i Σ_{l<k} (-1)^l f^(l)(x_i) w_{i,l} K_{x_i}^(l)
//! ```
//!
//! and `f_{n+1} = f_n + ρ S_k(f - f_n)` with `ρ = 2/(A_ε + B)` converges at
//! rate `(B - A_ε)/(B + A_ε)`.
//!
//! The reproducing kernel is taken on a periodic window
//! `[x_0, x_N + min(x_1 - x_0, x_N - x_{N-1})]`, so the wrap-around gap never
//! exceeds the largest interior gap. There
//! `K_y(x) = (1/T) Σ_{m in band} e^{iω_m (x-y)}` and `S_k` has the exact
//! coefficients `C_m = (1/T) Σ w_{i,l} (-1)^l d_{i,l} (iω_m)^l e^{-iω_m(x_i-a)}`.
//!
//! The weights `c_{-1,l}` of the first point use a phantom gap equal to the
//! first real gap, and `c_{N,l}` of the last point one equal to the last gap.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::analysis::SamplingSet;
use crate::constants::{factorial, frame_bounds, FrameBounds};
use crate::operators::{
    DerivativeSamples, DivergenceGuard, GroundTruth, IterationStep, IterationTrace,
};
use crate::signal::{Grid, GridFunction};
use crate::spectral::BandSpectrum;
use crate::{Error, RealFunction, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Eigenvalues below this fraction of the largest count as zero.
const RANK_TOLERANCE: f64 = 1e-12;

/// `B_{σ,ε}`: band-limited to `|ω| <= σ` with no content below `|ω| = 2πε`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BandpassSubspace {
    sigma: f64,
    epsilon: f64,
}

impl BandpassSubspace {
    pub fn new(sigma: f64, epsilon: f64) -> Result<Self> {
        if !(sigma > 0.0) || !(epsilon > 0.0) || !(2.0 * PI * epsilon < sigma) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < epsilon < sigma/2pi, got sigma = {sigma}, epsilon = {epsilon}"
            )));
        }
        Ok(Self { sigma, epsilon })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Projects a grid function (one period of the window) onto `B_{σ,ε}`.
pub fn bandpass_project(g: &GridFunction, sub: &BandpassSubspace) -> Result<GridFunction> {
    Ok(BandSpectrum::from_grid(g, sub.sigma, sub.epsilon)?.render(g.grid(), 0))
}

/// `A_ε = A (2πε)^(2(k-1))`.
pub fn lower_bound_epsilon(a: f64, epsilon: f64, k: usize) -> f64 {
    a * (2.0 * PI * epsilon).powi(2 * (k as i32 - 1))
}

/// Periodic window of the frame: one wrap gap past the last point.
pub fn frame_window(set: &SamplingSet) -> (f64, f64) {
    let wrap = set.first_gap().min(set.last_gap());
    (set.first(), set.last() + wrap)
}

/// `w_{i,l} = c_{i,l} + c_{i-1,l}`, row-major by point.
pub fn frame_weights(set: &SamplingSet, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    let x = set.points();
    let n = x.len();
    let gap = |i: usize| -> f64 {
        // gap to the right of point i, with phantom gaps at both ends
        if i + 1 < n {
            x[i + 1] - x[i]
        } else {
            set.last_gap()
        }
    };
    let mut out = Vec::with_capacity(n * k);
    for i in 0..n {
        let right = gap(i);
        let left = if i == 0 { set.first_gap() } else { gap(i - 1) };
        for l in 0..k {
            let lf = factorial(l);
            let scale = (2 * l + 1) as f64 * lf * lf;
            let p = 2 * l as i32 + 1;
            out.push((right.powi(p) + left.powi(p)) / scale);
        }
    }
    Ok(out)
}

/// How the relaxation parameter is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum RhoChoice {
    /// `2/(A_ε + B)` from the analytic bounds.
    #[default]
    Analytic,
    /// `2/(λ_min + λ_max)` from [`empirical_frame_bounds`].
    Empirical,
    Fixed(f64),
}

/// Sampling set, weights, bounds and relaxation for the frame algorithm.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameSystem {
    pub points: SamplingSet,
    pub k: usize,
    pub subspace: BandpassSubspace,
    pub window: (f64, f64),
    pub weights: Vec<f64>,
    pub bounds: FrameBounds,
    pub a_eps: f64,
    pub b: f64,
    pub rho: f64,
    /// Predicted contraction factor for the chosen `ρ`.
    pub factor: f64,
    pub empirical: Option<EmpiricalBounds>,
}

impl FrameSystem {
    pub fn new(
        points: SamplingSet,
        k: usize,
        subspace: BandpassSubspace,
        rho: RhoChoice,
    ) -> Result<Self> {
        let weights = frame_weights(&points, k)?;
        let bounds = frame_bounds(k, points.delta(), subspace.sigma, points.gamma())?;
        let a_eps = lower_bound_epsilon(bounds.a, subspace.epsilon, k);
        let b = bounds.b;
        let window = frame_window(&points);
        let (rho, factor, empirical) = match rho {
            RhoChoice::Analytic => (2.0 / (a_eps + b), (b - a_eps) / (b + a_eps), None),
            RhoChoice::Empirical => {
                let emp = empirical_frame_bounds(
                    &points,
                    k,
                    subspace.sigma,
                    subspace.epsilon,
                    usize::MAX,
                )?;
                let (lo, hi) = (emp.lambda_min, emp.lambda_max);
                if !(hi > 0.0) {
                    return Err(Error::DegenerateBounds);
                }
                (2.0 / (lo + hi), (hi - lo) / (hi + lo), Some(emp))
            }
            RhoChoice::Fixed(r) => {
                if !(r > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "rho must be positive, got {r}"
                    )));
                }
                let f = (1.0 - r * a_eps).abs().max((1.0 - r * b).abs());
                (r, f, None)
            }
        };
        Ok(Self {
            points,
            k,
            subspace,
            window,
            weights,
            bounds,
            a_eps,
            b,
            rho,
            factor,
            empirical,
        })
    }

    /// Replaces the weights, e.g. with unit weights for diagnostics.
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.weights.len() {
            return Err(Error::Data(format!(
                "expected {} weights, got {}",
                self.weights.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Data("weights must be positive".into()));
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn empty_model(&self) -> Result<BandSpectrum> {
        BandSpectrum::zeros(
            self.window.0,
            self.window.1,
            self.subspace.sigma,
            self.subspace.epsilon,
        )
    }

    /// Output grid on the window with step `π/(8σ)` or finer.
    pub fn grid(&self) -> Result<Grid> {
        Grid::with_max_step(
            self.window.0,
            self.window.1,
            PI / (8.0 * self.subspace.sigma),
        )
    }

    pub fn diagnostics(&self) -> Result<FrameDiagnostics> {
        let emp = match &self.empirical {
            Some(e) => *e,
            None => empirical_frame_bounds(
                &self.points,
                self.k,
                self.subspace.sigma,
                self.subspace.epsilon,
                usize::MAX,
            )?,
        };
        Ok(FrameDiagnostics {
            a_eps: self.a_eps,
            b: self.b,
            lambda_min: emp.lambda_min,
            lambda_max: emp.lambda_max,
            rho: self.rho,
        })
    }

    fn check(&self, samples: &DerivativeSamples) -> Result<()> {
        if samples.order() != self.k || samples.points() != &self.points {
            return Err(Error::Data(format!(
                "samples ({} points, {} levels) do not match the frame ({} points, k = {})",
                samples.len(),
                samples.order(),
                self.points.len(),
                self.k
            )));
        }
        Ok(())
    }
}

/// `S_k` applied to sample data, as a band model.
pub fn frame_operator(samples: &DerivativeSamples, sys: &FrameSystem) -> Result<BandSpectrum> {
    sys.check(samples)?;
    let mut out = sys.empty_model()?;
    let a = out.a();
    let t = out.period();
    let m_lo = out.m_lo();
    let omegas: Vec<f64> = (0..out.coeffs().len())
        .map(|idx| out.omega(m_lo + idx))
        .collect();
    let keep_dc = out.keeps_dc();
    let mut dc = 0.0;
    let k = sys.k;
    let coeffs = out.coeffs_mut();
    for (i, &x) in sys.points.points().iter().enumerate() {
        let theta = 2.0 * PI * (x - a) / t;
        let step = Complex64::from_polar(1.0, -theta);
        let mut z = Complex64::from_polar(1.0, -theta * m_lo as f64);
        let wd: Vec<f64> = (0..k)
            .map(|l| {
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                sign * sys.weights[i * k + l] * samples.value(i, l)
            })
            .collect();
        for (c, &omega) in coeffs.iter_mut().zip(&omegas) {
            let i_omega = Complex64::new(0.0, omega);
            let mut power = Complex64::new(1.0, 0.0);
            let mut acc = Complex64::new(0.0, 0.0);
            for v in &wd {
                acc += power * *v;
                power *= i_omega;
            }
            *c += acc * z / t;
            z *= step;
        }
        dc += wd[0] / t;
    }
    if keep_dc {
        out.poly_mut()[0] = dc;
    }
    Ok(out)
}

/// `S_k` applied to sample data, rendered on `grid`.
pub fn frame_operator_apply(
    samples: &DerivativeSamples,
    sys: &FrameSystem,
    grid: &Grid,
) -> Result<GridFunction> {
    Ok(frame_operator(samples, sys)?.render(grid, 0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct FrameConfig {
    pub max_iterations: usize,
    /// Stop once `‖f_{n+1} - f_n‖ / ‖f_{n+1}‖` falls below this.
    pub tolerance: f64,
}

impl Default for FrameConfig {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            tolerance: 1e-10,
        }
    }
}

/// Runs `f_{n+1} = f_n + ρ S_k(f - f_n)` from `f_0 = 0`.
///
/// The samples of `f - f_n` are the given data minus the exact derivatives
/// of the model `f_n`. Step `n` of the trace records `‖f_{n+1} - f_n‖`, the
/// error of `f_n` when `ground_truth` is known, and the bound
/// `q^n ‖f‖` with `q` the system's contraction factor.
pub fn frame_iterate(
    samples: &DerivativeSamples,
    sys: &FrameSystem,
    cfg: &FrameConfig,
    ground_truth: Option<&dyn RealFunction>,
) -> Result<(BandSpectrum, IterationTrace)> {
    sys.check(samples)?;
    let lower = match &sys.empirical {
        Some(e) => e.lambda_min,
        None => sys.a_eps,
    };
    if !(lower > 0.0) {
        return Err(Error::DegenerateBounds);
    }
    let truth = ground_truth
        .map(|f| GroundTruth::new(f, 0, sys.window, sys.subspace.sigma, sys.subspace.epsilon))
        .transpose()?;
    let mut estimate = sys.empty_model()?;
    let first = frame_operator(samples, sys)?.scaled(sys.rho);
    let first_norm = first.norm();
    let reference_norm = match &truth {
        Some(t) => t.norm(),
        None => first_norm / (sys.rho * lower),
    };
    let mut trace = IterationTrace {
        steps: Vec::new(),
        factor: sys.factor,
        guaranteed: sys.factor < 1.0,
        converged: false,
        reference_norm,
    };
    let mut guard = DivergenceGuard::new(1e-11 * first_norm);
    let points = sys.points.points();

    for n in 0..cfg.max_iterations.max(1) {
        let error = truth.as_ref().map(|t| t.error(&estimate)).transpose()?;
        let update = if n == 0 {
            first.clone()
        } else {
            let data: Vec<f64> = samples
                .data()
                .iter()
                .zip(estimate.sample_data(points, sys.k))
                .map(|(d, m)| d - m)
                .collect();
            frame_operator(&samples.with_data(data)?, sys)?.scaled(sys.rho)
        };
        let residual = update.norm();
        trace.steps.push(IterationStep {
            n,
            residual,
            error,
            bound: sys.factor.powi(n as i32) * reference_norm,
        });
        estimate.axpy(1.0, &update)?;
        if guard.diverged(residual) {
            return Err(Error::Divergence(alloc::boxed::Box::new(trace)));
        }
        let scale = estimate.norm();
        if residual <= cfg.tolerance * scale || scale == 0.0 {
            trace.converged = true;
            break;
        }
    }
    Ok((estimate, trace))
}

/// Extreme eigenvalues of the weighted sampling Gram matrix on a test
/// subspace of `B_{σ,ε}`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EmpiricalBounds {
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Real dimension of the test subspace.
    pub dimension: usize,
    pub rank_deficient: bool,
    /// Largest `|G_ij - G_ji|`.
    pub asymmetry: f64,
    /// Most negative eigenvalue, or zero.
    pub negative_part: f64,
}

/// Bins used by the test subspace: all of them, or an even-stride subset of
/// at most `test_dimension / 2`.
fn test_bins(model: &BandSpectrum, test_dimension: usize) -> Vec<usize> {
    let all: Vec<usize> = (model.m_lo()..=model.m_hi()).collect();
    let cap = (test_dimension / 2).max(1);
    if all.len() <= cap {
        return all;
    }
    let stride = all.len() as f64 / cap as f64;
    (0..cap)
        .map(|j| all[(j as f64 * stride) as usize])
        .collect()
}

/// Weighted sample matrix `M[(i,l), m] = √w_{i,l} φ_m^(l)(x_i)` for the
/// orthonormal basis `√(2/T) cos(ω_m y)`, `√(2/T) sin(ω_m y)`, `y = x - a`.
pub fn frame_sample_matrix(
    set: &SamplingSet,
    k: usize,
    sigma: f64,
    epsilon: f64,
    test_dimension: usize,
) -> Result<DMatrix<f64>> {
    let sub = BandpassSubspace::new(sigma, epsilon)?;
    let window = frame_window(set);
    let model = BandSpectrum::zeros(window.0, window.1, sub.sigma, sub.epsilon)?;
    let bins = test_bins(&model, test_dimension);
    if bins.is_empty() || model.m_hi() < model.m_lo() {
        return Err(Error::InvalidParameter(
            "window too short for the band-pass subspace".into(),
        ));
    }
    let weights = frame_weights(set, k)?;
    let t = model.period();
    let norm = (2.0 / t).sqrt();
    let x = set.points();
    let mut m = DMatrix::zeros(x.len() * k, 2 * bins.len());
    for (i, &xi) in x.iter().enumerate() {
        let y = xi - window.0;
        for l in 0..k {
            let row = i * k + l;
            let sw = weights[row].sqrt();
            for (j, &bin) in bins.iter().enumerate() {
                let omega = model.omega(bin);
                let amp = sw * norm * omega.powi(l as i32);
                let phase = omega * y + l as f64 * FRAC_PI_2;
                m[(row, 2 * j)] = amp * phase.cos();
                m[(row, 2 * j + 1)] = amp * phase.sin();
            }
        }
    }
    Ok(m)
}

/// Empirical frame bounds: extreme eigenvalues of `MᵀM`.
pub fn empirical_frame_bounds(
    set: &SamplingSet,
    k: usize,
    sigma: f64,
    epsilon: f64,
    test_dimension: usize,
) -> Result<EmpiricalBounds> {
    let m = frame_sample_matrix(set, k, sigma, epsilon, test_dimension)?;
    let gram = m.transpose() * &m;
    let dim = gram.nrows();
    let mut asymmetry = 0.0f64;
    for i in 0..dim {
        for j in 0..i {
            asymmetry = asymmetry.max((gram[(i, j)] - gram[(j, i)]).abs());
        }
    }
    let eig = SymmetricEigen::new(gram);
    let lambda_max = eig.eigenvalues.max();
    let smallest = eig.eigenvalues.min();
    let lambda_min = if m.nrows() < dim {
        0.0
    } else {
        smallest.max(0.0)
    };
    Ok(EmpiricalBounds {
        lambda_min,
        lambda_max,
        dimension: dim,
        rank_deficient: lambda_min <= RANK_TOLERANCE * lambda_max,
        asymmetry,
        negative_part: smallest.min(0.0),
    })
}

/// Bounds and relaxation of a frame run, for reports.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameDiagnostics {
    #[cfg_attr(feature = "serde", serde(rename = "A_eps"))]
    pub a_eps: f64,
    #[cfg_attr(feature = "serde", serde(rename = "B"))]
    pub b: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub rho: f64,
}
