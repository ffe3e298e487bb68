//! Hermite approximation operator and the contractive reconstruction
//! iteration.
//!
//! With samples `f^(j)(x_i)`, `j < k`, the approximation operator is
//!
//! ```text
//! A[f^(k-1)] = P( Σ_i H_{2k-1}^(k-1)(x_i, x_{i+1}, f; ·) χ_[x_i, x_{i+1}) )
//! ```
//!
//! where `P` is the orthogonal projection onto the band. The closure of
//! `D^(k-1)(B_σ)` is all of `B_σ` (multiplication by `(iω)^(k-1)` has dense
//! range in `L²[-σ, σ]`), so `P` is plain band-limiting. When the maximum gap
//! satisfies `δσ/ν_k < 1`, `I - A` is a contraction with that factor and
//!
//! ```text
//! f_0 = A f^(k-1),   f_{n+1} = f_n + A(f^(k-1) - f_n)
//! ```
//!
//! converges to `f^(k-1)` with error at most `(δσ/ν_k)^(n+1) ‖f^(k-1)‖`.
//!
//! Everything is computed on a periodic window (see [`crate::spectral`]).
//! The piecewise Hermite function is a polynomial on each interval, so its
//! Fourier coefficients are integrated exactly instead of being sampled.
//! Applying `A` to `f^(k-1) - f_n` needs derivative samples of an
//! antiderivative of `f_n`; these come from the band model itself, where
//! integration and differentiation are exact. Lower derivatives of the
//! antiderivative are only fixed up to a polynomial of degree `< k-1`, which
//! the Hermite interpolant reproduces and the `(k-1)`-th derivative removes.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::analysis::SamplingSet;
use crate::constants::contraction_factor;
use crate::hermite::{build_segments, piecewise_hermite_derivative};
use crate::signal::{cumulative_simpson, Grid, GridFunction};
use crate::spectral::{project_bandlimited, BandSpectrum, PolySegment};
use crate::{Error, RealFunction, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Relative residual below which increases are treated as rounding noise by
/// the divergence check.
const NOISE_FLOOR: f64 = 1e-11;

/// Consecutive residual increases that count as divergence.
const DIVERGENCE_RUN: usize = 3;

/// The data `f^(j)(x_i)`, `j = 0..k-1`, stored row-major by point.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DerivativeSamples {
    points: SamplingSet,
    order: usize,
    data: Vec<f64>,
}

impl DerivativeSamples {
    pub fn new(points: SamplingSet, order: usize, data: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Data("need at least one derivative level".into()));
        }
        if data.len() != points.len() * order {
            return Err(Error::Data(format!(
                "expected {} x {} values, got {}",
                points.len(),
                order,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("non-finite sample value".into()));
        }
        Ok(Self {
            points,
            order,
            data,
        })
    }

    /// Samples `f^(j)(x_i)` of an exact function.
    pub fn from_function(points: SamplingSet, order: usize, f: &dyn RealFunction) -> Result<Self> {
        let mut data = Vec::with_capacity(points.len() * order);
        for &x in points.points() {
            for j in 0..order {
                data.push(f.derivative(x, j)?);
            }
        }
        Self::new(points, order, data)
    }

    pub fn points(&self) -> &SamplingSet {
        &self.points
    }

    /// Number of derivative levels `k`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// `[f(x_i), f'(x_i), ..., f^(k-1)(x_i)]`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn value(&self, i: usize, level: usize) -> f64 {
        self.data[i * self.order + level]
    }

    /// Same points, data replaced by `self - other`.
    pub fn with_data(&self, data: Vec<f64>) -> Result<Self> {
        Self::new(self.points.clone(), self.order, data)
    }
}

/// Integration rule for recovering lower derivatives.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum AntiderivativeRule {
    /// Exact integration of the band model.
    #[default]
    Spectral,
    /// Cumulative Simpson quadrature on the output grid.
    Simpson,
}

/// Sample point(s) used to fix the integration constant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Anchor {
    /// The sample nearest the window centre.
    #[default]
    Nearest,
    /// The mean constant over all samples.
    Average,
}

/// How `P` is applied to the piecewise Hermite function.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Projection {
    /// Exact Fourier integrals of the polynomial pieces.
    #[default]
    Exact,
    /// Render on the grid, then project by the discrete transform.
    Grid,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ReconstructionConfig {
    pub sigma: f64,
    pub k: usize,
    /// Periodic window `[a, b]`; must contain every sample point.
    pub window: (f64, f64),
    /// Output grid step.
    pub grid_step: f64,
    pub max_iterations: usize,
    /// Stop once `‖f_{n+1} - f_n‖ / ‖f_{n+1}‖` falls below this.
    pub tolerance: f64,
    pub projection: Projection,
    pub antiderivative: AntiderivativeRule,
    pub anchor: Anchor,
    /// Project recovered lower derivatives back onto the band.
    pub reproject: bool,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        Self {
            sigma: PI,
            k: 1,
            window: (0.0, 1.0),
            grid_step: 1.0 / 8.0,
            max_iterations: 200,
            tolerance: 1e-10,
            projection: Projection::Exact,
            antiderivative: AntiderivativeRule::Spectral,
            anchor: Anchor::Nearest,
            reproject: true,
        }
    }
}

impl ReconstructionConfig {
    /// Defaults with grid step `π/(8σ)`.
    pub fn new(sigma: f64, k: usize, window: (f64, f64)) -> Self {
        Self {
            sigma,
            k,
            window,
            grid_step: PI / (8.0 * sigma),
            ..Self::default()
        }
    }

    /// Window equal to the hull of the sample points.
    pub fn for_samples(sigma: f64, samples: &DerivativeSamples) -> Self {
        let p = samples.points();
        Self::new(sigma, samples.order(), (p.first(), p.last()))
    }

    /// Output grid on the window with step at most `grid_step`.
    pub fn grid(&self) -> Result<Grid> {
        Grid::with_max_step(self.window.0, self.window.1, self.grid_step)
    }

    fn empty_model(&self) -> Result<BandSpectrum> {
        BandSpectrum::zeros(self.window.0, self.window.1, self.sigma, 0.0)
    }

    fn validate(&self, samples: &DerivativeSamples) -> Result<()> {
        if self.k != samples.order() {
            return Err(Error::Data(format!(
                "configuration expects k = {}, samples carry {} levels",
                self.k,
                samples.order()
            )));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        let p = samples.points();
        let slack = 1e-12 * (self.window.1 - self.window.0).abs();
        if p.first() < self.window.0 - slack || p.last() > self.window.1 + slack {
            return Err(Error::InvalidParameter(format!(
                "samples span [{}, {}], outside the window [{}, {}]",
                p.first(),
                p.last(),
                self.window.0,
                self.window.1
            )));
        }
        Ok(())
    }
}

/// Band projection of a grid function (see [`crate::spectral`]).
pub fn project(g: &GridFunction, sigma: f64) -> Result<GridFunction> {
    project_bandlimited(g, sigma)
}

/// `A[f^(k-1)]` as a band model.
pub fn approx_operator(
    samples: &DerivativeSamples,
    cfg: &ReconstructionConfig,
) -> Result<BandSpectrum> {
    cfg.validate(samples)?;
    match cfg.projection {
        Projection::Exact => {
            let mut out = cfg.empty_model()?;
            let omega_max = out.omega(out.m_hi().max(out.m_lo()));
            for seg in build_segments(samples)? {
                let d = seg.derivative_coeffs(cfg.k - 1);
                if d.iter().all(|&c| c == 0.0) {
                    continue;
                }
                let half = 0.5 * (seg.eta - seg.xi);
                out.add_segment(&PolySegment::new(seg.mid(), half, &d, omega_max));
            }
            Ok(out)
        }
        Projection::Grid => {
            let g = piecewise_hermite_derivative(samples, cfg.k - 1, &cfg.grid()?)?;
            BandSpectrum::from_grid(&g, cfg.sigma, 0.0)
        }
    }
}

/// `A[f^(k-1)]` rendered on the configuration grid.
pub fn approx_operator_grid(
    samples: &DerivativeSamples,
    cfg: &ReconstructionConfig,
) -> Result<GridFunction> {
    Ok(approx_operator(samples, cfg)?.render(&cfg.grid()?, 0))
}

/// One recorded iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IterationStep {
    pub n: usize,
    /// `‖f_{n+1} - f_n‖`.
    pub residual: f64,
    /// `‖f_true - f_n‖` when the ground truth is known.
    pub error: Option<f64>,
    /// Theoretical error bound for `f_n`.
    pub bound: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IterationTrace {
    pub steps: Vec<IterationStep>,
    /// Contraction factor the bounds are built from.
    pub factor: f64,
    /// Whether the factor is below one, i.e. convergence is guaranteed.
    pub guaranteed: bool,
    /// Whether the residual tolerance was reached.
    pub converged: bool,
    /// Norm the bounds are scaled by: the true norm when known, otherwise
    /// the a priori estimate `‖f_0‖ / (1 - factor)`.
    pub reference_norm: f64,
}

/// Tracks residual growth for the divergence check.
pub(crate) struct DivergenceGuard {
    previous: f64,
    run: usize,
    floor: f64,
}

impl DivergenceGuard {
    pub(crate) fn new(floor: f64) -> Self {
        Self {
            previous: f64::INFINITY,
            run: 0,
            floor,
        }
    }

    pub(crate) fn diverged(&mut self, residual: f64) -> bool {
        if residual > self.previous && residual > self.floor {
            self.run += 1;
        } else {
            self.run = 0;
        }
        self.previous = residual;
        self.run >= DIVERGENCE_RUN || !residual.is_finite()
    }
}

/// Exact function prepared for error measurement on a periodic window.
pub struct GroundTruth {
    model: BandSpectrum,
    out_of_band: f64,
    norm: f64,
}

impl GroundTruth {
    /// Band model of `f^(order)` on `window` and the part the band misses.
    pub fn new(
        f: &dyn RealFunction,
        order: usize,
        window: (f64, f64),
        sigma: f64,
        epsilon: f64,
    ) -> Result<Self> {
        let grid = Grid::with_max_step(window.0, window.1, PI / (8.0 * sigma))?;
        let values = grid
            .points()
            .map(|x| f.derivative(x, order))
            .collect::<Result<Vec<_>>>()?;
        let g = GridFunction::new(grid, values)?;
        let model = BandSpectrum::from_grid(&g, sigma, epsilon)?;
        let out_of_band = g.sub(&model.render(&grid, 0))?.norm();
        Ok(Self {
            model,
            out_of_band,
            norm: g.norm(),
        })
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn error(&self, estimate: &BandSpectrum) -> Result<f64> {
        let d = self.model.distance(estimate)?;
        Ok((d * d + self.out_of_band * self.out_of_band).sqrt())
    }
}

/// Sample data of the `(k-1)`-fold antiderivative of `estimate`.
fn model_data(estimate: &BandSpectrum, points: &[f64], k: usize) -> Vec<f64> {
    estimate.antiderivative(k - 1).sample_data(points, k)
}

/// Runs the reconstruction iteration for `f^(k-1)`.
///
/// When `ground_truth` is given, the error of every iterate is recorded.
pub fn iterate_reconstruct(
    samples: &DerivativeSamples,
    cfg: &ReconstructionConfig,
    ground_truth: Option<&dyn RealFunction>,
) -> Result<(BandSpectrum, IterationTrace)> {
    cfg.validate(samples)?;
    let k = cfg.k;
    let factor = contraction_factor(k, samples.points().delta(), cfg.sigma)?;
    let truth = ground_truth
        .map(|f| GroundTruth::new(f, k - 1, cfg.window, cfg.sigma, 0.0))
        .transpose()?;

    let mut estimate = approx_operator(samples, cfg)?;
    let first_norm = estimate.norm();
    let guaranteed = factor < 1.0;
    let reference_norm = match &truth {
        Some(t) => t.norm(),
        None if guaranteed => first_norm / (1.0 - factor),
        None => first_norm,
    };
    let mut trace = IterationTrace {
        steps: Vec::new(),
        factor,
        guaranteed,
        converged: false,
        reference_norm,
    };
    let mut guard = DivergenceGuard::new(NOISE_FLOOR * first_norm);
    let points = samples.points().points();

    for n in 0..cfg.max_iterations.max(1) {
        let error = truth.as_ref().map(|t| t.error(&estimate)).transpose()?;
        let residual_data: Vec<f64> = samples
            .data()
            .iter()
            .zip(model_data(&estimate, points, k))
            .map(|(d, m)| d - m)
            .collect();
        let update = approx_operator(&samples.with_data(residual_data)?, cfg)?;
        let residual = update.norm();
        trace.steps.push(IterationStep {
            n,
            residual,
            error,
            bound: factor.powi(n as i32 + 1) * reference_norm,
        });
        estimate.axpy(1.0, &update)?;
        if guard.diverged(residual) {
            return Err(Error::Divergence(Box::new(trace)));
        }
        let scale = estimate.norm();
        if residual <= cfg.tolerance * scale || scale == 0.0 {
            trace.converged = true;
            break;
        }
    }
    Ok((estimate, trace))
}

/// Index of the sample nearest the window centre.
fn nearest_anchor(samples: &DerivativeSamples, center: f64) -> usize {
    let p = samples.points().points();
    (0..p.len())
        .min_by(|&i, &j| (p[i] - center).abs().total_cmp(&(p[j] - center).abs()))
        .unwrap_or(0)
}

fn check_level(samples: &DerivativeSamples, level: usize) -> Result<()> {
    if level == 0 || level > samples.order() {
        return Err(Error::Data(format!(
            "cannot recover level {} from samples with {} levels",
            level as i64 - 1,
            samples.order()
        )));
    }
    Ok(())
}

/// `f^(level-1) = ∫_{x_i} f^(level) + f^(level-1)(x_i)` on the band model.
pub fn antiderivative_model(
    g: &BandSpectrum,
    samples: &DerivativeSamples,
    level: usize,
    anchor: Anchor,
    reproject: bool,
) -> Result<BandSpectrum> {
    check_level(samples, level)?;
    let mut out = g.antiderivative(1);
    let p = samples.points().points();
    let shift = |i: usize| samples.value(i, level - 1) - out.eval(p[i], 0);
    let constant = match anchor {
        Anchor::Nearest => shift(nearest_anchor(samples, g.center())),
        Anchor::Average => (0..p.len()).map(shift).sum::<f64>() / p.len() as f64,
    };
    out.poly_mut()[0] += constant;
    Ok(if reproject { out.project() } else { out })
}

/// Cubic Lagrange interpolation of grid values at `x`.
fn interpolate_cubic(values: &[f64], grid: &Grid, x: f64) -> f64 {
    let n = values.len();
    let pos = (x - grid.a()) / grid.step();
    let start = (pos.floor() as i64 - 1).clamp(0, n as i64 - 4) as usize;
    let mut total = 0.0;
    for (i, v) in values.iter().enumerate().skip(start).take(4) {
        let mut w = 1.0;
        for j in start..start + 4 {
            if j != i {
                w *= (pos - j as f64) / (i as f64 - j as f64);
            }
        }
        total += w * v;
    }
    total
}

/// Recovers `f^(level-1)` on the grid of `g` (which holds `f^(level)`).
pub fn antiderivative_recover(
    g: &GridFunction,
    samples: &DerivativeSamples,
    level: usize,
    cfg: &ReconstructionConfig,
) -> Result<GridFunction> {
    check_level(samples, level)?;
    let grid = *g.grid();
    match cfg.antiderivative {
        AntiderivativeRule::Spectral => {
            let model = BandSpectrum::from_grid(g, cfg.sigma, 0.0)?;
            Ok(
                antiderivative_model(&model, samples, level, cfg.anchor, cfg.reproject)?
                    .render(&grid, 0),
            )
        }
        AntiderivativeRule::Simpson => {
            if grid.len() < 4 {
                return Err(Error::InvalidGrid("need at least 4 grid points".into()));
            }
            let cum = cumulative_simpson(g.values(), grid.step());
            let p = samples.points().points();
            let shift =
                |i: usize| samples.value(i, level - 1) - interpolate_cubic(&cum, &grid, p[i]);
            let center = 0.5 * (grid.a() + grid.b());
            let constant = match cfg.anchor {
                Anchor::Nearest => shift(nearest_anchor(samples, center)),
                Anchor::Average => (0..p.len()).map(shift).sum::<f64>() / p.len() as f64,
            };
            let out = GridFunction::new(grid, cum.iter().map(|c| c + constant).collect())?;
            if cfg.reproject {
                project_bandlimited(&out, cfg.sigma)
            } else {
                Ok(out)
            }
        }
    }
}

/// Result of [`full_recover`].
#[derive(Clone, Debug)]
pub struct Reconstruction {
    /// Band model of `f`.
    pub model: BandSpectrum,
    /// Trace of the iteration for `f^(k-1)`.
    pub trace: IterationTrace,
}

impl Reconstruction {
    pub fn render(&self, grid: &Grid) -> GridFunction {
        self.model.render(grid, 0)
    }
}

/// Iterates for `f^(k-1)` and integrates down to `f`.
pub fn full_recover(
    samples: &DerivativeSamples,
    cfg: &ReconstructionConfig,
    ground_truth: Option<&dyn RealFunction>,
) -> Result<Reconstruction> {
    let (mut model, trace) = iterate_reconstruct(samples, cfg, ground_truth)?;
    for level in (1..cfg.k).rev() {
        model = match cfg.antiderivative {
            AntiderivativeRule::Spectral => {
                antiderivative_model(&model, samples, level, cfg.anchor, cfg.reproject)?
            }
            AntiderivativeRule::Simpson => {
                let grid = cfg.grid()?;
                let g = antiderivative_recover(&model.render(&grid, 0), samples, level, cfg)?;
                BandSpectrum::from_grid(&g, cfg.sigma, 0.0)?
            }
        };
    }
    Ok(Reconstruction { model, trace })
}
