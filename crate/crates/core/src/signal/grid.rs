use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Relative slack when checking that a window is an integer number of steps.
const STEP_TOLERANCE: f64 = 1e-9;

/// Uniform grid `a, a + h, ..., a + n h = b`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid {
    a: f64,
    h: f64,
    intervals: usize,
}

impl Grid {
    /// Grid on `[a, b]` with step `h`; `(b - a) / h` must be an integer.
    pub fn new(a: f64, b: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "step must be positive, got {h}"
            )));
        }
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidGrid(format!("empty window [{a}, {b}]")));
        }
        let ratio = (b - a) / h;
        let n = ratio.round();
        if (ratio - n).abs() > STEP_TOLERANCE * ratio.max(1.0) || n < 1.0 {
            return Err(Error::InvalidGrid(format!(
                "window length {} is not a multiple of step {h}",
                b - a
            )));
        }
        Ok(Self {
            a,
            h: (b - a) / n,
            intervals: n as usize,
        })
    }

    /// Finest grid on `[a, b]` whose step does not exceed `max_step`.
    pub fn with_max_step(a: f64, b: f64, max_step: f64) -> Result<Self> {
        if !(max_step > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "step must be positive, got {max_step}"
            )));
        }
        let n = ((b - a) / max_step * (1.0 - 1e-12)).ceil().max(1.0);
        Self::new(a, b, (b - a) / n)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.a + self.h * self.intervals as f64
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    /// Number of grid points (`intervals + 1`).
    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, j: usize) -> f64 {
        self.a + self.h * j as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |j| self.x(j))
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a - STEP_TOLERANCE * self.h && x <= self.b() + STEP_TOLERANCE * self.h
    }

    fn same_as(&self, other: &Grid) -> bool {
        self.intervals == other.intervals
            && (self.a - other.a).abs() <= 1e-12 * self.h
            && (self.h - other.h).abs() <= 1e-12 * self.h
    }
}

/// Composite quadrature rule used for grid norms and inner products.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Quadrature {
    #[default]
    Trapezoid,
    /// Composite Simpson; an odd interval count closes with the 3/8 rule.
    Simpson,
}

impl Quadrature {
    /// Quadrature weights for `n` intervals of width `h`.
    pub fn weights(self, n: usize, h: f64) -> Vec<f64> {
        let mut w = alloc::vec![0.0; n + 1];
        match self {
            Quadrature::Trapezoid => {
                for wj in w.iter_mut() {
                    *wj = h;
                }
                w[0] = 0.5 * h;
                w[n] = 0.5 * h;
            }
            Quadrature::Simpson => {
                if n == 1 {
                    w[0] = 0.5 * h;
                    w[1] = 0.5 * h;
                    return w;
                }
                let simpson_end = if n.is_multiple_of(2) { n } else { n - 3 };
                let mut j = 0;
                while j < simpson_end {
                    w[j] += h / 3.0;
                    w[j + 1] += 4.0 * h / 3.0;
                    w[j + 2] += h / 3.0;
                    j += 2;
                }
                if simpson_end < n {
                    let c = 3.0 * h / 8.0;
                    w[simpson_end] += c;
                    w[simpson_end + 1] += 3.0 * c;
                    w[simpson_end + 2] += 3.0 * c;
                    w[simpson_end + 3] += c;
                }
            }
        }
        w
    }

    /// Integral of samples `values` with spacing `h`.
    pub fn integrate(self, values: &[f64], h: f64) -> f64 {
        let n = values.len() - 1;
        self.weights(n, h)
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .sum()
    }
}

/// Real samples on a uniform [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: alloc::vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid, mut f: impl FnMut(f64) -> f64) -> Self {
        let values = grid.points().map(&mut f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `sqrt(∫ |g|²)` with the given rule.
    pub fn norm_with(&self, rule: Quadrature) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        rule.integrate(&sq, self.grid.h).max(0.0).sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.norm_with(Quadrature::Trapezoid)
    }

    pub fn inner_with(&self, other: &GridFunction, rule: Quadrature) -> Result<f64> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::IncompatibleGrid);
        }
        let prod: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(rule.integrate(&prod, self.grid.h))
    }

    pub fn inner(&self, other: &GridFunction) -> Result<f64> {
        self.inner_with(other, Quadrature::Trapezoid)
    }

    /// `self - other` on matching grids.
    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::IncompatibleGrid);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(GridFunction {
            grid: self.grid,
            values,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Cumulative integral `∫_{x_0}^{x_j} g` of uniformly spaced samples.
///
/// Even nodes use composite Simpson sums; each odd node adds one cubic
/// half-step `h/24 (9 g_j + 19 g_{j+1} - 5 g_{j+2} + g_{j+3})` (mirrored near
/// the right end) to the preceding even node. The result is exact for cubics
/// and fourth-order accurate without drift between odd and even nodes.
pub fn cumulative_simpson(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = alloc::vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n < 4 {
        // too few points for a cubic: trapezoid / Simpson
        out[1] = 0.5 * h * (values[0] + values[1]);
        if n == 3 {
            out[2] = h / 3.0 * (values[0] + 4.0 * values[1] + values[2]);
        }
        return out;
    }
    let v = values;
    for j in (2..n).step_by(2) {
        out[j] = out[j - 2] + h / 3.0 * (v[j - 2] + 4.0 * v[j - 1] + v[j]);
    }
    for j in (1..n).step_by(2) {
        let e = j - 1;
        let step = if e + 3 < n {
            h / 24.0 * (9.0 * v[e] + 19.0 * v[e + 1] - 5.0 * v[e + 2] + v[e + 3])
        } else {
            h / 24.0 * (v[e - 2] - 5.0 * v[e - 1] + 19.0 * v[e] + 9.0 * v[e + 1])
        };
        out[j] = out[e] + step;
    }
    out
}
