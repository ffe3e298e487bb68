//! Band-limited models on a periodic window.
//!
//! A window `[a, b]` of length `T` carries the frequencies `ω_m = 2πm/T`.
//! A [`BandSpectrum`] stores
//!
//! ```text
//! g(x) = p(x - c) + 2 Re Σ_{m=m_lo}^{m_hi} C_m e^{iω_m (x-a)}
//! ```
//!
//! with `c` the window centre and `p` a polynomial. The polynomial part is a
//! constant for projected functions; higher degrees only appear transiently
//! as antiderivatives of the constant term, which keeps differentiation and
//! integration exact at every level.
//!
//! Projection onto the band uses the Fourier coefficients
//! `C_m = (1/T) ∫_a^b g(x) e^{-iω_m (x-a)} dx`, i.e. the orthogonal projection
//! in `L²[a, b]` onto trigonometric polynomials with `|ω_m| <= σ` (and
//! `|ω_m| >= 2πε` for band-pass spaces). On a window wide enough to hold the
//! signals of interest this is the finite-window stand-in for the orthogonal
//! projection of `L²(ℝ)` onto `B_σ`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::constants::factorial;
use crate::hermite::{differentiate, horner};
use crate::signal::{Grid, GridFunction};
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Largest grid step accepted by grid projection, as a fraction of `π/σ`.
pub const MIN_OVERSAMPLING: f64 = 4.0;

/// Above this value of `|ω|·half` polynomial Fourier integrals switch from
/// the moment series to integration by parts.
const SERIES_LIMIT: f64 = 6.0;

const MAX_SERIES_TERMS: usize = 96;

/// Positive bin range `m_lo..=m_hi` and whether the constant term is kept
/// for a window of length `period`.
pub fn band_bins(period: f64, sigma: f64, epsilon: f64) -> (usize, usize, bool) {
    let m_hi = (period * sigma / (2.0 * PI) + 1e-9).floor() as usize;
    let m_lo = ((epsilon * period - 1e-9).ceil() as usize).max(1);
    (m_lo, m_hi, epsilon <= 0.0)
}

/// `∫_{-half}^{half} p(y) e^{-iωy} dy` for a polynomial with coefficients
/// `coeffs` in `y`.
pub fn poly_fourier(coeffs: &[f64], half: f64, omega: f64) -> Complex64 {
    PolySegment::new(0.0, half, coeffs, omega).transform(omega)
}

/// Repeated integration by parts:
/// `∫ p e^{-iωy} = [-e^{-iωy} Σ_j p^(j)(y) / (iω)^(j+1)]`.
fn by_parts(coeffs: &[f64], half: f64, omega: f64) -> Complex64 {
    let i_omega = Complex64::new(0.0, omega);
    let mut total = Complex64::new(0.0, 0.0);
    let mut denom = i_omega;
    for j in 0..coeffs.len() {
        let d = differentiate(coeffs, j);
        let hi = horner(&d, half);
        let lo = horner(&d, -half);
        let e_hi = Complex64::from_polar(1.0, -omega * half);
        let e_lo = Complex64::from_polar(1.0, omega * half);
        total -= (e_hi * hi - e_lo * lo) / denom;
        denom *= i_omega;
    }
    total
}

/// A polynomial piece on `[mid - half, mid + half]` prepared for repeated
/// Fourier integrals. `scaled_moments[q] = ∫ y^q p(y) dy / q!`.
#[derive(Clone, Debug)]
pub struct PolySegment {
    mid: f64,
    half: f64,
    coeffs: Vec<f64>,
    scaled_moments: Vec<f64>,
}

impl PolySegment {
    /// Prepares the moment series accurate for `|ω| <= omega_max`.
    pub fn new(mid: f64, half: f64, coeffs: &[f64], omega_max: f64) -> Self {
        let x = omega_max.abs().min(SERIES_LIMIT / half) * half;
        let mut scaled_moments = Vec::new();
        let mut bound = 1.0;
        for q in 0..MAX_SERIES_TERMS {
            let mut nu = 0.0;
            for (n, c) in coeffs.iter().enumerate() {
                let p = n + q;
                if p % 2 == 0 {
                    nu += c * 2.0 * half.powi(p as i32 + 1) / (p + 1) as f64;
                }
            }
            scaled_moments.push(nu / factorial(q));
            if q > 0 {
                bound *= x / q as f64;
            }
            if q > coeffs.len() + 2 && bound < 1e-18 {
                break;
            }
        }
        Self {
            mid,
            half,
            coeffs: coeffs.to_vec(),
            scaled_moments,
        }
    }

    pub fn mid(&self) -> f64 {
        self.mid
    }

    pub fn half(&self) -> f64 {
        self.half
    }

    /// `∫ p(y) e^{-iωy} dy`; the moment series `Σ_q (-iω)^q ν_q / q!` is
    /// split into even and odd powers, each a real Horner sum in `-ω²`.
    /// Falls back to integration by parts for `|ω|·half` beyond the series
    /// range.
    pub fn transform(&self, omega: f64) -> Complex64 {
        if omega.abs() * self.half > SERIES_LIMIT {
            return by_parts(&self.coeffs, self.half, omega);
        }
        let w2 = -omega * omega;
        let m = &self.scaled_moments;
        let even = m.iter().step_by(2).rev().fold(0.0, |acc, c| acc * w2 + c);
        let odd = m
            .iter()
            .skip(1)
            .step_by(2)
            .rev()
            .fold(0.0, |acc, c| acc * w2 + c);
        Complex64::new(even, -omega * odd)
    }
}

/// Trigonometric-plus-polynomial model on a periodic window.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BandSpectrum {
    a: f64,
    period: f64,
    m_lo: usize,
    keep_dc: bool,
    coeffs: Vec<Complex64>,
    poly: Vec<f64>,
}

impl BandSpectrum {
    /// Zero model for `B_σ` (`epsilon = 0`) or the band-pass space `B_{σ,ε}`
    /// on the window `[a, b]`.
    pub fn zeros(a: f64, b: f64, sigma: f64, epsilon: f64) -> Result<Self> {
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidGrid(alloc::format!(
                "empty window [{a}, {b}]"
            )));
        }
        if !(sigma > 0.0) || !(epsilon >= 0.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "need sigma > 0 and epsilon >= 0, got {sigma} and {epsilon}"
            )));
        }
        let period = b - a;
        let (m_lo, m_hi, keep_dc) = band_bins(period, sigma, epsilon);
        let len = (m_hi + 1).saturating_sub(m_lo);
        Ok(Self {
            a,
            period,
            m_lo,
            keep_dc,
            coeffs: vec![Complex64::new(0.0, 0.0); len],
            poly: if keep_dc { vec![0.0] } else { Vec::new() },
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.a + self.period
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn center(&self) -> f64 {
        self.a + 0.5 * self.period
    }

    pub fn m_lo(&self) -> usize {
        self.m_lo
    }

    /// Highest bin; `m_lo - 1` when the band holds no positive bin.
    pub fn m_hi(&self) -> usize {
        self.m_lo + self.coeffs.len() - 1
    }

    pub fn keeps_dc(&self) -> bool {
        self.keep_dc
    }

    pub fn omega(&self, m: usize) -> f64 {
        2.0 * PI * m as f64 / self.period
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Polynomial part, coefficients in `x - center`.
    pub fn poly(&self) -> &[f64] {
        &self.poly
    }

    pub fn poly_mut(&mut self) -> &mut Vec<f64> {
        &mut self.poly
    }

    /// Number of real degrees of freedom of the band.
    pub fn dimension(&self) -> usize {
        2 * self.coeffs.len() + usize::from(self.keep_dc)
    }

    fn same_layout(&self, other: &Self) -> bool {
        self.coeffs.len() == other.coeffs.len()
            && self.m_lo == other.m_lo
            && self.keep_dc == other.keep_dc
            && (self.a - other.a).abs() <= 1e-12 * self.period
            && (self.period - other.period).abs() <= 1e-12 * self.period
    }

    fn check_layout(&self, other: &Self) -> Result<()> {
        if self.same_layout(other) {
            Ok(())
        } else {
            Err(Error::IncompatibleGrid)
        }
    }

    /// `self += scale · other`.
    pub fn axpy(&mut self, scale: f64, other: &Self) -> Result<()> {
        self.check_layout(other)?;
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o * scale;
        }
        if self.poly.len() < other.poly.len() {
            self.poly.resize(other.poly.len(), 0.0);
        }
        for (p, o) in self.poly.iter_mut().zip(&other.poly) {
            *p += scale * o;
        }
        Ok(())
    }

    pub fn scaled(&self, scale: f64) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= scale;
        }
        for p in out.poly.iter_mut() {
            *p *= scale;
        }
        out
    }

    /// `e^{iω_{m_lo}(x-a)}` and the per-bin step `e^{i2π(x-a)/T}`.
    fn phase(&self, x: f64) -> (Complex64, Complex64) {
        let theta = 2.0 * PI * (x - self.a) / self.period;
        (
            Complex64::from_polar(1.0, theta * self.m_lo as f64),
            Complex64::from_polar(1.0, theta),
        )
    }

    /// `g^(order)(x)`.
    pub fn eval(&self, x: f64, order: usize) -> f64 {
        self.eval_orders(x, order + 1)[order]
    }

    /// `[g(x), g'(x), ..., g^(count-1)(x)]`.
    pub fn eval_orders(&self, x: f64, count: usize) -> Vec<f64> {
        let mut out = vec![0.0; count];
        let (mut z, step) = self.phase(x);
        for (idx, c) in self.coeffs.iter().enumerate() {
            let i_omega = Complex64::new(0.0, self.omega(self.m_lo + idx));
            let mut term = c * z;
            for v in out.iter_mut() {
                *v += 2.0 * term.re;
                term *= i_omega;
            }
            z *= step;
        }
        let y = x - self.center();
        for (j, v) in out.iter_mut().enumerate() {
            *v += horner(&differentiate(&self.poly, j), y);
        }
        out
    }

    /// Derivative data `g^(l)(x_i)`, `l < k`, row-major by point.
    pub fn sample_data(&self, points: &[f64], k: usize) -> Vec<f64> {
        points
            .iter()
            .flat_map(|&x| self.eval_orders(x, k))
            .collect()
    }

    pub fn derivative(&self, order: usize) -> Self {
        let mut out = self.clone();
        for (idx, c) in out.coeffs.iter_mut().enumerate() {
            let i_omega = Complex64::new(0.0, 2.0 * PI * (self.m_lo + idx) as f64 / self.period);
            for _ in 0..order {
                *c *= i_omega;
            }
        }
        out.poly = differentiate(&self.poly, order);
        if out.keep_dc && out.poly.is_empty() {
            out.poly.push(0.0);
        }
        out
    }

    /// `order`-fold antiderivative with zero integration constants (taken at
    /// the window centre for the polynomial part).
    pub fn antiderivative(&self, order: usize) -> Self {
        let mut out = self.clone();
        for (idx, c) in out.coeffs.iter_mut().enumerate() {
            let i_omega = Complex64::new(0.0, 2.0 * PI * (self.m_lo + idx) as f64 / self.period);
            for _ in 0..order {
                *c /= i_omega;
            }
        }
        let mut poly = self.poly.clone();
        for _ in 0..order {
            let mut next = vec![0.0; poly.len() + 1];
            for (n, p) in poly.iter().enumerate() {
                next[n + 1] = p / (n + 1) as f64;
            }
            poly = next;
        }
        out.poly = poly;
        out
    }

    /// Adds the Fourier coefficients of the piece `seg` (zero outside its
    /// interval).
    pub fn add_segment(&mut self, seg: &PolySegment) {
        let t = self.period;
        let (mut z, step) = self.phase(seg.mid());
        for (idx, c) in self.coeffs.iter_mut().enumerate() {
            let omega = 2.0 * PI * (self.m_lo + idx) as f64 / t;
            *c += z.conj() * seg.transform(omega) / t;
            z *= step;
        }
        if self.keep_dc {
            self.poly[0] += seg.transform(0.0).re / t;
        }
    }

    /// Adds the Fourier coefficients of a polynomial piece given by
    /// coefficients in `x - mid` on `[mid - half, mid + half]`.
    pub fn add_polynomial_piece(&mut self, mid: f64, half: f64, coeffs: &[f64]) {
        let omega_max = self.omega(self.m_hi().max(self.m_lo));
        self.add_segment(&PolySegment::new(mid, half, coeffs, omega_max));
    }

    /// Orthogonal projection onto the band: the polynomial part is folded
    /// into the bins and the constant term.
    pub fn project(&self) -> Self {
        let mut out = self.clone();
        let poly = core::mem::take(&mut out.poly);
        out.poly = if out.keep_dc { vec![0.0] } else { Vec::new() };
        if !poly.is_empty() {
            let half = 0.5 * self.period;
            out.add_polynomial_piece(self.center(), half, &poly);
        }
        out
    }

    /// `∫_a^b |g|²`.
    fn norm_sq(&self) -> f64 {
        let trig: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * 2.0 * self.period;
        let half = 0.5 * self.period;
        let mut total = trig;
        if self.poly.iter().any(|&p| p != 0.0) {
            let sq = crate::hermite::poly_square(&self.poly);
            total += poly_fourier(&sq, half, 0.0).re;
            // cross term 2 ∫ p · 2 Re Σ C_m e^{iω(x-a)} = 4 Re Σ C_m conj(∫ p e^{-iω(x-a)})
            let (mut z, step) = self.phase(self.center());
            for (idx, c) in self.coeffs.iter().enumerate() {
                let omega = self.omega(self.m_lo + idx);
                let pf = z.conj() * poly_fourier(&self.poly, half, omega);
                total += 4.0 * (c * pf.conj()).re;
                z *= step;
            }
        }
        total
    }

    /// `L²[a, b]` norm.
    pub fn norm(&self) -> f64 {
        self.norm_sq().max(0.0).sqrt()
    }

    /// `‖self - other‖` on the window.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        let mut d = self.clone();
        d.axpy(-1.0, other)?;
        Ok(d.norm())
    }

    /// Renders `g^(order)` on `grid`.
    pub fn render(&self, grid: &Grid, order: usize) -> GridFunction {
        GridFunction::from_fn(*grid, |x| self.eval(x, order))
    }

    /// Band projection of grid samples on the window `[grid.a, grid.b]`.
    ///
    /// The window is treated as one period: the endpoint samples are
    /// averaged and the periodic trapezoid rule gives the Fourier
    /// coefficients, which is exact for in-band trigonometric polynomials.
    pub fn from_grid(g: &GridFunction, sigma: f64, epsilon: f64) -> Result<Self> {
        let grid = g.grid();
        let h = grid.step();
        let limit = PI / (MIN_OVERSAMPLING * sigma);
        if h > limit * (1.0 + 1e-12) {
            return Err(Error::Resolution { h, sigma, limit });
        }
        let mut out = Self::zeros(grid.a(), grid.b(), sigma, epsilon)?;
        let n = grid.intervals();
        let v = g.values();
        let mut folded = v[..n].to_vec();
        folded[0] = 0.5 * (v[0] + v[n]);
        let roots: Vec<Complex64> = (0..n)
            .map(|t| Complex64::from_polar(1.0, -2.0 * PI * t as f64 / n as f64))
            .collect();
        let m_lo = out.m_lo;
        for (idx, c) in out.coeffs.iter_mut().enumerate() {
            let m = m_lo + idx;
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, val) in folded.iter().enumerate() {
                acc += roots[(m * j) % n] * *val;
            }
            *c = acc / n as f64;
        }
        if out.keep_dc {
            out.poly[0] = folded.iter().sum::<f64>() / n as f64;
        }
        Ok(out)
    }
}

/// Band projection of a grid function onto `B_σ`, rendered back on the same
/// grid.
pub fn project_bandlimited(g: &GridFunction, sigma: f64) -> Result<GridFunction> {
    Ok(BandSpectrum::from_grid(g, sigma, 0.0)?.render(g.grid(), 0))
}
