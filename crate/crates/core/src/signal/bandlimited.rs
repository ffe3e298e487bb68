use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use super::grid::{Grid, GridFunction, Quadrature};
use super::kernel::{KernelDerivativeTable, DEFAULT_MAX_ORDER};
use crate::{Error, RealFunction, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Grid density used for norm quadrature, in points per Nyquist interval.
/// The trapezoid rule is exact for `|f|²` once `h < π/σ`.
const NORM_OVERSAMPLING: f64 = 4.0;

/// Upper limit on quadrature points before giving up on a window.
const MAX_NORM_POINTS: usize = 1 << 22;

/// `f(x) = Σ_n c_n K_σ(x - nπ/σ)` for `n = n_min, ..., n_min + len - 1`.
///
/// Every such function lies in `B_σ`, and its derivatives of any order are
/// available in closed form through the kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct BandlimitedSignal {
    sigma: f64,
    n_min: i64,
    coeffs: Vec<f64>,
    kernel: KernelDerivativeTable,
}

impl BandlimitedSignal {
    pub fn new(sigma: f64, n_min: i64, coeffs: Vec<f64>) -> Result<Self> {
        let kernel = KernelDerivativeTable::new(sigma, DEFAULT_MAX_ORDER)?;
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("coefficient list is empty".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        Ok(Self {
            sigma,
            n_min,
            coeffs,
            kernel,
        })
    }

    /// The kernel itself centred at the origin.
    pub fn sinc(sigma: f64) -> Result<Self> {
        Self::new(sigma, 0, alloc::vec![1.0])
    }

    /// Uniform random coefficients in `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(
        sigma: f64,
        n_min: i64,
        len: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let coeffs = (0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        Self::new(sigma, n_min, coeffs)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Nyquist node `nπ/σ`.
    pub fn node(&self, n: i64) -> f64 {
        n as f64 * PI / self.sigma
    }

    /// First and last node carrying a coefficient.
    pub fn support(&self) -> (f64, f64) {
        (
            self.node(self.n_min),
            self.node(self.n_min + self.coeffs.len() as i64 - 1),
        )
    }

    /// `f^(order)(x)`.
    pub fn eval(&self, x: f64, order: usize) -> Result<f64> {
        let mut acc = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            if *c != 0.0 {
                let t = self.node(self.n_min + j as i64);
                acc += c * self.kernel.eval(order, x - t)?;
            }
        }
        Ok(acc)
    }

    /// Exact `L²(ℝ)` norm, `sqrt((π/σ) Σ c_n²)`.
    pub fn l2_norm(&self) -> f64 {
        (PI / self.sigma * self.coeffs.iter().map(|c| c * c).sum::<f64>()).sqrt()
    }

    pub fn render(&self, grid: &Grid, order: usize) -> Result<GridFunction> {
        let values = grid
            .points()
            .map(|x| self.eval(x, order))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::new(*grid, values)
    }

    /// `‖f^(k)‖₂ / (σ^k ‖f‖₂)`, both norms by grid quadrature.
    ///
    /// The window around the support is doubled until the mass in the
    /// outermost shell, which bounds the remaining tail of a square-integrable
    /// integrand decaying at least like `1/x²`, falls below `tail_tolerance`
    /// of the total for both integrands.
    pub fn bernstein_ratio(&self, k: usize, tail_tolerance: f64) -> Result<f64> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "bernstein order must be >= 1".into(),
            ));
        }
        let (t0, t1) = self.support();
        let h = PI / (NORM_OVERSAMPLING * self.sigma);
        let mut margin = 8.0 * PI / self.sigma;
        loop {
            let inner = self.window_masses(t0 - margin, t1 + margin, h, k)?;
            let outer = self.window_masses(t0 - 2.0 * margin, t1 + 2.0 * margin, h, k)?;
            let tail_f = (outer.0 - inner.0).abs() / outer.0.max(f64::MIN_POSITIVE);
            let tail_d = (outer.1 - inner.1).abs() / outer.1.max(f64::MIN_POSITIVE);
            let tail = tail_f.max(tail_d);
            if tail <= tail_tolerance {
                return Ok(outer.1.sqrt() / (self.sigma.powi(k as i32) * outer.0.sqrt()));
            }
            let next_points = ((t1 - t0 + 8.0 * margin) / h) as usize;
            if next_points > MAX_NORM_POINTS {
                return Err(Error::Window {
                    tail,
                    tolerance: tail_tolerance,
                });
            }
            margin *= 2.0;
        }
    }

    /// `(∫|f|², ∫|f^(k)|²)` over `[a, b]` by the trapezoid rule.
    fn window_masses(&self, a: f64, b: f64, h: f64, k: usize) -> Result<(f64, f64)> {
        let grid = Grid::with_max_step(a, b, h)?;
        let f = self.render(&grid, 0)?;
        let d = self.render(&grid, k)?;
        Ok((
            f.norm_with(Quadrature::Trapezoid).powi(2),
            d.norm_with(Quadrature::Trapezoid).powi(2),
        ))
    }
}

impl RealFunction for BandlimitedSignal {
    fn derivative(&self, x: f64, order: usize) -> Result<f64> {
        self.eval(x, order)
    }
}

/// Random sinc series whose coefficients sample a sum of Gaussian-windowed
/// cosines with frequencies below `bandwidth_fraction · σ`.
///
/// The envelope width is chosen so that the spectrum of each component is
/// nine standard deviations inside the band, which makes the function (and
/// every derivative) decay like the Gaussian envelope down to ~1e-17 of its
/// peak. Finite windows then capture all of its mass.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LocalizedSignalSpec {
    pub sigma: f64,
    pub center: f64,
    pub bandwidth_fraction: f64,
    /// Lowest carrier frequency.
    pub min_frequency: f64,
    pub components: usize,
}

impl LocalizedSignalSpec {
    pub fn new(sigma: f64, center: f64) -> Self {
        Self {
            sigma,
            center,
            bandwidth_fraction: 0.6,
            min_frequency: 0.0,
            components: 4,
        }
    }

    /// Signals with no spectral content below `|ω| = 2πε`.
    pub fn bandpass(sigma: f64, epsilon: f64, center: f64) -> Self {
        let fraction = 0.8;
        Self {
            sigma,
            center,
            bandwidth_fraction: fraction,
            min_frequency: 2.0 * PI * epsilon + (1.0 - fraction) * sigma,
            components: 4,
        }
    }

    /// Standard deviation of the Gaussian envelope.
    pub fn envelope_width(&self) -> f64 {
        9.0 / ((1.0 - self.bandwidth_fraction) * self.sigma)
    }

    /// Half-width of the interval outside which the function is negligible.
    pub fn half_width(&self) -> f64 {
        11.0 * self.envelope_width()
    }

    /// Window `[center - half_width, center + half_width]`.
    pub fn window(&self) -> (f64, f64) {
        let hw = self.half_width();
        (self.center - hw, self.center + hw)
    }

    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<BandlimitedSignal> {
        if !(self.sigma > 0.0) || !(self.bandwidth_fraction > 0.0 && self.bandwidth_fraction < 1.0)
        {
            return Err(Error::InvalidParameter(format!(
                "need sigma > 0 and bandwidth fraction in (0, 1), got {} and {}",
                self.sigma, self.bandwidth_fraction
            )));
        }
        if !(self.min_frequency >= 0.0
            && self.min_frequency <= self.bandwidth_fraction * self.sigma)
        {
            return Err(Error::InvalidParameter(format!(
                "carrier range [{}, {}] is empty",
                self.min_frequency,
                self.bandwidth_fraction * self.sigma
            )));
        }
        if self.components == 0 {
            return Err(Error::InvalidParameter(
                "need at least one component".into(),
            ));
        }
        let w = self.envelope_width();
        let parts: Vec<(f64, f64, f64, f64)> = (0..self.components)
            .map(|_| {
                (
                    rng.gen_range(-1.0..=1.0),
                    self.center + rng.gen_range(-w..=w),
                    rng.gen_range(self.min_frequency..=self.bandwidth_fraction * self.sigma),
                    rng.gen_range(0.0..2.0 * PI),
                )
            })
            .collect();
        let spacing = PI / self.sigma;
        let reach = self.half_width() - w;
        let n_min = ((self.center - reach) / spacing).floor() as i64;
        let n_max = ((self.center + reach) / spacing).ceil() as i64;
        let coeffs = (n_min..=n_max)
            .map(|n| {
                let t = n as f64 * spacing;
                parts
                    .iter()
                    .map(|&(amp, shift, omega, phase)| {
                        let u = (t - shift) / w;
                        amp * (-0.5 * u * u).exp() * (omega * t + phase).cos()
                    })
                    .sum()
            })
            .collect();
        BandlimitedSignal::new(self.sigma, n_min, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn evaluation_examples() {
        let f = BandlimitedSignal::sinc(PI).unwrap();
        assert_eq!(f.eval(0.0, 0).unwrap(), 1.0);
        assert!(f.eval(1.0, 0).unwrap().abs() < 1e-16);

        let g = BandlimitedSignal::new(PI, 0, alloc::vec![1.0, 1.0]).unwrap();
        // K(0.5) + K(-0.5) = 2 sin(π/2)/(π/2)
        let expected = 2.0 * (PI / 2.0).sin() / (PI / 2.0);
        assert!((g.eval(0.5, 0).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 4.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn exact_norm_examples() {
        let f = |s, c: &[f64]| BandlimitedSignal::new(s, 0, c.to_vec()).unwrap().l2_norm();
        assert!((f(PI, &[1.0]) - 1.0).abs() < 1e-15);
        assert!((f(PI, &[3.0, 4.0]) - 5.0).abs() < 1e-14);
        assert!((f(2.0 * PI, &[1.0]) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_empty_coefficients() {
        assert!(BandlimitedSignal::new(1.0, 0, Vec::new()).is_err());
        assert!(BandlimitedSignal::new(-1.0, 0, alloc::vec![1.0]).is_err());
    }

    #[test]
    fn localized_signal_is_negligible_outside_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = LocalizedSignalSpec::new(PI, 0.0);
        let f = spec.generate(&mut rng).unwrap();
        let (a, b) = spec.window();
        let peak = (-20..=20)
            .map(|j| f.eval(j as f64 * 0.37, 0).unwrap().abs())
            .fold(0.0, f64::max);
        for x in [a, b, a - 10.0, b + 10.0] {
            for l in 0..3 {
                assert!(f.eval(x, l).unwrap().abs() < 1e-14 * peak);
            }
        }
    }

    #[test]
    fn slowly_decaying_signal_reports_window_error() {
        let f = BandlimitedSignal::sinc(PI).unwrap();
        assert!(matches!(
            f.bernstein_ratio(1, 1e-10),
            Err(Error::Window { .. })
        ));
    }
}
