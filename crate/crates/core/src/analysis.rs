//! Sampling sets, gap statistics and stability sweeps.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::frame_bounds;
use crate::frame::{empirical_frame_bounds, lower_bound_epsilon};
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Strictly increasing sample points with their maximum gap `delta` and
/// minimum gap `gamma`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<f64>", into = "Vec<f64>"))]
pub struct SamplingSet {
    points: Vec<f64>,
    delta: f64,
    gamma: f64,
}

impl SamplingSet {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::EmptySet(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        if let Some(bad) = points.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite sample point {bad}"
            )));
        }
        let mut delta = 0.0f64;
        let mut gamma = f64::INFINITY;
        for w in points.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Ordering {
                    left: w[0],
                    right: w[1],
                });
            }
            let gap = w[1] - w[0];
            delta = delta.max(gap);
            gamma = gamma.min(gap);
        }
        Ok(Self {
            points,
            delta,
            gamma,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Maximum adjacent gap.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Minimum adjacent gap (separation).
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    pub fn first_gap(&self) -> f64 {
        self.points[1] - self.points[0]
    }

    pub fn last_gap(&self) -> f64 {
        let n = self.points.len();
        self.points[n - 1] - self.points[n - 2]
    }
}

impl TryFrom<Vec<f64>> for SamplingSet {
    type Error = Error;

    fn try_from(points: Vec<f64>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<SamplingSet> for Vec<f64> {
    fn from(set: SamplingSet) -> Self {
        set.points
    }
}

fn check_window(spacing: f64, window: (f64, f64)) -> Result<()> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "spacing must be positive, got {spacing}"
        )));
    }
    if !(window.1 - window.0 >= spacing) {
        return Err(Error::EmptySet(format!(
            "window [{}, {}] shorter than spacing {spacing}",
            window.0, window.1
        )));
    }
    Ok(())
}

/// `a, a + s, a + 2s, ...` up to `b`.
pub fn gen_uniform(spacing: f64, window: (f64, f64)) -> Result<SamplingSet> {
    check_window(spacing, window)?;
    let n = ((window.1 - window.0) / spacing * (1.0 + 1e-12)).floor() as usize;
    SamplingSet::new((0..=n).map(|j| window.0 + spacing * j as f64).collect())
}

/// Uniform points each moved by an independent offset in
/// `[-jitter_fraction·s, jitter_fraction·s]`, then pushed right where needed
/// to keep adjacent points at least `min_separation` apart.
pub fn gen_jittered(
    spacing: f64,
    jitter_fraction: f64,
    min_separation: f64,
    seed: u64,
    window: (f64, f64),
) -> Result<SamplingSet> {
    if !(0.0..0.5).contains(&jitter_fraction) {
        return Err(Error::InvalidParameter(format!(
            "jitter fraction must lie in [0, 0.5), got {jitter_fraction}"
        )));
    }
    if !(min_separation >= 0.0 && min_separation <= spacing) {
        return Err(Error::InvalidParameter(format!(
            "minimum separation {min_separation} must lie in [0, spacing]"
        )));
    }
    let base = gen_uniform(spacing, window)?;
    if jitter_fraction == 0.0 {
        return Ok(base);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amp = jitter_fraction * spacing;
    let mut points: Vec<f64> = base
        .points()
        .iter()
        .map(|x| x + rng.gen_range(-amp..=amp))
        .collect();
    points.sort_by(f64::total_cmp);
    for i in 1..points.len() {
        let min = points[i - 1] + min_separation.max(f64::EPSILON * points[i - 1].abs().max(1.0));
        if points[i] < min {
            points[i] = min;
        }
    }
    SamplingSet::new(points)
}

/// Points from `start` with independent gaps uniform in `[gamma, delta]`,
/// one of them (chosen at random) exactly `delta`, until `end` is reached.
/// The maximum gap is therefore exactly `delta`.
pub fn gen_bounded_gaps(
    delta: f64,
    gamma: f64,
    seed: u64,
    window: (f64, f64),
) -> Result<SamplingSet> {
    if !(gamma > 0.0 && delta >= gamma) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < gamma <= delta, got gamma={gamma}, delta={delta}"
        )));
    }
    check_window(delta, window)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gaps = Vec::new();
    let mut total = 0.0;
    while total < window.1 - window.0 {
        let g = if delta > gamma {
            rng.gen_range(gamma..=delta)
        } else {
            delta
        };
        gaps.push(g);
        total += g;
    }
    let forced = rng.gen_range(0..gaps.len());
    gaps[forced] = delta;
    let mut points = Vec::with_capacity(gaps.len() + 1);
    let mut x = window.0;
    points.push(x);
    for g in gaps {
        x += g;
        points.push(x);
    }
    SamplingSet::new(points)
}

/// `λ_N(l)` for the near-critical sets: `kπl/σ` for `|l| > N`, `0` for
/// `l = 0` and `sgn(l)(2|l|-1) kπ(N+1)/(σ(2N+1))` for `1 <= |l| <= N`.
pub fn lambda_n_point(k: usize, sigma: f64, n: usize, l: i64) -> f64 {
    let kf = k as f64;
    let abs = l.unsigned_abs() as usize;
    if abs > n {
        kf * PI * l as f64 / sigma
    } else if l == 0 {
        0.0
    } else {
        let nf = n as f64;
        l.signum() as f64 * (2 * abs - 1) as f64 * kf * PI * (nf + 1.0) / (sigma * (2.0 * nf + 1.0))
    }
}

/// Maximum gap of `Λ_N`, `2k(N+1)π/((2N+1)σ)`.
pub fn lambda_n_max_gap(k: usize, sigma: f64, n: usize) -> f64 {
    let nf = n as f64;
    2.0 * k as f64 * (nf + 1.0) * PI / ((2.0 * nf + 1.0) * sigma)
}

/// Truncation of `Λ_N` to indices `-l_max..=l_max` (requires `l_max > N`).
pub fn gen_lambda_n(k: usize, sigma: f64, n: usize, l_max: usize) -> Result<SamplingSet> {
    if n == 0 || k == 0 || !(sigma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need N >= 1, k >= 1 and sigma > 0 (N={n}, k={k}, sigma={sigma})"
        )));
    }
    if l_max <= n {
        return Err(Error::InvalidParameter(format!(
            "truncation {l_max} must exceed N = {n}"
        )));
    }
    let l_max = l_max as i64;
    SamplingSet::new(
        (-l_max..=l_max)
            .map(|l| lambda_n_point(k, sigma, n, l))
            .collect(),
    )
}

/// Longest adjacent gap of the given (sorted) zero locations.
pub fn max_gap_statistic(points: &[f64]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    let mut best = 0.0f64;
    for w in points.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Ordering {
                left: w[0],
                right: w[1],
            });
        }
        best = best.max(w[1] - w[0]);
    }
    Ok(best)
}

/// Families of sampling sets used in stability sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SetFamily {
    /// Uniform spacing `δ`.
    Uniform,
    /// `Λ_N` rescaled so that its maximum gap is `δ`.
    LambdaN { n: usize },
}

/// One row of a stability sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    pub delta: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `A_ε` of the analytic bounds; zero when `δσ >= ν_k`.
    pub a_eps_analytic: f64,
}

/// Sweep parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepConfig {
    pub k: usize,
    pub sigma: f64,
    /// Band-pass cutoff of the test subspace.
    pub epsilon: f64,
    pub family: SetFamily,
    /// Upper limit on the real dimension of the test subspace; also sets the
    /// window length.
    pub test_dimension: usize,
}

impl SweepConfig {
    pub fn new(k: usize, sigma: f64, family: SetFamily) -> Self {
        Self {
            k,
            sigma,
            epsilon: 0.01,
            family,
            test_dimension: 100,
        }
    }

    /// Window length holding about `test_dimension` band-pass modes.
    fn target_length(&self) -> f64 {
        self.test_dimension as f64 / (2.0 * (self.sigma / (2.0 * PI) - self.epsilon))
    }
}

/// Builds the sweep's sampling set for gap `delta`. The set's periodic
/// closure (see [`crate::frame::FrameSystem`]) has all gaps at most `delta`.
pub fn sweep_set(cfg: &SweepConfig, delta: f64) -> Result<SamplingSet> {
    let length = cfg.target_length();
    match cfg.family {
        SetFamily::Uniform => {
            let n = ((length / delta).round() as usize).max(2);
            SamplingSet::new((0..n).map(|j| j as f64 * delta).collect())
        }
        SetFamily::LambdaN { n } => {
            let scale = delta / lambda_n_max_gap(cfg.k, cfg.sigma, n);
            let outer = cfg.k as f64 * PI / cfg.sigma * scale;
            let l_max = ((0.5 * length / outer).round() as usize).max(n + 1);
            let set = gen_lambda_n(cfg.k, cfg.sigma, n, l_max)?;
            SamplingSet::new(set.points().iter().map(|x| x * scale).collect())
        }
    }
}

/// Smallest and largest empirical frame bounds over a range of gaps.
pub fn stability_sweep(cfg: &SweepConfig, gap_values: &[f64]) -> Result<Vec<SweepRow>> {
    if gap_values.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::InvalidParameter(
            "gap values must be sorted ascending".into(),
        ));
    }
    gap_values
        .iter()
        .map(|&delta| {
            let set = sweep_set(cfg, delta)?;
            let emp =
                empirical_frame_bounds(&set, cfg.k, cfg.sigma, cfg.epsilon, cfg.test_dimension)?;
            let bounds = frame_bounds(cfg.k, set.delta(), cfg.sigma, set.gamma())?;
            Ok(SweepRow {
                delta,
                lambda_min: emp.lambda_min,
                lambda_max: emp.lambda_max,
                a_eps_analytic: lower_bound_epsilon(bounds.a, cfg.epsilon, cfg.k),
            })
        })
        .collect()
}
