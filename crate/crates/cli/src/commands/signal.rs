use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use derivsamp_core::analysis::{
    gen_bounded_gaps, gen_jittered, gen_lambda_n, gen_uniform, SamplingSet,
};
use derivsamp_core::operators::DerivativeSamples;
use derivsamp_core::signal::{BandlimitedSignal, LocalizedSignalSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{parse_window, require, require_path};
use crate::error::{CliError, Result};
use crate::files::{read_points, read_signal, sample_header, SignalData};
use crate::output::{fmt_row, overlay, write_csv, write_json};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignalKind {
    /// Gaussian-windowed carriers; negligible outside a finite window.
    #[default]
    Localized,
    /// Random sinc series with `n_coeffs` coefficients.
    Series,
    /// `sinc(σx)`.
    Sinc,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSignalArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = PI)]
    pub sigma: f64,
    #[arg(long, value_enum, default_value_t = SignalKind::Localized)]
    pub kind: SignalKind,
    /// Keep the spectrum of localized signals outside `(-2πε, 2πε)`.
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.0)]
    pub center: f64,
    #[arg(long, default_value_t = 32)]
    pub n_coeffs: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn series_window(s: &BandlimitedSignal) -> (f64, f64) {
    let (a, b) = s.support();
    let margin = 16.0 * PI / s.sigma();
    (a - margin, b + margin)
}

pub fn generate(args: &GenSignalArgs) -> Result<SignalData> {
    let seed = || require(args.seed, "seed");
    match args.kind {
        SignalKind::Localized => {
            let spec = if args.epsilon > 0.0 {
                LocalizedSignalSpec::bandpass(args.sigma, args.epsilon, args.center)
            } else {
                LocalizedSignalSpec::new(args.sigma, args.center)
            };
            let s = spec.generate(&mut ChaCha8Rng::seed_from_u64(seed()?))?;
            Ok(SignalData::from_signal(&s, spec.window()))
        }
        SignalKind::Series => {
            if args.n_coeffs == 0 {
                return Err(CliError::invalid("n_coeffs must be positive"));
            }
            let n_min = -(args.n_coeffs as i64 / 2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed()?);
            let s = BandlimitedSignal::random(args.sigma, n_min, args.n_coeffs, &mut rng)?;
            Ok(SignalData::from_signal(&s, series_window(&s)))
        }
        SignalKind::Sinc => {
            let s = BandlimitedSignal::sinc(args.sigma)?;
            Ok(SignalData::from_signal(&s, series_window(&s)))
        }
    }
}

pub fn gen_signal(args: GenSignalArgs, config: Option<&Path>) -> Result<()> {
    let args = overlay(args, config)?;
    let out = require_path(&args.out, "out")?;
    let data = generate(&args)?;
    write_json(out, "gen-signal", &args, &data)?;
    println!(
        "wrote {} coefficients (sigma = {}, window [{}, {}]) to {}",
        data.coeffs.len(),
        data.sigma,
        data.window.0,
        data.window.1,
        out.display()
    );
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetKind {
    /// Spacing `delta`.
    #[default]
    Uniform,
    /// Uniform spacing `delta` with each point moved by up to `jitter · delta`.
    Jittered,
    /// Random gaps in `[gamma, delta]`, with at least one gap equal to `delta`.
    Bounded,
    /// The set `Λ_N` for the signal bandwidth.
    LambdaN,
    /// Points read from the first column of `points`.
    File,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleArgs {
    /// Signal JSON written by `gen-signal`.
    #[arg(long)]
    pub signal: Option<PathBuf>,
    /// Number of derivative levels, `f .. f^(k-1)`.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = SetKind::Uniform)]
    pub set: SetKind,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 0.25)]
    pub jitter: f64,
    /// Minimum separation (default `0.3 δ` for bounded, `0.1 δ` for jittered).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// `N` of `Λ_N`.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Sampling window `a,b` (default: the signal's window).
    #[arg(long, value_parser = parse_window)]
    pub window: Option<(f64, f64)>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Bandwidth recorded for reconstruction (default: the signal's).
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn build_set(args: &SampleArgs, sigma: f64, window: (f64, f64)) -> Result<SamplingSet> {
    let delta = || require(args.delta, "delta");
    let seed = || require(args.seed, "seed");
    let set = match args.set {
        SetKind::Uniform => gen_uniform(delta()?, window)?,
        SetKind::Jittered => {
            let d = delta()?;
            gen_jittered(
                d,
                args.jitter,
                args.gamma.unwrap_or(0.1 * d),
                seed()?,
                window,
            )?
        }
        SetKind::Bounded => {
            let d = delta()?;
            gen_bounded_gaps(d, args.gamma.unwrap_or(0.3 * d), seed()?, window)?
        }
        SetKind::LambdaN => {
            let unit = args.k.max(1) as f64 * PI / sigma;
            let reach = window.0.abs().max(window.1.abs());
            let l_max = ((reach / unit).ceil() as usize).max(args.n + 1);
            let full = gen_lambda_n(args.k, sigma, args.n, l_max)?;
            SamplingSet::new(
                full.points()
                    .iter()
                    .copied()
                    .filter(|x| *x >= window.0 && *x <= window.1)
                    .collect(),
            )?
        }
        SetKind::File => read_points(require_path(&args.points, "points")?)?,
    };
    Ok(set)
}

pub fn sample(args: SampleArgs, config: Option<&Path>) -> Result<()> {
    let mut args = overlay(args, config)?;
    let out = require_path(&args.out, "out")?.to_path_buf();
    if args.k == 0 {
        return Err(CliError::invalid("k must be >= 1"));
    }
    let data = read_signal(require_path(&args.signal, "signal")?)?;
    let signal = data.signal()?;
    let sigma = *args.sigma.get_or_insert(data.sigma);
    let window = *args.window.get_or_insert(data.window);
    let set = build_set(&args, sigma, window)?;
    let samples = DerivativeSamples::from_function(set, args.k, &signal)?;
    let rows: Vec<Vec<String>> = (0..samples.len())
        .map(|i| {
            let mut row = vec![samples.points().points()[i]];
            row.extend_from_slice(samples.row(i));
            fmt_row(&row)
        })
        .collect();
    write_csv(&out, "sample", &args, &sample_header(args.k), &rows)?;
    println!(
        "wrote {} points (delta = {}, gamma = {}) to {}",
        samples.len(),
        samples.points().delta(),
        samples.points().gamma(),
        out.display()
    );
    Ok(())
}
