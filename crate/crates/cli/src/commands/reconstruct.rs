use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args};
use derivsamp_core::frame::{frame_iterate, BandpassSubspace, FrameConfig, FrameSystem, RhoChoice};
use derivsamp_core::operators::{
    full_recover, Anchor, AntiderivativeRule, DerivativeSamples, GroundTruth, IterationTrace,
    Projection, ReconstructionConfig,
};
use derivsamp_core::signal::{BandlimitedSignal, Grid};
use derivsamp_core::spectral::BandSpectrum;
use serde::{Deserialize, Serialize};

use super::{parse_named, parse_window, require_path};
use crate::error::{CliError, Result};
use crate::files::{read_samples, read_signal};
use crate::output::{fmt_f64, fmt_row, overlay, write_csv, write_json};

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructArgs {
    /// Sample CSV written by `sample`.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    /// Signal JSON used as ground truth for error columns.
    #[arg(long)]
    pub signal: Option<PathBuf>,
    /// Bandwidth (default: recorded in the sample file, else π).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Periodic window `a,b` (default: hull of the sample points).
    #[arg(long, value_parser = parse_window)]
    pub window: Option<(f64, f64)>,
    /// Output grid step (default `π/(8σ)`).
    #[arg(long)]
    pub grid_step: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    /// `exact` or `grid`.
    #[arg(long, value_parser = parse_named::<Projection>, default_value = "exact")]
    pub projection: Projection,
    /// `spectral` or `simpson`.
    #[arg(long, value_parser = parse_named::<AntiderivativeRule>, default_value = "spectral")]
    pub antiderivative: AntiderivativeRule,
    /// `nearest` or `average`.
    #[arg(long, value_parser = parse_named::<Anchor>, default_value = "nearest")]
    pub anchor: Anchor,
    #[arg(long, action = ArgAction::Set, default_value_t = true)]
    pub reproject: bool,
    /// Report JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Trace CSV with columns n, residual, error, bound.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Reconstruction CSV with columns x, value.
    #[arg(long)]
    pub grid_out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct ReconstructReport {
    pub k: usize,
    pub points: usize,
    pub delta: f64,
    pub gamma: f64,
    pub factor: f64,
    pub guaranteed: bool,
    pub converged: bool,
    pub iterations: usize,
    pub final_residual: f64,
    /// `‖f - f_rec‖ / ‖f‖` on the window, when a signal is given.
    pub relative_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

fn load_truth(path: &Option<PathBuf>) -> Result<Option<BandlimitedSignal>> {
    path.as_deref()
        .map(|p| read_signal(p)?.signal())
        .transpose()
}

fn relative_error(
    truth: Option<&BandlimitedSignal>,
    model: &BandSpectrum,
    window: (f64, f64),
    sigma: f64,
    epsilon: f64,
) -> Result<Option<f64>> {
    truth
        .map(|f| {
            let gt = GroundTruth::new(f, 0, window, sigma, epsilon)?;
            Ok(gt.error(model)? / gt.norm())
        })
        .transpose()
}

fn write_trace<C: Serialize>(
    path: &Option<PathBuf>,
    command: &str,
    config: &C,
    trace: &IterationTrace,
) -> Result<()> {
    let Some(path) = path else {
        return Ok(());
    };
    let header = ["n", "residual", "error", "bound"].map(String::from);
    let rows: Vec<Vec<String>> = trace
        .steps
        .iter()
        .map(|s| {
            vec![
                s.n.to_string(),
                fmt_f64(s.residual),
                s.error.map(fmt_f64).unwrap_or_default(),
                fmt_f64(s.bound),
            ]
        })
        .collect();
    write_csv(path, command, config, &header, &rows)
}

fn write_grid<C: Serialize>(
    path: &Option<PathBuf>,
    command: &str,
    config: &C,
    model: &BandSpectrum,
    grid: &Grid,
) -> Result<()> {
    let Some(path) = path else {
        return Ok(());
    };
    let values = model.render(grid, 0);
    let rows: Vec<Vec<String>> = grid
        .points()
        .zip(values.values())
        .map(|(x, v)| fmt_row(&[x, *v]))
        .collect();
    write_csv(
        path,
        command,
        config,
        &["x", "value"].map(String::from),
        &rows,
    )
}

fn last_residual(trace: &IterationTrace) -> f64 {
    trace.steps.last().map_or(0.0, |s| s.residual)
}

pub fn reconstruct(args: ReconstructArgs, config: Option<&Path>) -> Result<()> {
    let mut args = overlay(args, config)?;
    let out = require_path(&args.out, "out")?.to_path_buf();
    let file = read_samples(require_path(&args.samples, "samples")?)?;
    let samples: DerivativeSamples = file.samples;
    let sigma = *args.sigma.get_or_insert(file.sigma.unwrap_or(PI));
    let p = samples.points();
    let window = *args.window.get_or_insert((p.first(), p.last()));
    let grid_step = *args.grid_step.get_or_insert(PI / (8.0 * sigma));
    let cfg = ReconstructionConfig {
        sigma,
        k: samples.order(),
        window,
        grid_step,
        max_iterations: args.max_iterations,
        tolerance: args.tolerance,
        projection: args.projection,
        antiderivative: args.antiderivative,
        anchor: args.anchor,
        reproject: args.reproject,
    };
    let truth = load_truth(&args.signal)?;
    let rec = full_recover(&samples, &cfg, truth.as_ref().map(|f| f as _))?;
    let trace = &rec.trace;
    let report = ReconstructReport {
        k: cfg.k,
        points: samples.len(),
        delta: p.delta(),
        gamma: p.gamma(),
        factor: trace.factor,
        guaranteed: trace.guaranteed,
        converged: trace.converged,
        iterations: trace.steps.len(),
        final_residual: last_residual(trace),
        relative_error: relative_error(truth.as_ref(), &rec.model, window, sigma, 0.0)?,
        warning: (!trace.guaranteed).then(|| {
            format!(
                "contraction factor {} >= 1: convergence is not guaranteed",
                trace.factor
            )
        }),
    };
    write_trace(&args.trace, "reconstruct", &args, trace)?;
    write_grid(
        &args.grid_out,
        "reconstruct",
        &args,
        &rec.model,
        &cfg.grid()?,
    )?;
    write_json(&out, "reconstruct", &args, &report)?;
    print_summary(
        &report.relative_error,
        report.iterations,
        report.converged,
        &out,
    );
    Ok(())
}

fn print_summary(rel: &Option<f64>, iterations: usize, converged: bool, out: &Path) {
    let err = rel.map_or(String::new(), |e| format!(", relative error {e:.3e}"));
    let state = if converged { "converged" } else { "stopped" };
    println!(
        "{state} after {iterations} iterations{err}; report in {}",
        out.display()
    );
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameArgs {
    #[arg(long)]
    pub samples: Option<PathBuf>,
    #[arg(long)]
    pub signal: Option<PathBuf>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Band-pass cutoff: spectrum outside `(-2πε, 2πε)`.
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// `analytic`, `empirical` or a number.
    #[arg(long, value_parser = parse_rho, default_value = "analytic")]
    pub rho: RhoChoice,
    #[arg(long, default_value_t = 500)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub grid_out: Option<PathBuf>,
    /// Diagnostics JSON with `A_eps`, `B`, `lambda_min`, `lambda_max`, `rho`.
    #[arg(long)]
    pub diagnostics: Option<PathBuf>,
}

fn parse_rho(s: &str) -> std::result::Result<RhoChoice, String> {
    match s.parse::<f64>() {
        Ok(v) => Ok(RhoChoice::Fixed(v)),
        Err(_) => parse_named(s),
    }
}

#[derive(Debug, Serialize)]
pub struct FrameReport {
    pub k: usize,
    pub points: usize,
    pub delta: f64,
    pub gamma: f64,
    #[serde(rename = "A_eps")]
    pub a_eps: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub rho: f64,
    pub factor: f64,
    pub converged: bool,
    pub iterations: usize,
    pub final_residual: f64,
    pub relative_error: Option<f64>,
}

pub fn frame_reconstruct(args: FrameArgs, config: Option<&Path>) -> Result<()> {
    let mut args = overlay(args, config)?;
    let out = require_path(&args.out, "out")?.to_path_buf();
    let file = read_samples(require_path(&args.samples, "samples")?)?;
    let samples = file.samples;
    let sigma = *args.sigma.get_or_insert(file.sigma.unwrap_or(PI));
    let sub = BandpassSubspace::new(sigma, args.epsilon)?;
    let sys = FrameSystem::new(samples.points().clone(), samples.order(), sub, args.rho)?;
    if let Some(path) = &args.diagnostics {
        write_json(path, "frame-reconstruct", &args, &sys.diagnostics()?)?;
    }
    let cfg = FrameConfig {
        max_iterations: args.max_iterations,
        tolerance: args.tolerance,
    };
    let truth = load_truth(&args.signal)?;
    let (model, trace) = frame_iterate(&samples, &sys, &cfg, truth.as_ref().map(|f| f as _))
        .map_err(|e| match e {
            derivsamp_core::Error::DegenerateBounds => CliError::invalid(
                "lower frame bound is zero: the sampling set is too sparse for this subspace",
            ),
            e => e.into(),
        })?;
    let p = samples.points();
    let report = FrameReport {
        k: sys.k,
        points: samples.len(),
        delta: p.delta(),
        gamma: p.gamma(),
        a_eps: sys.a_eps,
        b: sys.b,
        rho: sys.rho,
        factor: sys.factor,
        converged: trace.converged,
        iterations: trace.steps.len(),
        final_residual: last_residual(&trace),
        relative_error: relative_error(truth.as_ref(), &model, sys.window, sigma, args.epsilon)?,
    };
    write_trace(&args.trace, "frame-reconstruct", &args, &trace)?;
    write_grid(
        &args.grid_out,
        "frame-reconstruct",
        &args,
        &model,
        &sys.grid()?,
    )?;
    write_json(&out, "frame-reconstruct", &args, &report)?;
    print_summary(
        &report.relative_error,
        report.iterations,
        report.converged,
        &out,
    );
    Ok(())
}
