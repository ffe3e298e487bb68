use std::f64::consts::PI;
use std::path::Path;

use clap::Args;
use derivsamp_core::constants::{c_of_k, contraction_factor, frame_bounds, nu, schmidt_mu};
use serde::{Deserialize, Serialize};

use super::require;
use crate::error::{CliError, Result};
use crate::output::{json_text, overlay, write_atomic};

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub k: Option<usize>,
    /// Maximum gap.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = PI)]
    pub sigma: f64,
    /// Minimum separation.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct ConstantsReport {
    pub nu: f64,
    pub mu: u64,
    pub c_k: u64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub factor: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

pub fn report(args: &ConstantsArgs) -> Result<ConstantsReport> {
    let k = require(args.k, "k")?;
    let delta = require(args.delta, "delta")?;
    let gamma = require(args.gamma, "gamma")?;
    if k == 0 {
        return Err(CliError::invalid("k must be >= 1"));
    }
    let bounds = frame_bounds(k, delta, args.sigma, gamma)?;
    let factor = contraction_factor(k, delta, args.sigma)?;
    Ok(ConstantsReport {
        nu: nu(k)?,
        mu: schmidt_mu(2 * k as u64 - 1),
        c_k: c_of_k(k as u64)?,
        a: bounds.a,
        b: bounds.b,
        factor,
        warning: bounds.degenerate.then(|| {
            format!(
                "delta*sigma/nu_k = {factor} >= 1: no stable-sampling guarantee, A reported as 0"
            )
        }),
    })
}

pub fn run(args: ConstantsArgs, config: Option<&Path>) -> Result<()> {
    let args = overlay(args, config)?;
    let rep = report(&args)?;
    let text = json_text("constants", &args, &rep);
    if let Some(out) = &args.out {
        write_atomic(out, text.as_bytes())?;
    }
    print!("{text}");
    Ok(())
}
