use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use derivsamp_core::analysis::{stability_sweep, SetFamily, SweepConfig};
use serde::{Deserialize, Serialize};

use super::require_path;
use crate::error::{CliError, Result};
use crate::output::{fmt_row, overlay, write_csv};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    #[default]
    Uniform,
    /// `Λ_N` rescaled to the requested maximum gap.
    LambdaN,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = PI)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = Family::Uniform)]
    pub family: Family,
    /// `N` of the `Λ_N` family.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Ascending comma-separated maximum gaps.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub gaps: Vec<f64>,
    /// Largest real dimension of the test subspace.
    #[arg(long, default_value_t = 100)]
    pub test_dimension: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: SweepArgs, config: Option<&Path>) -> Result<()> {
    let args = overlay(args, config)?;
    let out = require_path(&args.out, "out")?;
    if args.gaps.is_empty() {
        return Err(CliError::invalid("missing required parameter `gaps`"));
    }
    let family = match args.family {
        Family::Uniform => SetFamily::Uniform,
        Family::LambdaN => SetFamily::LambdaN { n: args.n },
    };
    let mut cfg = SweepConfig::new(args.k, args.sigma, family);
    cfg.epsilon = args.epsilon;
    cfg.test_dimension = args.test_dimension;
    let rows = stability_sweep(&cfg, &args.gaps)?;
    let header = ["delta", "lambda_min", "lambda_max", "A_eps_analytic"].map(String::from);
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| fmt_row(&[r.delta, r.lambda_min, r.lambda_max, r.a_eps_analytic]))
        .collect();
    write_csv(out, "stability-sweep", &args, &header, &table)?;
    for r in &rows {
        println!("delta {:<8} lambda_min {:.6e}", r.delta, r.lambda_min);
    }
    Ok(())
}
