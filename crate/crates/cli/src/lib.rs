//! Command-line front end for `derivsamp-core`.
//!
//! Every command reads its parameters from flags, optionally overridden by a
//! JSON file given with `--config`, and echoes the resolved parameters into
//! each artifact it writes. JSON artifacts carry them under `config`; CSV
//! artifacts carry them in a leading `#` comment line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod files;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "derivsamp",
    version,
    about = "Derivative sampling of bandlimited functions"
)]
pub struct Cli {
    /// JSON file whose keys override the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print ν_k, μ_{2k-1}, C(k), the sampling bounds and δσ/ν_k as JSON.
    Constants(commands::constants::ConstantsArgs),
    /// Generate a test signal.
    GenSignal(commands::signal::GenSignalArgs),
    /// Sample a signal and its derivatives on a point set.
    Sample(commands::signal::SampleArgs),
    /// Reconstruct from derivative samples by the contraction iteration.
    Reconstruct(commands::reconstruct::ReconstructArgs),
    /// Reconstruct a band-pass signal by the frame algorithm.
    FrameReconstruct(commands::reconstruct::FrameArgs),
    /// Empirical frame bounds over a range of maximum gaps.
    StabilitySweep(commands::sweep::SweepArgs),
    /// Run a built-in property suite and print PASS/FAIL per property.
    Verify(commands::verify::VerifyArgs),
}

/// Runs a parsed command line, writing human-readable output to stdout.
pub fn run(cli: Cli) -> Result<()> {
    let config = cli.config.as_deref();
    match cli.command {
        Command::Constants(a) => commands::constants::run(a, config),
        Command::GenSignal(a) => commands::signal::gen_signal(a, config),
        Command::Sample(a) => commands::signal::sample(a, config),
        Command::Reconstruct(a) => commands::reconstruct::reconstruct(a, config),
        Command::FrameReconstruct(a) => commands::reconstruct::frame_reconstruct(a, config),
        Command::StabilitySweep(a) => commands::sweep::run(a, config),
        Command::Verify(a) => commands::verify::run(a, config),
    }
}
