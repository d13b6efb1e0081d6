mod commands;
mod error;
mod image_io;
mod manifest;
mod sweep_config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sik_core::operators::Boundary;
use sik_core::simulation::PhantomVariant;
use sik_core::solvers::{Init, Strategy};

/// Sparse image restoration by iterative weighted shrinkage-thresholding.
///
/// Exit codes: 0 success, 1 I/O or input parse error, 2 usage or config
/// error, 3 numerical divergence.
#[derive(Debug, Parser)]
#[command(name = "sik", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a Shepp-Logan phantom as CSV and PGM.
    Phantom(PhantomArgs),
    /// Blur an image with a uniform kernel and add Gaussian noise.
    Degrade(DegradeArgs),
    /// Restore a degraded image with one solver run.
    Restore(RestoreArgs),
    /// Run a hyperparameter sweep described by a config file.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Standard,
    Modified,
}

impl From<VariantArg> for PhantomVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Standard => PhantomVariant::Standard,
            VariantArg::Modified => PhantomVariant::Modified,
        }
    }
}

#[derive(Debug, Args)]
struct PhantomArgs {
    /// Side length in pixels (at least 16).
    #[arg(long)]
    size: usize,
    /// Intensity table.
    #[arg(long, value_enum, default_value_t = VariantArg::Standard)]
    variant: VariantArg,
    /// Output prefix; writes PREFIX.csv, PREFIX.pgm, PREFIX.manifest.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct DegradeArgs {
    /// Input image, float CSV or binary PGM.
    #[arg(long)]
    input: PathBuf,
    /// Standard deviation of the additive noise.
    #[arg(long, default_value_t = 1e-2)]
    sigma: f64,
    /// Odd side length of the uniform blur kernel.
    #[arg(long, default_value_t = 5)]
    kernel: usize,
    /// Noise seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = Boundary::Circular)]
    boundary: Boundary,
    /// Output prefix.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct RestoreArgs {
    /// Degraded image, float CSV or binary PGM.
    #[arg(long)]
    input: PathBuf,
    /// Ground truth; enables MAE in the trace and on stdout.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// One of ista, eriwsta, irl1, wlp, nw4.
    #[arg(long)]
    strategy: Strategy,
    /// Regularization weight.
    #[arg(long)]
    beta: f64,
    /// Entropy temperature (eriwsta only, required there).
    #[arg(long)]
    gamma: Option<f64>,
    /// Weight smoothing (irl1, wlp, nw4 only, required there).
    #[arg(long)]
    delta: Option<f64>,
    /// Exponent in (0, 1) (wlp, nw4 only).
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 100)]
    iters: usize,
    /// Stop once the relative change of the iterate drops below this (0 disables).
    #[arg(long, default_value_t = 0.0)]
    tol: f64,
    /// Seed for the step-size estimate.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "zero")]
    init: Init,
    /// Blur kernel of the forward model.
    #[arg(long, default_value_t = 5)]
    kernel: usize,
    #[arg(long, default_value_t = Boundary::Circular)]
    boundary: Boundary,
    /// Haar decomposition levels.
    #[arg(long, default_value_t = 2)]
    levels: u32,
    /// Record every k-th iteration in the trace.
    #[arg(long, default_value_t = 1)]
    trace_stride: usize,
    /// Fill the wall_ms trace column.
    #[arg(long)]
    record_timing: bool,
    /// Output prefix.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Sweep config (flat `key = value` file).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Phantom(a) => commands::phantom(&a),
        Command::Degrade(a) => commands::degrade(&a),
        Command::Restore(a) => commands::restore(&a),
        Command::Sweep(a) => commands::sweep(&a),
    };
    match result {
        Ok(()) => ExitCode::from(error::EXIT_OK as u8),
        Err(e) => {
            eprintln!("sik: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
