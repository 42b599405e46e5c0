//! `wavequbit`: synthesize signals, compute wavelet maps, reconstruct,
//! encode map points as qubits and relate qubit pairs.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wavequbit::{ScaleWeighting, WaveletKind};

use crate::config::{Overrides, RunConfig};
use crate::error::{CliError, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(name = "wavequbit", version, about = "Wavelet maps and wavelet-coefficient qubits")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Flat `key = value` config file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for outputs given as relative paths.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Zero threshold for Bell conditions, relative to max |U|.
    #[arg(long, global = true)]
    tol_bell: Option<f64>,
    /// Tolerance for the separability test.
    #[arg(long, global = true)]
    tol_sep: Option<f64>,
    #[arg(long, global = true)]
    omega_min: Option<f64>,
    #[arg(long, global = true)]
    omega_max: Option<f64>,
    #[arg(long, global = true)]
    omega_count: Option<usize>,
    /// Shift-grid spacing as a multiple of the signal's sample spacing.
    #[arg(long, global = true)]
    stride: Option<usize>,
    /// mexican-hat or morlet.
    #[arg(long, global = true)]
    wavelet: Option<WaveletKind>,
    /// unitary or literal.
    #[arg(long, global = true)]
    weighting: Option<ScaleWeighting>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a signal made of Gabor bursts.
    Synth(commands::SynthArgs),
    /// Compute the wavelet map of a signal.
    Transform(commands::TransformArgs),
    /// Rebuild a signal from a wavelet map.
    Reconstruct(commands::ReconstructArgs),
    /// Encode two map points as a qubit.
    Encode(commands::EncodeArgs),
    /// Relate two qubits and classify the result.
    Relate(commands::RelateArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = cli.global;
    let overrides = Overrides {
        wavelet: g.wavelet,
        weighting: g.weighting,
        omega_min: g.omega_min,
        omega_max: g.omega_max,
        omega_count: g.omega_count,
        stride: g.stride,
        tol_bell: g.tol_bell,
        tol_sep: g.tol_sep,
        out_dir: g.out_dir,
    };
    let cfg = RunConfig::resolve(g.config.as_deref(), &overrides)?;
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| {
        CliError::usage(format!("cannot create {}: {e}", cfg.out_dir.display()))
    })?;
    let name = match &cli.command {
        Command::Synth(_) => "synth",
        Command::Transform(_) => "transform",
        Command::Reconstruct(_) => "reconstruct",
        Command::Encode(_) => "encode",
        Command::Relate(_) => "relate",
    };
    match cli.command {
        Command::Synth(args) => commands::synth(&cfg, args)?,
        Command::Transform(args) => commands::transform(&cfg, args)?,
        Command::Reconstruct(args) => commands::reconstruct(&cfg, args)?,
        Command::Encode(args) => commands::encode(&cfg, args)?,
        Command::Relate(args) => commands::relate(&cfg, args)?,
    }
    let meta = cfg.output_path("run.meta".as_ref());
    std::fs::write(&meta, cfg.to_meta(name))
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", meta.display())))
}
