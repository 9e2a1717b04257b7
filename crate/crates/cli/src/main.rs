mod commands;
mod config;
mod failure;
mod run_dir;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Spectral experiments for the radial nonlinear wave equation on the
/// cylinder with random data.
///
/// Every command except `zeros` and `modes` reads a strict JSON config and
/// writes its tables together with a `manifest.json` into a fresh run
/// directory.
#[derive(Debug, Parser)]
#[command(name = "cylnlw", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON configuration; unknown keys are rejected.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Run directory for outputs; must be missing or empty.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Replaces the seed given in the configuration.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Worker threads. Outputs do not depend on this.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bessel zeros and their deviation from the McMahon asymptote.
    Zeros {
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Mode lattice listing and the multiplicity histogram.
    Modes {
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        nprime_max: Option<usize>,
        #[arg(long)]
        z_max: Option<f64>,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Draws random initial data and reports their norms.
    Sample,
    /// Monte Carlo tail probabilities of a norm of random data.
    Tails,
    /// Nonlinear local solve from one initial datum.
    Evolve,
    /// High/low frequency decomposition run.
    Highlow,
    /// Admissibility region scan and the supercritical threshold.
    Admissible,
    /// Strichartz and embedding ratio diagnostics.
    Diagnose,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match commands::dispatch(&cli.common, &cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error());
            ExitCode::from(failure.code())
        }
    }
}
