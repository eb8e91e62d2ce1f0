mod commands;
mod run;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "biqutrit", version, about = "Biphoton qutrit preparation and tomography runs")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
pub struct Common {
    /// Run directory (default: <output root>/<command>-<scenario hash>).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Scenario JSON; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overwrite existing outputs.
    #[arg(long, global = true)]
    pub force: bool,
    /// Root for run directories.
    #[arg(long, global = true, env = "BIQUTRIT_OUT", default_value = "runs")]
    pub out_root: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Twelve-state table and its unbiasedness report.
    Mub {
        /// Emit one basis only (0 to 3).
        #[arg(long)]
        basis: Option<usize>,
        /// Perturb one state before checking (self-test of the failure path).
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Poisson counts for the nine-row protocol.
    Simulate {
        #[arg(long)]
        state: Option<String>,
        /// Mean expected counts per protocol row.
        #[arg(long)]
        events: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        background: Option<f64>,
    },
    /// Density matrix from a counts file.
    Reconstruct {
        /// Counts JSON written by `simulate`.
        counts: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Mle)]
        method: Method,
        /// State to report fidelity against.
        #[arg(long)]
        target: Option<String>,
        /// Iteration budget of the likelihood maximization.
        #[arg(long, default_value_t = 10_000)]
        max_iterations: usize,
    },
    /// Coincidence rate against a swept preparation phase.
    Scan {
        #[arg(long, value_enum, default_value_t = ScanKind::Orthogonality)]
        kind: ScanKind,
        /// Tuned state for orthogonality scans.
        #[arg(long)]
        state: Option<String>,
        #[arg(long, default_value_t = 361)]
        points: usize,
        /// Expected counts at the peak; adds a Poisson series.
        #[arg(long)]
        events: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        background: Option<f64>,
        /// Fixed φ13 of orthogonality scans, degrees.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi13_deg: f64,
        /// Transformer quarter-wave plate angle for waveplate scans, degrees.
        #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
        plate_deg: f64,
        /// Piezo calibration, degrees of phase per volt.
        #[arg(long, default_value_t = 51.7)]
        deg_per_volt: f64,
    },
    /// Monte Carlo fidelity quantiles of maximum-likelihood reconstructions.
    Quantiles {
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        events: Option<f64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Linear,
    Mle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    StInterference,
    Orthogonality,
    Waveplate,
}

/// Failure classes and their exit codes.
pub enum Failure {
    Input(anyhow::Error),
    Check(String),
    NoConvergence(String),
}

impl From<biqutrit::Error> for Failure {
    fn from(e: biqutrit::Error) -> Self {
        Failure::Input(e.into())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let result = match cli.command {
        Command::Mub { basis, corrupt } => commands::mub(c, basis, corrupt),
        Command::Simulate {
            state,
            events,
            seed,
            background,
        } => commands::simulate(c, state, events, seed, background),
        Command::Reconstruct {
            counts,
            method,
            target,
            max_iterations,
        } => commands::reconstruct(c, &counts, method, target, max_iterations),
        Command::Scan {
            kind,
            state,
            points,
            events,
            seed,
            background,
            phi13_deg,
            plate_deg,
            deg_per_volt,
        } => commands::scan(
            c,
            commands::ScanArgs {
                kind,
                state,
                points,
                events,
                seed,
                background,
                phi13_deg,
                plate_deg,
                deg_per_volt,
            },
        ),
        Command::Quantiles {
            state,
            events,
            trials,
            seed,
        } => commands::quantiles(c, state, events, trials, seed),
    };
    match result {
        Ok(dir) => {
            println!("{}", dir.display());
            ExitCode::SUCCESS
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::NoConvergence(msg)) => {
            eprintln!("not converged: {msg}");
            ExitCode::from(3)
        }
    }
}
