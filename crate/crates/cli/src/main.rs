//! `fuzzy-coulomb`: identity verification, bound spectra, S-matrix tables and
//! Casimir checks for the Coulomb-Kepler problem on the fuzzy space.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad configuration.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ConfigError, Format, Layer, Nmax};
use fuzzy_coulomb::spectrum::Branch;

#[derive(Parser)]
#[command(
    name = "fuzzy-coulomb",
    version,
    about = "Coulomb-Kepler problem on the fuzzy space (hbar = m = 1)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Length scale of the fuzzy space.
    #[arg(long)]
    lambda: Option<f64>,
    /// Coupling in V = -q/r; positive is attractive.
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Fock truncation, or `auto` to pick it from the tail bound.
    #[arg(long)]
    nmax: Option<Nmax>,
    /// Largest orbital label.
    #[arg(long)]
    jmax: Option<u32>,
    /// Largest principal number.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_parser = config::branch_arg)]
    branch: Option<Branch>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output directory; tables go to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key = value file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn layer(&self) -> Layer {
        Layer {
            lambda: self.lambda,
            q: self.q,
            nmax: self.nmax,
            jmax: self.jmax,
            n: self.n,
            branch: self.branch,
            format: self.format,
            out: self.out.clone(),
            tolerances: Default::default(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact symbolic and numeric identity suites.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Restrict to these identity names (comma separated or repeated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Identity file replacing the built-in symbolic catalogue.
        #[arg(long)]
        identities: Option<PathBuf>,
        /// Corrupt every numeric identity with a sign error.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Closed-form against diagonalized bound energies.
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
    /// Partial-wave S-matrix on real energies inside the scattering window.
    Scatter {
        #[command(flatten)]
        common: Common,
        /// Energies to evaluate (comma separated).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        energies: Vec<f64>,
        /// Number of evenly spaced energies when none are given.
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Casimir and LRL residuals on constructed eigenstates.
    Casimir {
        #[command(flatten)]
        common: Common,
        /// Also evaluate a non-eigenstate (the identity wave function).
        #[arg(long)]
        control: bool,
    },
}

fn init_threads() -> Result<(), ConfigError> {
    let Ok(v) = std::env::var("FUZZY_COULOMB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ConfigError(format!("FUZZY_COULOMB_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| ConfigError(e.to_string()))
}

fn run(cli: Cli) -> Result<bool, commands::Failure> {
    init_threads()?;
    match cli.command {
        Command::Verify {
            common,
            only,
            identities,
            inject_fault,
        } => {
            let cfg = config::resolve(common.layer(), common.config.as_deref(), commands::verify_defaults())?;
            commands::verify(&cfg, &only, identities.as_deref(), inject_fault)
        }
        Command::Spectrum { common } => {
            let cfg = config::resolve(common.layer(), common.config.as_deref(), Layer::default())?;
            commands::spectrum(&cfg)
        }
        Command::Scatter {
            common,
            energies,
            points,
        } => {
            let cfg = config::resolve(common.layer(), common.config.as_deref(), Layer::default())?;
            commands::scatter(&cfg, &energies, points)
        }
        Command::Casimir { common, control } => {
            let cfg = config::resolve(common.layer(), common.config.as_deref(), commands::casimir_defaults())?;
            commands::casimir(&cfg, control)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(commands::Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
