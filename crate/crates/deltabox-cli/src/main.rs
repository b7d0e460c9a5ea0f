//! `deltabox`: file-based front end for the two-particle box solvers.
//!
//! Every subcommand resolves its parameters in one fixed order (command
//! line, then config file, then built-in default), echoes the resolved
//! values into the output header, and writes with fixed float formatting,
//! so identical configurations produce byte-identical files.

mod commands;
mod config;
mod output;

use clap::{ArgAction, Args, Parser, Subcommand};
use std::process::ExitCode;

/// Exit status 2: a parameter or config entry is outside the domain.
pub const EXIT_INVALID: u8 = 2;
/// Exit status 3: a solver or verification failure on valid input.
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "deltabox",
    about = "Spectra, exact reference energies, and blind states of two \
             particles in a box coupled on two displaced diagonals",
    version
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand. All values are optional here; each
/// command fills the gaps from the config file and its own defaults.
#[derive(Args)]
struct GlobalArgs {
    /// Basis cutoff: all pairs with n^2 + m^2 <= nmax^2 [default: 120]
    #[arg(long, global = true)]
    nmax: Option<String>,

    /// Eigensolver residual tolerance [default: 1e-10]
    #[arg(long, global = true)]
    tol: Option<String>,

    /// Output file path; stdout when omitted
    #[arg(long, global = true)]
    out: Option<String>,

    /// Output format: csv or json [default: csv]
    #[arg(long, global = true)]
    format: Option<String>,

    /// Config file with `key = value` lines; flags take precedence
    #[arg(long, global = true)]
    config: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Lowest eigenvalues of one symmetry sector
    Spectrum(SpectrumArgs),
    /// Exact reference ground energies at coincident lines, per sector
    Bethe(BetheArgs),
    /// Spectrum against displacement with level-origin classification
    #[command(name = "sweep-c")]
    SweepC(SweepArgs),
    /// Catalog of interaction-blind states at rational displacements
    Dark(DarkArgs),
    /// Real-space grid of one eigenstate
    Wavefunction(WavefunctionArgs),
    /// Full acceptance suite, one pass/fail line per criterion
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SpectrumArgs {
    /// Exchange sign: +1 or -1 [default: +1]
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    /// Reflection parity sign: +1 or -1 [default: +1]
    #[arg(long, allow_hyphen_values = true)]
    pi: Option<String>,
    /// Coupling strength, >= 0 [default: 1]
    #[arg(long)]
    g: Option<String>,
    /// Line displacement in [0, 1], decimal or fraction p/q [default: 0]
    #[arg(long)]
    c: Option<String>,
    /// Number of eigenvalues [default: 5]
    #[arg(long)]
    k: Option<String>,
    /// Append eigenvector coefficients to the output
    #[arg(long, action = ArgAction::SetTrue)]
    vectors: bool,
}

#[derive(Args)]
struct BetheArgs {
    /// Comma-separated coupling list [default: 1,20,100]
    #[arg(long)]
    g: Option<String>,
    /// Append a diagonalization column and its relative error
    #[arg(long = "with-ed", action = ArgAction::SetTrue)]
    with_ed: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Exchange sign: +1 or -1 [default: +1]
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    /// Reflection parity sign: +1 or -1 [default: +1]
    #[arg(long, allow_hyphen_values = true)]
    pi: Option<String>,
    /// Coupling strength [default: 1e4]
    #[arg(long)]
    g: Option<String>,
    /// First displacement of the grid [default: 0.02]
    #[arg(long = "c-min")]
    c_min: Option<String>,
    /// Last displacement of the grid [default: 0.5]
    #[arg(long = "c-max")]
    c_max: Option<String>,
    /// Number of grid points [default: 25]
    #[arg(long)]
    steps: Option<String>,
    /// Levels resolved per displacement [default: 8]
    #[arg(long)]
    k: Option<String>,
}

#[derive(Args)]
struct DarkArgs {
    /// Largest denominator to catalog [default: 3]
    #[arg(long = "q-max")]
    q_max: Option<String>,
    /// Energy ceiling in units of pi^2 [default: 50]
    #[arg(long = "e-max")]
    e_max: Option<String>,
    /// Single displacement as a fraction p/q; decimals are rejected
    #[arg(long)]
    c: Option<String>,
    /// With --c: list this many tower members of the lowest primitive
    #[arg(long)]
    tower: Option<String>,
    /// Append the measured decoupling residual per row
    #[arg(long, action = ArgAction::SetTrue)]
    verify: bool,
}

#[derive(Args)]
struct WavefunctionArgs {
    /// Exchange sign: +1 or -1 [default: +1]
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    /// Reflection parity sign: +1 or -1 [default: +1]
    #[arg(long, allow_hyphen_values = true)]
    pi: Option<String>,
    /// Coupling strength, >= 0 [default: 1]
    #[arg(long)]
    g: Option<String>,
    /// Line displacement in [0, 1], decimal or fraction p/q [default: 0]
    #[arg(long)]
    c: Option<String>,
    /// Eigenstate index, 0 = ground state [default: 0]
    #[arg(long)]
    level: Option<String>,
    /// Grid points per axis [default: 201]
    #[arg(long)]
    resolution: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only these criteria (repeatable), 1 through 9
    #[arg(long, action = ArgAction::Append)]
    only: Vec<String>,
}

/// A failure carrying its process exit status.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERIC,
            message: message.into(),
        }
    }
}

impl From<deltabox::Error> for Failure {
    fn from(err: deltabox::Error) -> Self {
        match err {
            deltabox::Error::InvalidArgument(_) => Failure::invalid(err.to_string()),
            _ => Failure::numeric(err.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| {
        let cfg = config::Settings::load(&cli.global)?;
        match &cli.command {
            Command::Spectrum(args) => commands::spectrum(args, &cfg),
            Command::Bethe(args) => commands::bethe(args, &cfg),
            Command::SweepC(args) => commands::sweep_c(args, &cfg),
            Command::Dark(args) => commands::dark(args, &cfg),
            Command::Wavefunction(args) => commands::wavefunction(args, &cfg),
            Command::Verify(args) => commands::verify(args, &cfg),
        }
    })();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("deltabox: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
