//! `solwave`: standing waves of the 1-D nonlinear Schrödinger equation with
//! an implicit algebraic nonlinearity. Computes branch values, soliton
//! profiles, mass curves, minimizer classifications, constrained-Hessian
//! verdicts and split-step stability probes, with CSV/SVG output.
//!
//! Exit codes: 0 success, 2 validation failure, 3 I/O failure, 4 numerical
//! abort (blow-up detection).

mod commands;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use solwave_core::{CubicParams, Error};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
    Numerical(String),
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::BlowUp { .. } => CliError::Numerical(err.to_string()),
            _ => CliError::Validation(err.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "solwave",
    version,
    about = "Standing waves of the 1-D NLS with algebraic nonlinearity: curves, classification, profiles, Hessian checks, evolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ParamArgs {
    /// Cubic coefficient a (> 0)
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    /// Cubic coefficient b
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    /// Cubic coefficient c (> 0)
    #[arg(long, allow_negative_numbers = true)]
    c: f64,
}

#[derive(Args)]
pub struct EvalArgs {
    /// Amplitudes at which to evaluate the branch and the nonlinearity
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    s: Vec<f64>,
    /// Frequencies at which to evaluate crest, mass curve, slope and energy
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    omega: Vec<f64>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ProfileArgs {
    /// Frequency of the standing wave
    #[arg(long, allow_negative_numbers = true)]
    omega: f64,
    /// Grid half-count (the grid carries 2n+1 points)
    #[arg(long, default_value_t = 2048)]
    n: usize,
    /// Grid half-width (default max(20, 30/sqrt(omega)))
    #[arg(long)]
    half_width: Option<f64>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct RangeArgs {
    /// Lower end of the frequency range (default omega-max / samples)
    #[arg(long)]
    omega_min: Option<f64>,
    /// Upper end of the frequency range
    #[arg(long, default_value_t = 3.0)]
    omega_max: f64,
    /// Number of sample intervals
    #[arg(long, default_value_t = 600)]
    samples: usize,
    /// CSV output path
    #[arg(long, default_value = "curve.csv")]
    out_csv: PathBuf,
    /// SVG output path
    #[arg(long, default_value = "curve.svg")]
    out_svg: PathBuf,
}

#[derive(Args)]
pub struct LevelArgs {
    /// Mass level to classify
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    /// Optional CSV output path
    #[arg(long)]
    out_csv: Option<PathBuf>,
}

#[derive(Args)]
pub struct HessianArgs {
    /// Frequency of the minimizer to probe
    #[arg(long, allow_negative_numbers = true)]
    omega: f64,
    /// Grid half-count (the probe also refines to 2n)
    #[arg(long, default_value_t = 4096)]
    n: usize,
    /// Grid half-width (default max(20, 40/sqrt(omega)))
    #[arg(long)]
    half_width: Option<f64>,
    /// Optional CSV output path
    #[arg(long)]
    out_csv: Option<PathBuf>,
}

#[derive(Args)]
pub struct EvolveArgs {
    /// Frequency of the standing wave
    #[arg(long, allow_negative_numbers = true)]
    omega: f64,
    /// Perturbation size in H1 (0 runs the pure standing wave)
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    eps: f64,
    /// Time horizon
    #[arg(long = "T", visible_alias = "horizon", default_value_t = 50.0)]
    horizon: f64,
    /// Perturbation shape: even-bump, odd-bump or phase-ramp
    #[arg(long, default_value = "even-bump")]
    mode: String,
    /// Time step
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Grid half-count (2n points, power of two)
    #[arg(long, default_value_t = 1024)]
    n: usize,
    /// Grid half-width (default max(20, 24/sqrt(omega)))
    #[arg(long)]
    half_width: Option<f64>,
    /// Number of sample intervals along the run
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Seed recorded for reproducibility of randomized modes
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output path
    #[arg(long, default_value = "evolve.csv")]
    out_csv: PathBuf,
    /// SVG output path
    #[arg(long, default_value = "evolve.svg")]
    out_svg: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the branch V and nonlinearity G (--s) or the closed-form
    /// curves (--omega)
    Eval {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        args: EvalArgs,
    },
    /// Sample a soliton profile to CSV
    Profile {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        args: ProfileArgs,
    },
    /// Mass curve with critical frequencies, CSV + SVG
    Curve {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        args: RangeArgs,
    },
    /// Classify the minimizers at a mass level
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        args: LevelArgs,
    },
    /// Locate the two-minimizer level lambda_2
    Lambda2 {
        #[command(flatten)]
        params: ParamArgs,
        /// Optional CSV output path
        #[arg(long)]
        out_csv: Option<PathBuf>,
    },
    /// Constrained-Hessian degeneracy probe
    Hessian {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        args: HessianArgs,
    },
    /// Evolve a perturbed standing wave and track the orbit distance
    Evolve {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        args: EvolveArgs,
    },
}

fn validate(params: &ParamArgs) -> Result<CubicParams, CliError> {
    Ok(CubicParams::new(params.a, params.b, params.c)?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval { params, args } => commands::cmd_eval(&validate(&params)?, &args),
        Command::Profile { params, args } => commands::cmd_profile(&validate(&params)?, &args),
        Command::Curve { params, args } => commands::cmd_curve(&validate(&params)?, &args),
        Command::Classify { params, args } => commands::cmd_classify(&validate(&params)?, &args),
        Command::Lambda2 { params, out_csv } => {
            commands::cmd_lambda2(&validate(&params)?, out_csv.as_deref())
        }
        Command::Hessian { params, args } => commands::cmd_hessian(&validate(&params)?, &args),
        Command::Evolve { params, args } => commands::cmd_evolve(&validate(&params)?, &args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}
