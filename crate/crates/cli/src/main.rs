#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{FileConfig, Params, Target};
use error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "oat",
    version,
    about = "One-axis-twisting squeezing: sweeps, optima, oracle checks and disorder Monte Carlo"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal squeezing versus squeezing time, with and without decoherence
    SqueezeCurve {
        #[command(flatten)]
        params: Params,
    },
    /// Optimal squeezing time or optimal metrological sensitivity
    OptimalPoint {
        #[arg(long, value_enum)]
        target: Option<Target>,
        #[command(flatten)]
        params: Params,
    },
    /// Signal-to-noise ratio and sensitivity versus squeezing time
    Metrology {
        #[command(flatten)]
        params: Params,
    },
    /// Run an oracle verification suite (or `all`)
    Verify {
        /// lindblad | factorization | appendix_b | appendix_c | kraus | metrology_oracle | constants | all
        suite: Option<String>,
        /// Inclusive spin-count range, e.g. 2..8
        #[arg(long)]
        n_range: Option<String>,
        #[command(flatten)]
        params: Params,
    },
    /// Monte Carlo average of the squeezing ratio over Gaussian coupling disorder
    InhomoMc {
        /// Quadrature angle (defaults to the uniform-coupling optimum)
        #[arg(long, allow_hyphen_values = true)]
        angle: Option<f64>,
        #[command(flatten)]
        params: Params,
    },
}

fn load(params: Params) -> Result<(Params, FileConfig), CliError> {
    let file = match &params.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    Ok((params.merge(&file), file))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::SqueezeCurve { params } => commands::squeeze_curve::run(&load(params)?.0),
        Command::Metrology { params } => commands::metrology::run(&load(params)?.0),
        Command::OptimalPoint { target, params } => {
            let (params, file) = load(params)?;
            commands::optimal_point::run(&params, target.or(file.target).unwrap_or_default())
        }
        Command::Verify { suite, n_range, params } => {
            let (params, file) = load(params)?;
            commands::verify::run(&params, suite.or(file.suite).as_deref(), n_range.or(file.n_range).as_deref())
        }
        Command::InhomoMc { angle, params } => {
            let (params, file) = load(params)?;
            commands::inhomo_mc::run(&params, angle.or(file.angle))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
