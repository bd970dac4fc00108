//! `mtula`: sampling runs, histograms, rate sweeps, constant reports and
//! assumption checks for the tamed Langevin sampler.
//!
//! Exit codes: 0 success, 1 a checked property was violated, 2 usage or
//! input error, 3 every chain of a run diverged.

mod commands;
mod manifest;
mod settings;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{check, constants, histogram, rate, sample};

#[derive(Debug, Parser)]
#[command(name = "mtula", version, about = "Tamed Langevin sampling experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run independent chains and write their final iterates.
    Sample(sample::SampleArgs),
    /// Histogram of the first components against the analytic marginal.
    Histogram(histogram::HistogramArgs),
    /// Distance to a reference across a step-size grid, with a log-log fit.
    Rate(rate::RateArgs),
    /// Report every constant of the convergence bounds.
    Constants(constants::ConstantsArgs),
    /// Check the growth, convexity and smoothness conditions numerically.
    Check(check::CheckArgs),
}

/// How a command that ran to completion ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Clean,
    Violations,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let diverged = err.chain().any(|cause| {
        matches!(
            cause.downcast_ref::<mtula::Error>(),
            Some(mtula::Error::UniversalDivergence(_) | mtula::Error::Divergence { .. })
        )
    });
    if diverged {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Sample(args) => sample::run(args),
        Command::Histogram(args) => histogram::run(args),
        Command::Rate(args) => rate::run(args),
        Command::Constants(args) => constants::run(args),
        Command::Check(args) => check::run(args),
    };
    match outcome {
        Ok(Status::Clean) => ExitCode::SUCCESS,
        Ok(Status::Violations) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
