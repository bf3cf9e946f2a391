//! Command-line surface: analytic curves, stream simulation, histogram
//! estimation, route comparison and the six-curve figure bundle.

mod commands;
mod manifest;
mod output;
mod stream_io;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{analytic, compare, estimate, figure2, simulate};

/// Photon-stream correlation toolkit.
#[derive(Parser)]
#[command(name = "g2kit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an analytic g²(τ) curve and export it.
    Analytic(analytic::Args),
    /// Simulate a photon timestamp stream.
    Simulate(simulate::Args),
    /// Estimate g²(τ) from a timestamp file.
    Estimate(estimate::Args),
    /// Compute two routes on a shared grid and report their difference.
    Compare(compare::Args),
    /// Emit the six-curve correlation family.
    Figure2(figure2::Args),
}

/// Process failure with its exit status: 2 usage, 3 validation,
/// 4 numeric, 5 I/O. `compare` additionally exits 1 on a tolerance miss.
#[derive(Debug)]
pub struct AppError {
    pub code: u8,
    pub message: String,
}

impl AppError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
    pub fn validation(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }
    pub fn numeric(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }
    pub fn io(message: impl Into<String>) -> Self {
        Self { code: 5, message: message.into() }
    }
}

impl From<g2kit_core::Error> for AppError {
    fn from(err: g2kit_core::Error) -> Self {
        use g2kit_core::Error::*;
        match err {
            Domain(_) => AppError::usage(err.to_string()),
            Unsorted { .. } | Estimation(_) | Shape(_) => AppError::validation(err.to_string()),
            Pole | Capacity { .. } | Numeric { .. } => AppError::numeric(err.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(err: std::io::Error) -> Self {
        AppError::io(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analytic(args) => analytic::run(args),
        Command::Simulate(args) => simulate::run(args),
        Command::Estimate(args) => estimate::run(args),
        Command::Compare(args) => compare::run(args),
        Command::Figure2(args) => figure2::run(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
