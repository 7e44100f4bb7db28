mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Why a command stopped; each maps to one exit status.
#[derive(Debug)]
pub enum Failure {
    Verification,
    Usage(String),
    Numerical(String),
}

impl From<concentration::Error> for Failure {
    fn from(e: concentration::Error) -> Self {
        match e {
            concentration::Error::InvalidArgument(msg) => Failure::Usage(msg),
            concentration::Error::NumericalFailure(msg) => Failure::Numerical(msg),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(format!("{e:#}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Report(a) => commands::report(a),
        Command::Kernel(a) => commands::kernel(a),
        Command::Gram(a) => commands::gram(a),
        Command::BargmannCheck(a) => commands::bargmann(a),
        Command::Verify(a) => commands::verify(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
