//! `lambda-osc` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 domain or
//! numerical failure, 3 a check or comparison outside its tolerance.

mod args;
mod commands;
mod output;

use std::fs;
use std::io;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{Map, Value};

use args::{merge, Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(io::Error),
    Lib(lambda_osc::Error),
    Check(String),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<lambda_osc::Error> for CliError {
    fn from(e: lambda_osc::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use lambda_osc::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Lib(
                E::InvalidArgument(_) | E::KindMismatch { .. } | E::UnsupportedChart(_),
            ) => 1,
            CliError::Lib(_) => 2,
            CliError::Check(_) => 3,
        }
    }

    fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Lib(e) => e.code(),
            CliError::Check(_) => "check_failed",
        }
    }

    fn report(&self) {
        let msg = match self {
            CliError::Usage(m) | CliError::Check(m) => m.clone(),
            CliError::Io(e) => e.to_string(),
            CliError::Lib(e) => e.to_string(),
        };
        eprintln!("error[{}]: {msg}", self.code());
        if matches!(self, CliError::Usage(_)) {
            eprintln!("\nFor more information, try '--help'.");
        }
    }
}

fn load_config(cli: &Cli) -> Result<Option<Map<String, Value>>, CliError> {
    let Some(path) = &cli.config else {
        return Ok(None);
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(m)) => Ok(Some(m)),
        Ok(_) => Err(CliError::Usage("config must be a JSON object".into())),
        Err(e) => Err(CliError::Usage(format!("config {}: {e}", path.display()))),
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("LAMBDA_OSC_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "LAMBDA_OSC_THREADS must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    init_threads()?;
    let config = load_config(cli)?;
    let cfg = config.as_ref();
    let name = cli.command.name();
    let report = match &cli.command {
        Command::Simulate(a) => commands::simulate(&merge(a, cfg, name)?),
        Command::Invariants(a) => commands::invariants(&merge(a, cfg, name)?),
        Command::Chart(a) => commands::chart(&merge(a, cfg, name)?),
        Command::Spectrum1d(a) => commands::spectrum1d(&merge(a, cfg, name)?),
        Command::Spectrum2d(a) => commands::spectrum2d(&merge(a, cfg, name)?),
        Command::Polynomials(a) => commands::polynomials(&merge(a, cfg, name)?),
        Command::Verify(a) => commands::verify(&merge(a, cfg, name)?),
    }?;
    match report.failed {
        Some(msg) => Err(CliError::Check(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.report();
            ExitCode::from(e.exit_code())
        }
    }
}
