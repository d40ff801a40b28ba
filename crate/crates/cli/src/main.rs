mod commands;
mod config;
mod data;
mod error;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, RunConfig};
use error::{CliError, CliResult};

fn run(cli: Cli) -> CliResult<u8> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::config("CONFIG_INVALID", "--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config("CONFIG_INVALID", format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Estimate(args) => commands::cmd_estimate(&RunConfig::for_estimate(args)?),
        Command::Representation(args) => commands::cmd_representation(&RunConfig::for_representation(args)?),
        Command::Diagnose(args) => commands::cmd_diagnose(&RunConfig::for_diagnose(args)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::config("CONFIG_USAGE", e.to_string().trim_end());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit)
        }
    }
}
