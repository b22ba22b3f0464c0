use std::process::ExitCode;

use clap::Parser;

mod commands;
mod error;

use commands::Cli;
use error::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help, --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", CliError::Usage(e.to_string()).record());
            return ExitCode::FAILURE;
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            if let Some(out) = err.stdout() {
                print!("{out}");
            }
            eprintln!("{}", err.record());
            ExitCode::from(err.exit_code())
        }
    }
}
