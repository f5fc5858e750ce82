use std::process::ExitCode;

use clap::Parser;
use mml_cli::{execute, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    tracing_subscriber::fmt().with_writer(std::io::stderr).init();
    match Cli::try_parse() {
        Ok(cli) => execute(cli),
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            if usage {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
