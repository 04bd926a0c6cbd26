use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use invmaxian_cli::{run, Cli, EXIT_ERROR, EXIT_OK};

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => ExitCode::from(run(cli)),
        Err(e) => {
            let _ = e.print();
            // clap uses 2 for usage errors, which here means INFEASIBLE
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_OK),
                _ => ExitCode::from(EXIT_ERROR),
            }
        }
    }
}
