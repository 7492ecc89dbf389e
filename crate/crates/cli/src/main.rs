use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use resval_cli::output::render;
use resval_cli::{run, Cli};

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
    match run(&cli.command) {
        Ok(outcome) => {
            // A closed pipe is not an error worth reporting.
            let _ = writeln!(
                std::io::stdout().lock(),
                "{}",
                render(&outcome.value, cli.format)
            );
            if let Some(v) = &outcome.violation {
                eprintln!("error: invariant violated: {v}");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
