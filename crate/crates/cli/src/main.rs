use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use formalflows_cli::{run, Cli, Job};

fn main() -> ExitCode {
    let outcome = Job::from_env(Cli::parse()).and_then(|job| run(&job));
    match outcome {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(formalflows_cli::EXIT_IO as u8);
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code as u8)
        }
    }
}
