use std::process::ExitCode;

use clap::Parser;
use doomsight::cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("doomsight: {e}");
            ExitCode::from(1)
        }
    }
}
