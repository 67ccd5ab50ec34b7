use std::process::ExitCode;

use clap::Parser;
use waug::cli::{main_with, Cli};

fn main() -> ExitCode {
    ExitCode::from(main_with(Cli::parse()))
}
