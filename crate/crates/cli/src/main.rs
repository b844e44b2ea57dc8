use std::io::{self, BufWriter};
use std::process::ExitCode;

use clap::Parser;
use sgo_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match sgo_cli::run(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sgo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
