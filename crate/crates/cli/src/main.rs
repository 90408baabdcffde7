use std::process::ExitCode;

use clap::Parser;
use mltt_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    match run(&cli, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("mltt: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
