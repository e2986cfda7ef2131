use std::process::ExitCode;

use clap::Parser;
use qmono_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if outcome.violations > 0 {
                eprintln!("qmono: {} violation(s) found; see the report", outcome.violations);
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("qmono: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
