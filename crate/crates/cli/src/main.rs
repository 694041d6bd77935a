use std::process::ExitCode;

use clap::Parser;
use opt_foundry_cli::{run_command, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run_command(&cfg) {
        Ok(outcome) => {
            if cfg.out.is_none() {
                print!("{}", outcome.text);
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
