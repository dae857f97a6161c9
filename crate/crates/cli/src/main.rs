use std::process::ExitCode;

use clap::Parser;
use saddle_cli::{run, Cli, RunError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                RunError::Usage(msg) => eprintln!("error: {msg}"),
                RunError::Verification(failed) => {
                    eprintln!("{} check(s) failed:", failed.len());
                    for f in failed {
                        eprintln!("  {f}");
                    }
                }
                RunError::Runtime(err) => eprintln!("error: {err:#}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
