use std::process::ExitCode;

use clap::Parser;
use descm_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli
        .manifest()
        .map_err(anyhow::Error::new)
        .and_then(|m| run(&m, &mut std::io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
