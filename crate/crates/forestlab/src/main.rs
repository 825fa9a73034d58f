use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use forestlab::cli::{run, Cli};
use forestlab::formats::write_all;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| match &cli.out {
        Some(path) => write_all(path, out.body.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(out.body.as_bytes()).map_err(|e| forestlab::CliError::io("<stdout>", e))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("forestlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
