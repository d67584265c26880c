//! Binary entry point: argument parsing, thread-pool setup, and the mapping
//! from library errors to process exit codes (0 success, 1 validation,
//! 2 data, 3 numeric).

use clap::error::ErrorKind;
use clap::Parser;

use olp::cli::{Args, RunConfig};
use olp::error::{Error, Result};

fn setup_threads() -> Result<()> {
    if let Ok(raw) = std::env::var("OLP_THREADS") {
        let threads: usize = raw
            .parse()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| {
                Error::Argument(format!(
                    "OLP_THREADS must be a positive integer, got {raw:?}"
                ))
            })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Argument(format!("thread pool setup failed: {e}")))?;
    }
    Ok(())
}

fn run() -> Result<()> {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(Error::Argument(e.to_string())),
    };
    setup_threads()?;
    RunConfig::from_args(args)?.run()
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
