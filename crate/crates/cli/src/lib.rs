//! Command-line front end for `ringwalk`: graph generation, the per-graph
//! commands, and the benchmark recipes.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod repro;
pub mod source;

use std::fs::File;
use std::io::BufWriter;

use args::{Cli, Command};
pub use error::CliError;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        // Fails only if a pool already exists, in which case that pool is used.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let report = match &cli.command {
        Command::Generate(args) => {
            if let Some(truth) = commands::generate(args, cli.seed, cli.output.as_deref())? {
                eprintln!("ground truth written to {}", truth.display());
            }
            return Ok(());
        }
        Command::Rwm(args) => commands::rwm(args, cli.seed)?,
        Command::Community(args) => commands::community(args, cli.seed)?,
        Command::Report(args) => commands::report(args, cli.seed)?,
        Command::Repro(args) => repro::run(args, cli.seed)?,
    };
    match &cli.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            report.write(cli.format, BufWriter::new(file))?;
        }
        None => report.write(cli.format, std::io::stdout().lock())?,
    }
    Ok(())
}
