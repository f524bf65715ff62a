//! `lidkit` command-line tool.

mod args;
mod common;
mod detect;
mod estimate;
mod gen;
mod sanity;
mod score;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use common::UsageError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    env_logger::Builder::from_env(
        env_logger::Env::default().default_filter_or(if cli.verbose { "info" } else { "warn" }),
    )
    .init();

    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(UsageError::new("--threads must be at least 1").into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    match cli.command {
        Command::GenSynthetic(a) => gen::run(a),
        Command::Estimate(a) => estimate::run(a),
        Command::Detect(a) => detect::run(a),
        Command::Score(a) => score::run(a),
        Command::Sanity(a) => sanity::run(a),
    }
}
