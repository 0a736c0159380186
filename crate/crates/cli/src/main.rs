//! cogspeech: command-line front end for the speech-screening pipeline.
//!
//! Exit codes: 0 success (including --help/--version), 1 usage errors,
//! 2 input or format errors, 3 statistical failures (non-convergence,
//! degenerate designs, failed preconditions).

mod commands;
mod manifest;

use std::num::NonZeroUsize;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use cogspeech_core::harness::HarnessError;

use commands::baseline::BaselineArgs;
use commands::extract::ExtractArgs;
use commands::loocv::LoocvArgs;
use commands::report::ReportArgs;
use commands::synth::SynthArgs;

#[derive(Debug, Parser)]
#[command(
    name = "cogspeech",
    version,
    about = "Speech and language analytics for cognitive-impairment screening",
    propagate_version = true
)]
struct Cli {
    /// Worker threads for fold-level parallelism (default: all cores).
    #[arg(long, global = true)]
    threads: Option<NonZeroUsize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Turn a corpus directory into a feature-matrix CSV.
    Extract(ExtractArgs),
    /// Nested leave-one-out evaluation of the elastic-net pipeline.
    Loocv(LoocvArgs),
    /// Demographics-only logistic reference models.
    Baseline(BaselineArgs),
    /// Write a seeded synthetic exam corpus.
    Synth(SynthArgs),
    /// Recompute selection frequencies from a run's fold log.
    Report(ReportArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();

    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.get())
            .build_global()
        {
            eprintln!("error: cannot configure the thread pool: {e}");
            return ExitCode::from(1);
        }
    }

    let result = match &cli.command {
        Command::Extract(args) => commands::extract::run(args),
        Command::Loocv(args) => commands::loocv::run(args, cli.threads),
        Command::Baseline(args) => commands::baseline::run(args),
        Command::Synth(args) => commands::synth::run(args),
        Command::Report(args) => commands::report::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// 2 for problems with what was handed to the tool, 3 for problems with
/// what the statistics could do with it.
fn exit_code(err: &HarnessError) -> u8 {
    match err {
        HarnessError::Corpus(_)
        | HarnessError::Acoustic(_)
        | HarnessError::Text(_)
        | HarnessError::Io(_)
        | HarnessError::Invalid(_) => 2,
        HarnessError::Glm(_) | HarnessError::Metrics(_) | HarnessError::Precondition(_) => 3,
    }
}
