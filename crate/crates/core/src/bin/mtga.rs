//! Command-line runner for experiment configs.
//!
//! Exit codes: 0 success, 1 configuration error, 2 runtime failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mtga::experiment::{load_config, run_experiment, score_directory};
use mtga::report::emit_reports;
use mtga::Error;

#[derive(Parser)]
#[command(name = "mtga", version, about = "Multi-task evolutionary optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config (or rerun a manifest.json).
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute summary.json and scores.csv from the traces of a directory.
    Score {
        #[arg(long = "in")]
        dir: PathBuf,
    },
    /// Write convergence and score plots of a directory.
    Plot {
        #[arg(long = "in")]
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let config_error = matches!(e, Error::Config(_) | Error::Load { .. } | Error::Validation(_));
            ExitCode::from(if config_error { 1 } else { 2 })
        }
    }
}

fn run(command: Command) -> mtga::Result<()> {
    match command {
        Command::Run { config, seed, out } => {
            let mut cfg = load_config(&config)?;
            if let Some(s) = seed {
                cfg.base_seed = s;
            }
            if let Some(o) = out {
                cfg.output_dir = o;
            }
            cfg.validate()?;
            let outcome = run_experiment(&cfg)?;
            println!(
                "{}: {} runs executed, {} reused",
                outcome.output_dir.display(),
                outcome.executed,
                outcome.reused
            );
            for (s, score) in outcome.report.summaries.iter().zip(&outcome.report.scores) {
                let means: Vec<String> = s.tasks.iter().map(|t| format!("{:.6e}", t.mean)).collect();
                println!("{:>5}  score {score:+.4}  mean best {}", s.solver, means.join(" / "));
            }
        }
        Command::Score { dir } => {
            let report = score_directory(&dir)?;
            for (s, score) in report.summaries.iter().zip(&report.scores) {
                println!("{} {score}", s.solver);
            }
        }
        Command::Plot { dir } => {
            for p in emit_reports(&dir)? {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}
