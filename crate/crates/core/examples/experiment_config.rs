//! Full experiment pipeline: config, traces, summary, scores and plots.
//!
//! Equivalent to `mtga run --config <file>` with the config built in code.
//!
//! `cargo run --release --example experiment_config -- [output-dir]`

use std::path::PathBuf;

use mtga::experiment::{run_experiment, ExperimentConfig, ProblemSpec, SolverKind};
use mtga::solvers::SolverConfig;

fn main() -> mtga::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("mtga_experiment"));
    let config = ExperimentConfig {
        name: "B1 quick look".into(),
        solvers: vec![SolverKind::Mtga, SolverKind::Soea, SolverKind::Mfea],
        problem: ProblemSpec::Benchmark("B1".into()),
        repetitions: 4,
        output_dir: out,
        solver: SolverConfig {
            eval_budget: 20_000,
            ..Default::default()
        },
        ..Default::default()
    };
    println!("{}", serde_json::to_string_pretty(&config)?);
    let outcome = run_experiment(&config)?;
    println!("{} runs executed, {} reused", outcome.executed, outcome.reused);
    for (s, score) in outcome.report.summaries.iter().zip(&outcome.report.scores) {
        println!("{:>5} score {score:+.3}", s.solver);
    }
    println!("artifacts in {}", outcome.output_dir.display());
    Ok(())
}
