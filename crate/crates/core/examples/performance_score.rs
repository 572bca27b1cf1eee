//! Performance scores of three solvers on a benchmark pair.
//!
//! `cargo run --release --example performance_score`

use mtga::benchmarks::load_task_pair;
use mtga::metrics::{normalize_to_baseline, performance_score, summarize_runs, ResultTensor};
use mtga::solvers::{run_mfea, run_mtga, run_soea_pair, SolverConfig};
use mtga::RngStream;

fn main() -> mtga::Result<()> {
    let (t1, t2) = load_task_pair("B5")?;
    let cfg = SolverConfig {
        eval_budget: 20_000,
        ..Default::default()
    };
    let reps = 5;
    let names = ["mtga", "soea", "mfea"];
    // finals[k][l][m]
    let mut finals = vec![Vec::new(); 3];
    for l in 0..reps {
        let rng = RngStream::new(l);
        finals[0].push(run_mtga([&t1, &t2], &cfg, &rng)?.final_best());
        finals[1].push(run_soea_pair([&t1, &t2], &cfg, &rng)?.final_best());
        finals[2].push(run_mfea([&t1, &t2], &cfg, &rng)?.final_best());
    }
    let tensor: Vec<Vec<Vec<f64>>> = finals
        .iter()
        .map(|per| (0..2).map(|m| per.iter().map(|f| f[m]).collect()).collect())
        .collect();
    let scores = performance_score(&ResultTensor::new(tensor)?)?;
    let summaries = names
        .iter()
        .zip(&finals)
        .map(|(n, f)| summarize_runs(n, f))
        .collect::<mtga::Result<Vec<_>>>()?;
    for ((s, score), norm) in summaries.iter().zip(&scores).zip(normalize_to_baseline(&summaries, "soea")?) {
        println!(
            "{:>5}: score {score:+.3}, mean {:.3e} / {:.3e}, relative to soea {:.3} / {:.3}",
            s.solver, s.tasks[0].mean, s.tasks[1].mean, norm.mean_ratio[0], norm.mean_ratio[1]
        );
    }
    println!("sum of scores {:.2e}", scores.iter().sum::<f64>());
    Ok(())
}
