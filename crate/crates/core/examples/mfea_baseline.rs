//! The multifactorial baseline next to MTGA, with its per-generation trace.
//!
//! `cargo run --release --example mfea_baseline -- [benchmark-id]`

use mtga::benchmarks::load_task_pair;
use mtga::solvers::{run_mfea, run_mtga, SolverConfig};
use mtga::RngStream;

fn main() -> mtga::Result<()> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "B2".into());
    let (t1, t2) = load_task_pair(&id)?;
    let cfg = SolverConfig {
        eval_budget: 40_000,
        ..Default::default()
    };
    let rng = RngStream::new(3);
    let mfea = run_mfea([&t1, &t2], &cfg, &rng)?;
    let mtga = run_mtga([&t1, &t2], &cfg, &rng)?;
    println!("{:>10} {:>12} {:>12} {:>12} {:>12}", "evals", "mfea T1", "mfea T2", "mtga T1", "mtga T2");
    for (a, b) in mfea.records.iter().zip(&mtga.records).step_by(20) {
        println!(
            "{:>10} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            a.evaluations, a.best[0], a.best[1], b.best[0], b.best[1]
        );
    }
    println!("final: mfea {:?}, mtga {:?}", mfea.final_best(), mtga.final_best());
    Ok(())
}
