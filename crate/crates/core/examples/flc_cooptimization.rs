//! Simultaneous design of a T1 and an IT2 fuzzy controller with MTGA, with
//! two independent GAs as reference.
//!
//! `cargo run --release --example flc_cooptimization -- [generations] [seed]`

use mtga::fuzzy::FlcKind;
use mtga::solvers::{run_mtga, run_soea_pair, SolverConfig};
use mtga::tank::{itae_from_fitness, FlcProblem};
use mtga::RngStream;

fn main() -> mtga::Result<()> {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(40);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let problem = FlcProblem::default();
    let [t1, it2] = problem.tasks()?;
    let n = 100;
    let cfg = SolverConfig {
        population_size: n,
        max_generations: k,
        eval_budget: (2 * n * (k + 1)) as u64,
        matching: FlcProblem::matching_setting(),
        ..Default::default()
    };
    let rng = RngStream::new(seed);
    let mt = run_mtga([&t1, &it2], &cfg, &rng)?;
    let so = run_soea_pair([&t1, &it2], &cfg, &rng)?;
    for (name, trace) in [("mtga", &mt), ("soea", &so)] {
        let f = trace.final_best();
        println!(
            "{name}: weighted ITAE T1 {:.1}, IT2 {:.1}",
            itae_from_fitness(f[0]),
            itae_from_fitness(f[1])
        );
    }
    let best = problem.genome(FlcKind::IT2, &mt.best_points[1])?;
    println!("MTGA IT2 consequents {:?}", best.consequents);
    Ok(())
}
