//! MTGA against two independent GAs on a registry benchmark.
//!
//! `cargo run --release --example mtga_benchmark -- [benchmark-id] [seeds]`

use mtga::benchmarks::{load_task_pair, registry};
use mtga::solvers::{run_mtga, run_soea_pair, SolverConfig};
use mtga::RngStream;

fn main() -> mtga::Result<()> {
    let mut args = std::env::args().skip(1);
    let id = args.next().unwrap_or_else(|| "sphere-ackley".into());
    let seeds: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    if let Some(e) = registry().iter().find(|e| e.id.eq_ignore_ascii_case(&id)) {
        println!("{id}: {} / {}, dims {:?}, {:?} intersection", e.functions[0], e.functions[1], e.dims, e.intersection);
    }
    let (t1, t2) = load_task_pair(&id)?;
    let cfg = SolverConfig::default();
    let (mut mt, mut so) = ([0.0; 2], [0.0; 2]);
    for seed in 0..seeds {
        let rng = RngStream::new(seed);
        let a = run_mtga([&t1, &t2], &cfg, &rng)?.final_best();
        let b = run_soea_pair([&t1, &t2], &cfg, &rng)?.final_best();
        println!("seed {seed}: mtga {:.3e} {:.3e} | soea {:.3e} {:.3e}", a[0], a[1], b[0], b[1]);
        for m in 0..2 {
            mt[m] += a[m] / seeds as f64;
            so[m] += b[m] / seeds as f64;
        }
    }
    println!("mean error  mtga {:.3e} {:.3e} | soea {:.3e} {:.3e}", mt[0], mt[1], so[0], so[1]);
    Ok(())
}
