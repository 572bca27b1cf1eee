//! Coupled-tank plant under a hand-tuned type-1 fuzzy PI controller.
//!
//! Prints the per-plant ITAE of the four evaluation plants and writes the
//! nominal response to `coupled_tank.csv` in the temp directory.
//!
//! `cargo run --release --example coupled_tank`

use mtga::fuzzy::{enforce_flc_constraints, FlcKind};
use mtga::tank::{itae_fitness, simulate_closed_loop, LoopConfig, PlantConfig, DEFAULT_WEIGHTS};

fn main() -> mtga::Result<()> {
    let flc = enforce_flc_constraints(
        FlcKind::T1,
        &[-1.0, 0.0, 1.0, 0.4, 0.4, 0.4, -1.0, 0.0, 1.0, 0.5, 0.5, 0.5, 0.05, 0.3, 0.5, 0.7, 0.95],
        0.01,
    )?;
    let lc = LoopConfig::default();
    let plants = PlantConfig::standard_suite();
    for p in &plants {
        let t = simulate_closed_loop(&flc, p, &lc)?;
        let last = t.h2.len() - 1;
        println!(
            "plant {:<3} ITAE {:>10.1}  H2(end) {:>6.2} cm  setpoint {:>5.1}",
            p.name,
            t.itae(),
            t.h2[last],
            t.setpoint[last]
        );
    }
    let f = itae_fitness(&flc, &plants, &DEFAULT_WEIGHTS, &lc)?;
    println!("weighted ITAE {:.1}, fitness {f:.3e}", 1.0 / f);

    let trace = simulate_closed_loop(&flc, &plants[0], &lc)?;
    let path = std::env::temp_dir().join("coupled_tank.csv");
    std::fs::write(&path, trace.to_csv())?;
    println!("response written to {}", path.display());
    Ok(())
}
