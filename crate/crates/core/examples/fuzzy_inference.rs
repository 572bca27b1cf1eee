//! Type-1 and interval type-2 fuzzy PI controllers: gene layout, constraint
//! repair and Karnik–Mendel type reduction.
//!
//! `cargo run --example fuzzy_inference`

use mtga::fuzzy::{enforce_flc_constraints, it2_inference_km, km_interval, t1_inference, FlcKind};

fn main() -> mtga::Result<()> {
    // T1 genes: e means, e stds, ė means, ė stds, five consequents
    let t1 = enforce_flc_constraints(
        FlcKind::T1,
        &[0.0, -1.0, 1.0, 0.5, 0.5, 0.5, -1.0, 0.0, 1.0, 0.5, 0.5, 0.5, 1.0, 0.75, 0.5, 0.25, 0.0],
        0.01,
    )?;
    println!("repaired e means {:?}, consequents {:?}", t1.e.iter().map(|m| m.mean).collect::<Vec<_>>(), t1.consequents);

    // IT2 genes: std pairs (lower, upper) in place of single stds
    let it2 = enforce_flc_constraints(
        FlcKind::IT2,
        &[
            -1.0, 0.0, 1.0, 0.4, 0.6, 0.6, 0.4, 0.4, 0.6, -1.0, 0.0, 1.0, 0.4, 0.6, 0.4, 0.6, 0.4, 0.6, 0.0, 0.25, 0.5,
            0.75, 1.0,
        ],
        0.01,
    )?;
    println!("{:>6} {:>6} {:>8} {:>8} {:>8} {:>8}", "e", "edot", "T1", "y_l", "y_r", "IT2");
    for (e, edot) in [(-1.0, 0.0), (-0.3, 0.2), (0.0, 0.0), (0.5, -0.5), (1.2, 0.8)] {
        let (yl, yr) = km_interval(&it2.firing_intervals(e, edot)).unwrap_or((f64::NAN, f64::NAN));
        println!(
            "{e:>6.2} {edot:>6.2} {:>8.4} {yl:>8.4} {yr:>8.4} {:>8.4}",
            t1_inference(&t1, e, edot),
            it2_inference_km(&it2, e, edot)
        );
    }
    Ok(())
}
