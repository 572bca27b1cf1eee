//! The two-task benchmark registry and the benchmark data file format.
//!
//! `cargo run --example benchmark_registry`

use mtga::benchmarks::{load_composed_pair, registry, registry_pair, BaseFunction, ComposedTask};

fn main() -> mtga::Result<()> {
    println!("{:<14} {:<22} {:<10} {:>9}  rotated", "id", "functions", "overlap", "dims");
    for e in registry() {
        println!(
            "{:<14} {:<22} {:<10} {:>4},{:<4}  {:?}",
            e.id,
            format!("{}/{}", e.functions[0], e.functions[1]),
            format!("{:?}", e.intersection),
            e.dims[0],
            e.dims[1],
            e.rotated
        );
    }

    // every base function is zero at its optimum
    let (a, _) = registry_pair("B3")?;
    println!("B3 task 1 at its optimum: {}", a.eval(a.optimum())?);
    for f in BaseFunction::ALL {
        let t = ComposedTask::new(f, 4);
        println!("{f:<12} f(o) = {:.3e}, range {:?}", t.eval(t.optimum())?, f.default_range());
    }

    // write a pair in the data file format and read it back
    let (x, y) = registry_pair("B1")?;
    let dir = std::env::temp_dir().join("mtga_registry_example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("b1.txt");
    std::fs::write(&path, format!("# B1 exported\n{}{}", x.to_data_block(), y.to_data_block()))?;
    let (x2, _) = load_composed_pair(&path.to_string_lossy())?;
    println!("round trip through {}: identical = {}", path.display(), x2 == x);
    Ok(())
}
