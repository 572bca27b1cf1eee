//! SBX crossover and polynomial mutation on normalized chromosomes.
//!
//! `cargo run --example operators`

use mtga::operators::{polynomial_mutate_gene, polynomial_mutation, sbx_crossover, sbx_gene, MutationParams, SbxParams};
use mtga::{Chromosome, RngStream};

fn main() -> mtga::Result<()> {
    // single-gene algebra: the children straddle the parents symmetrically
    for r in [0.1, 0.5, 0.9] {
        let (e, f) = sbx_gene(0.3, 0.6, r, 2.0);
        println!("SBX r={r}: ({e:.4}, {f:.4}), sum {:.4}", e + f);
    }
    for r in [0.2, 0.5, 0.8] {
        println!("mutation r={r}: 0.4 -> {:.4}", polynomial_mutate_gene(0.4, r, 5.0, 0.0, 1.0));
    }

    let mut rng = RngStream::new(7);
    let a = Chromosome::new(vec![0.1, 0.2, 0.3, 0.4]);
    let b = Chromosome::new(vec![0.9, 0.8, 0.7, 0.6]);
    let (e, f) = sbx_crossover(&a, &b, SbxParams::default(), &mut rng)?;
    println!("children {:?}\n         {:?}", e.genes, f.genes);
    // every gene mutates here; the default rate is 1/d
    let all = MutationParams {
        per_gene_rate: Some(1.0),
        ..Default::default()
    };
    println!("mutated  {:?}", polynomial_mutation(&e, all, &mut rng).genes);
    Ok(())
}
