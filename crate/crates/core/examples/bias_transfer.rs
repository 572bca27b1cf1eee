//! Bias-corrected chromosome transfer between two populations.
//!
//! The donor's best chromosomes are moved into the target's gene space after
//! subtracting the donor's top-`n_t` mean and adding the target's.
//!
//! `cargo run --example bias_transfer`

use mtga::transfer::{build_matching, build_transfer_population, BiasEstimate, GeneMatching, MatchingMode, MatchingPlan};
use mtga::{Chromosome, Direction, Population, RngStream};

fn population(points: &[&[f64]]) -> Population {
    let members = points
        .iter()
        .enumerate()
        .map(|(k, p)| Chromosome {
            genes: p.to_vec(),
            fitness: Some(k as f64),
            feasible: true,
        })
        .collect();
    Population::new("demo", members, Direction::Minimize)
}

fn main() -> mtga::Result<()> {
    // donor clustered near 0.7, target near 0.3: the bias is about 0.4 per gene
    let donor = population(&[&[0.72, 0.68, 0.75], &[0.70, 0.66, 0.71], &[0.69, 0.73, 0.70], &[0.10, 0.90, 0.50]]);
    let target = population(&[&[0.31, 0.29], &[0.28, 0.33], &[0.30, 0.27], &[0.80, 0.05]]);
    let kinds3 = vec![Default::default(); 3];
    let kinds2 = vec![Default::default(); 2];
    let bias = BiasEstimate::estimate(&donor, &kinds3, &target, &kinds2, 3)?;
    println!("donor means  {:?}", bias.mean_source);
    println!("target means {:?}", bias.mean_target);

    let mut rng = RngStream::new(1);
    // d_src > d_tgt: two of the three donor genes are drawn without replacement
    let m = build_matching(3, 2, MatchingMode::Random, &mut rng, None)?;
    println!("random matching target <- source: {:?}", m.index_map);

    let pool = build_transfer_population(&target, &donor, &bias, &MatchingPlan::Random, &mut rng)?;
    for (k, c) in pool.iter().enumerate() {
        let tag = if k < 3 { "transferred" } else { "own" };
        println!("{tag:>11} {:?}", c.genes);
    }

    // fixed table: target gene 0 <- source gene 2, target gene 1 keeps its value
    let fixed = MatchingPlan::Fixed(GeneMatching::from_pairs(3, 2, &[(0, 2)])?);
    let pool = build_transfer_population(&target, &donor, &bias, &fixed, &mut rng)?;
    println!("fixed table, first transfer {:?}", pool[0].genes);
    Ok(())
}
