//! Variation and survivor-selection operators: simulated binary crossover,
//! polynomial mutation and elitist (mu + lambda) selection.
//!
//! All operators work on normalized genes, so the mutation range is `[0, 1]`
//! and results are clamped back into it.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::task::{clamp_unit, sort_members, Chromosome, Population};

/// Simulated binary crossover parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SbxParams {
    /// Distribution index; larger values keep offspring closer to the parents.
    pub beta: f64,
}

impl Default for SbxParams {
    fn default() -> Self {
        Self { beta: 2.0 }
    }
}

impl SbxParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0) {
            return Err(Error::config(format!("SBX beta must be > 0, got {}", self.beta)));
        }
        Ok(())
    }
}

/// Polynomial mutation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MutationParams {
    pub eta: f64,
    /// Probability of mutating each gene; `None` means `1 / d`.
    pub per_gene_rate: Option<f64>,
}

impl Default for MutationParams {
    fn default() -> Self {
        Self {
            eta: 5.0,
            per_gene_rate: None,
        }
    }
}

impl MutationParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) {
            return Err(Error::config(format!("mutation eta must be > 0, got {}", self.eta)));
        }
        if let Some(p) = self.per_gene_rate {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(format!(
                    "per-gene mutation rate must be in [0, 1], got {p}"
                )));
            }
        }
        Ok(())
    }

    pub fn rate_for(&self, dim: usize) -> f64 {
        self.per_gene_rate.unwrap_or(1.0 / dim.max(1) as f64)
    }
}

/// Spread factor of SBX for a uniform draw `r`.
pub fn sbx_spread(r: f64, beta: f64) -> f64 {
    let e = 1.0 / (beta + 1.0);
    if r <= 0.5 {
        (2.0 * r).powf(e)
    } else {
        (2.0 * (1.0 - r)).powf(-e)
    }
}

/// SBX on a single gene pair, before clamping.
pub fn sbx_gene(xa: f64, xb: f64, r: f64, beta: f64) -> (f64, f64) {
    let c = sbx_spread(r, beta);
    (
        ((1.0 + c) * xa + (1.0 - c) * xb) / 2.0,
        ((1.0 + c) * xb + (1.0 - c) * xa) / 2.0,
    )
}

/// Polynomial mutation of one gene in `[lo, hi]` for draw `r`, before clamping.
pub fn polynomial_mutate_gene(x: f64, r: f64, eta: f64, lo: f64, hi: f64) -> f64 {
    let e = 1.0 / (1.0 + eta);
    if r <= 0.5 {
        x + ((2.0 * r).powf(e) - 1.0) * (x - lo)
    } else {
        x + (1.0 - (2.0 * (1.0 - r)).powf(e)) * (hi - x)
    }
}

/// SBX crossover with a fresh draw per gene. Offspring are unevaluated.
pub fn sbx_crossover<R: Rng + ?Sized>(
    xa: &Chromosome,
    xb: &Chromosome,
    params: SbxParams,
    rng: &mut R,
) -> Result<(Chromosome, Chromosome)> {
    if xa.len() != xb.len() {
        return Err(Error::internal(format!(
            "crossover parents differ in length: {} vs {}",
            xa.len(),
            xb.len()
        )));
    }
    let mut e = Vec::with_capacity(xa.len());
    let mut f = Vec::with_capacity(xa.len());
    for (&a, &b) in xa.genes.iter().zip(&xb.genes) {
        let r: f64 = rng.random();
        let (ge, gf) = sbx_gene(a, b, r, params.beta);
        e.push(ge);
        f.push(gf);
    }
    Ok((Chromosome::new(e), Chromosome::new(f)))
}

/// Polynomial mutation; each gene mutates with the configured probability.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &Chromosome,
    params: MutationParams,
    rng: &mut R,
) -> Chromosome {
    let rate = params.rate_for(x.len());
    let mut genes = x.genes.clone();
    for g in genes.iter_mut() {
        if rate > 0.0 && rng.random::<f64>() < rate {
            let r: f64 = rng.random();
            *g = polynomial_mutate_gene(*g, r, params.eta, 0.0, 1.0);
        }
    }
    clamp_unit(&mut genes);
    Chromosome {
        genes,
        fitness: None,
        feasible: true,
    }
}

/// The `N` best of parents and offspring, sorted best first. Ties prefer
/// parents, then earlier offspring.
pub fn elitist_select(parents: &Population, offspring: Vec<Chromosome>) -> Result<Population> {
    let n = parents.capacity;
    let mut pool = Vec::with_capacity(parents.len() + offspring.len());
    pool.extend(parents.members.iter().cloned());
    pool.extend(offspring);
    if pool.len() < n {
        return Err(Error::internal(format!(
            "selection pool of {} is smaller than population size {n}",
            pool.len()
        )));
    }
    sort_members(&mut pool, parents.direction)?;
    pool.truncate(n);
    Ok(Population {
        task_id: parents.task_id.clone(),
        members: pool,
        capacity: n,
        direction: parents.direction,
    })
}
