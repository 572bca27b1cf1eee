//! Bias-corrected chromosome transfer between two task populations.
//!
//! The bias between two tasks is estimated as the difference of the gene-wise
//! means of the best `n_t` chromosomes of each population. A donor chromosome
//! is moved into the target task by matching every target gene `i` to a donor
//! gene `I(i)` and setting
//!
//! ```text
//! target(i) = donor(I(i)) - mean_donor(I(i)) + mean_target(i)
//! ```
//!
//! so that a donor near its own optimum lands near the target's estimated
//! optimum. Categorical genes take no part in the mean arithmetic.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::task::{clamp_unit, Chromosome, GeneKind, Population};

/// Gene-wise means of the top `n_t` chromosomes of the donor and target
/// populations. Categorical positions hold `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasEstimate {
    pub mean_source: Vec<Option<f64>>,
    pub mean_target: Vec<Option<f64>>,
    pub n_t: usize,
}

impl BiasEstimate {
    pub fn new(mean_source: Vec<Option<f64>>, mean_target: Vec<Option<f64>>, n_t: usize) -> Self {
        Self {
            mean_source,
            mean_target,
            n_t,
        }
    }

    /// Means of the best `n_t` members of both (sorted) populations.
    pub fn estimate(
        donor: &Population,
        donor_kind: &[GeneKind],
        target: &Population,
        target_kind: &[GeneKind],
        n_t: usize,
    ) -> Result<Self> {
        Ok(Self::new(
            top_mean(donor, n_t, donor_kind)?,
            top_mean(target, n_t, target_kind)?,
            n_t,
        ))
    }
}

/// Mean of the first `n_t` members of a population sorted best first.
pub fn top_mean(pop: &Population, n_t: usize, gene_kind: &[GeneKind]) -> Result<Vec<Option<f64>>> {
    if n_t == 0 || n_t > pop.len() {
        return Err(Error::config(format!(
            "n_t must be in [1, {}], got {n_t}",
            pop.len()
        )));
    }
    let dim = gene_kind.len();
    let mut sums = vec![0.0; dim];
    for member in &pop.members[..n_t] {
        if member.len() != dim {
            return Err(Error::internal(format!(
                "member has {} genes, expected {dim}",
                member.len()
            )));
        }
        for (s, g) in sums.iter_mut().zip(&member.genes) {
            *s += g;
        }
    }
    Ok(sums
        .into_iter()
        .zip(gene_kind)
        .map(|(s, kind)| match kind {
            GeneKind::Numeric => Some(s / n_t as f64),
            GeneKind::Categorical => None,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchingMode {
    Random,
    Fixed,
}

/// Map from target gene index to donor gene index. `None` marks a target gene
/// that is not transferred and keeps the target's own value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneMatching {
    pub index_map: Vec<Option<usize>>,
    pub mode: MatchingMode,
}

impl GeneMatching {
    pub fn identity(d: usize) -> Self {
        Self {
            index_map: (0..d).map(Some).collect(),
            mode: MatchingMode::Fixed,
        }
    }

    /// Fixed matching from `(target, source)` index pairs. Targets that are not
    /// listed keep their own value.
    pub fn from_pairs(d_source: usize, d_target: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut index_map = vec![None; d_target];
        for &(t, s) in pairs {
            if t >= d_target || s >= d_source {
                return Err(Error::config(format!(
                    "matching pair ({t}, {s}) out of range for target dim {d_target}, source dim {d_source}"
                )));
            }
            if index_map[t].is_some() {
                return Err(Error::config(format!("target gene {t} matched twice")));
            }
            index_map[t] = Some(s);
        }
        Ok(Self {
            index_map,
            mode: MatchingMode::Fixed,
        })
    }

    pub fn d_target(&self) -> usize {
        self.index_map.len()
    }

    /// Number of target positions that receive a donor gene.
    pub fn matched_count(&self) -> usize {
        self.index_map.iter().filter(|m| m.is_some()).count()
    }
}

/// Builds the gene matching for one transferred chromosome.
///
/// Random matchings sample `d_target` donor positions, without replacement when
/// the donor has at least as many genes as the target and with replacement
/// otherwise. Fixed matchings copy `fixed_table`.
pub fn build_matching<R: Rng + ?Sized>(
    d_source: usize,
    d_target: usize,
    mode: MatchingMode,
    rng: &mut R,
    fixed_table: Option<&GeneMatching>,
) -> Result<GeneMatching> {
    if d_source == 0 || d_target == 0 {
        return Err(Error::config("matching dimensions must be positive"));
    }
    match (mode, fixed_table) {
        (MatchingMode::Fixed, Some(table)) => {
            if table.d_target() != d_target {
                return Err(Error::config(format!(
                    "fixed matching has {} entries, target dimension is {d_target}",
                    table.d_target()
                )));
            }
            if let Some(s) = table.index_map.iter().flatten().find(|&&s| s >= d_source) {
                return Err(Error::config(format!(
                    "fixed matching references source gene {s}, source dimension is {d_source}"
                )));
            }
            Ok(GeneMatching {
                index_map: table.index_map.clone(),
                mode: MatchingMode::Fixed,
            })
        }
        (MatchingMode::Fixed, None) => Err(Error::config("fixed matching requires a table")),
        (MatchingMode::Random, Some(_)) => {
            Err(Error::config("random matching does not take a fixed table"))
        }
        (MatchingMode::Random, None) => {
            let index_map = if d_source >= d_target {
                let mut picked = index::sample(rng, d_source, d_target).into_vec();
                // sample() leaves the order unspecified
                picked.shuffle(rng);
                picked.into_iter().map(Some).collect()
            } else {
                (0..d_target)
                    .map(|_| Some(rng.random_range(0..d_source)))
                    .collect()
            };
            Ok(GeneMatching {
                index_map,
                mode: MatchingMode::Random,
            })
        }
    }
}

/// Transferred genes before clamping.
///
/// `base` supplies the value of target genes the matching leaves untouched.
pub fn transferred_genes(
    src: &Chromosome,
    base: Option<&Chromosome>,
    bias: &BiasEstimate,
    matching: &GeneMatching,
) -> Result<Vec<f64>> {
    let d_target = matching.d_target();
    if src.len() != bias.mean_source.len() || d_target != bias.mean_target.len() {
        return Err(Error::internal(format!(
            "transfer dimensions inconsistent: donor {} / donor mean {}, matching {} / target mean {}",
            src.len(),
            bias.mean_source.len(),
            d_target,
            bias.mean_target.len()
        )));
    }
    let mut out = Vec::with_capacity(d_target);
    for (i, entry) in matching.index_map.iter().enumerate() {
        let value = match entry {
            Some(j) => {
                let j = *j;
                let donor = *src.genes.get(j).ok_or_else(|| {
                    Error::internal(format!("matching index {j} exceeds donor length {}", src.len()))
                })?;
                match (bias.mean_source[j], bias.mean_target[i]) {
                    (Some(ms), Some(mt)) => donor - ms + mt,
                    // categorical on either side: carry the donor value over as is
                    _ => donor,
                }
            }
            None => {
                let base = base.ok_or_else(|| {
                    Error::internal(format!("target gene {i} is unmatched and no base chromosome was given"))
                })?;
                *base.genes.get(i).ok_or_else(|| {
                    Error::internal(format!("base chromosome shorter than target dimension {d_target}"))
                })?
            }
        };
        out.push(value);
    }
    Ok(out)
}

/// Transfers one donor chromosome into the target task's gene space.
pub fn transfer_chromosome(
    src: &Chromosome,
    base: Option<&Chromosome>,
    bias: &BiasEstimate,
    matching: &GeneMatching,
) -> Result<Chromosome> {
    let mut genes = transferred_genes(src, base, bias, matching)?;
    clamp_unit(&mut genes);
    Ok(Chromosome::new(genes))
}

/// How matchings are produced during population transfer.
#[derive(Debug, Clone, PartialEq)]
pub enum MatchingPlan {
    /// Fresh random matching for every transferred chromosome.
    Random,
    /// The same table for every transferred chromosome.
    Fixed(GeneMatching),
}

/// Builds the temporary crossover population: `n_t` chromosomes transferred
/// from the donor's best members followed by the target's best `N - n_t`.
///
/// Both populations must be sorted best first. Transferred members carry no
/// fitness; they only serve as crossover material.
pub fn build_transfer_population<R: Rng + ?Sized>(
    target: &Population,
    donor: &Population,
    bias: &BiasEstimate,
    plan: &MatchingPlan,
    rng: &mut R,
) -> Result<Vec<Chromosome>> {
    let n = target.len();
    let n_t = bias.n_t;
    if n_t > n || n_t > donor.len() {
        return Err(Error::config(format!(
            "n_t = {n_t} exceeds population size {}",
            n.min(donor.len())
        )));
    }
    let d_source = bias.mean_source.len();
    let d_target = bias.mean_target.len();
    let mut out = Vec::with_capacity(n);
    for (k, src) in donor.members[..n_t].iter().enumerate() {
        let matching = match plan {
            MatchingPlan::Random => {
                build_matching(d_source, d_target, MatchingMode::Random, rng, None)?
            }
            MatchingPlan::Fixed(table) => {
                build_matching(d_source, d_target, MatchingMode::Fixed, rng, Some(table))?
            }
        };
        out.push(transfer_chromosome(src, target.members.get(k), bias, &matching)?);
    }
    out.extend(target.members[..n - n_t].iter().cloned());
    Ok(out)
}
