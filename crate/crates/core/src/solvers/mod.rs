//! Solver drivers: the multi-tasking GA ([`run_mtga`]), the single-task GA
//! ([`run_soea`], [`run_soea_pair`]) and the multifactorial baseline
//! ([`run_mfea`]).
//!
//! All three share one generational skeleton: random permutation pairing,
//! SBX crossover, polynomial mutation, evaluation of the offspring and elitist
//! survivor selection. Every solver produces a [`RunTrace`].

mod mfea;
mod mtga;
mod soea;

pub use mfea::run_mfea;
pub use mtga::run_mtga;
pub use soea::{run_soea, run_soea_pair};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{polynomial_mutation, sbx_crossover, MutationParams, SbxParams};
use crate::task::{Chromosome, Population, TaskDefinition};
use crate::transfer::{GeneMatching, MatchingPlan};

/// How MTGA matches genes when transferring between the two tasks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum MatchingSetting {
    /// Fresh random matching per transferred chromosome.
    #[default]
    Random,
    /// Fixed tables of `(target_gene, source_gene)` pairs, zero-based.
    Fixed {
        /// Transfer from task 2 into task 1.
        into_first: Vec<(usize, usize)>,
        /// Transfer from task 1 into task 2.
        into_second: Vec<(usize, usize)>,
    },
}

impl MatchingSetting {
    pub(crate) fn plans(&self, d1: usize, d2: usize) -> Result<[MatchingPlan; 2]> {
        Ok(match self {
            MatchingSetting::Random => [MatchingPlan::Random, MatchingPlan::Random],
            MatchingSetting::Fixed {
                into_first,
                into_second,
            } => [
                MatchingPlan::Fixed(GeneMatching::from_pairs(d2, d1, into_first)?),
                MatchingPlan::Fixed(GeneMatching::from_pairs(d1, d2, into_second)?),
            ],
        })
    }
}

/// Parameters shared by all solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Population size per task (MTGA, SOEA) or per skill factor (MFEA). Even.
    pub population_size: usize,
    /// Maximum number of generations.
    pub max_generations: usize,
    /// Chromosomes transferred per generation (MTGA).
    pub n_t: usize,
    /// Random mating probability (MFEA).
    pub rmp: f64,
    /// Total objective evaluations allowed for the whole run.
    pub eval_budget: u64,
    pub sbx: SbxParams,
    pub mutation: MutationParams,
    /// Recompute the bias means right before each task's transfer instead of
    /// once per generation.
    pub recompute_means_per_transfer: bool,
    pub matching: MatchingSetting,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            max_generations: 500,
            n_t: 40,
            rmp: 0.3,
            eval_budget: 100_000,
            sbx: SbxParams::default(),
            mutation: MutationParams::default(),
            recompute_means_per_transfer: false,
            matching: MatchingSetting::Random,
        }
    }
}

impl SolverConfig {
    /// Checks the parameters every solver uses; `n_t` is checked by MTGA.
    pub fn validate(&self) -> Result<()> {
        let n = self.population_size;
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::config(format!(
                "population_size must be even and >= 2, got {n}"
            )));
        }
        if !(0.0..=1.0).contains(&self.rmp) {
            return Err(Error::config(format!("rmp must be in [0, 1], got {}", self.rmp)));
        }
        self.sbx.validate()?;
        self.mutation.validate()
    }
}

/// Statistics recorded at the end of one generation (generation 0 is the
/// initial population).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    /// Cumulative objective evaluations.
    pub evaluations: u64,
    /// Best objective per task, in task units.
    pub best: Vec<f64>,
    /// Mean objective per task over the population.
    pub mean: Vec<f64>,
}

/// Per-generation history and final result of one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub solver: String,
    pub task_ids: Vec<String>,
    pub records: Vec<GenerationRecord>,
    /// Fittest chromosome found per task (normalized genes).
    pub best: Vec<Chromosome>,
    /// Decoded task-space points of [`best`](Self::best).
    pub best_points: Vec<Vec<f64>>,
}

impl RunTrace {
    pub fn final_record(&self) -> Option<&GenerationRecord> {
        self.records.last()
    }

    /// Final best objective per task.
    pub fn final_best(&self) -> Vec<f64> {
        self.final_record().map(|r| r.best.clone()).unwrap_or_default()
    }

    pub fn total_evaluations(&self) -> u64 {
        self.final_record().map_or(0, |r| r.evaluations)
    }

    /// Side-by-side combination of independent single-task traces, generation
    /// by generation. Evaluations add up; a trace that stopped earlier repeats
    /// its last record.
    pub fn zip_independent(solver: impl Into<String>, parts: Vec<RunTrace>) -> RunTrace {
        let len = parts.iter().map(|p| p.records.len()).max().unwrap_or(0);
        let mut records = Vec::with_capacity(len);
        for g in 0..len {
            let mut rec = GenerationRecord {
                generation: g,
                evaluations: 0,
                best: Vec::new(),
                mean: Vec::new(),
            };
            for p in &parts {
                let r = &p.records[g.min(p.records.len() - 1)];
                rec.evaluations += r.evaluations;
                rec.best.extend(&r.best);
                rec.mean.extend(&r.mean);
            }
            records.push(rec);
        }
        RunTrace {
            solver: solver.into(),
            task_ids: parts.iter().flat_map(|p| p.task_ids.clone()).collect(),
            best: parts.iter().flat_map(|p| p.best.clone()).collect(),
            best_points: parts.iter().flat_map(|p| p.best_points.clone()).collect(),
            records,
        }
    }
}

/// Objective-call bookkeeping against the run budget.
#[derive(Debug, Clone)]
pub(crate) struct EvalCounter {
    used: u64,
    budget: u64,
}

impl EvalCounter {
    pub(crate) fn new(budget: u64) -> Self {
        Self { used: 0, budget }
    }

    pub(crate) fn used(&self) -> u64 {
        self.used
    }

    pub(crate) fn can_afford(&self, n: usize) -> bool {
        self.used + n as u64 <= self.budget
    }

    /// Evaluates every chromosome on `task`. Evaluations may run in parallel;
    /// results stay in member order.
    pub(crate) fn evaluate_all(
        &mut self,
        task: &TaskDefinition,
        members: &mut [Chromosome],
    ) -> Result<()> {
        members
            .par_iter_mut()
            .map(|c| task.evaluate(c).map(|_| ()))
            .collect::<Result<Vec<()>>>()?;
        self.used += members.len() as u64;
        Ok(())
    }
}

pub(crate) fn random_chromosomes<R: Rng + ?Sized>(
    n: usize,
    dim: usize,
    rng: &mut R,
) -> Vec<Chromosome> {
    (0..n)
        .map(|_| Chromosome::new((0..dim).map(|_| rng.random::<f64>()).collect()))
        .collect()
}

/// Random initial population, evaluated and sorted.
pub(crate) fn init_population<R: Rng + ?Sized>(
    task: &TaskDefinition,
    n: usize,
    counter: &mut EvalCounter,
    rng: &mut R,
) -> Result<Population> {
    let mut members = random_chromosomes(n, task.dim(), rng);
    counter.evaluate_all(task, &mut members)?;
    let mut pop = Population::new(task.id.clone(), members, task.direction);
    pop.sort()?;
    Ok(pop)
}

/// `N` offspring from a mating pool of size `N`: parents `s(n)` and
/// `s(n + N/2)` of a random permutation `s` are crossed, then both children
/// are mutated.
pub(crate) fn breed<R: Rng + ?Sized>(
    mating: &[Chromosome],
    sbx: SbxParams,
    mutation: MutationParams,
    rng: &mut R,
) -> Result<Vec<Chromosome>> {
    let n = mating.len();
    let half = n / 2;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut offspring = Vec::with_capacity(n);
    for k in 0..half {
        let (e, f) = sbx_crossover(&mating[perm[k]], &mating[perm[k + half]], sbx, rng)?;
        offspring.push(polynomial_mutation(&e, mutation, rng));
        offspring.push(polynomial_mutation(&f, mutation, rng));
    }
    Ok(offspring)
}

pub(crate) fn population_stats(pop: &Population) -> (f64, f64) {
    let best = pop.best().and_then(|c| c.fitness).unwrap_or(f64::NAN);
    let mean = pop.members.iter().filter_map(|c| c.fitness).sum::<f64>() / pop.len() as f64;
    (best, mean)
}

pub(crate) fn record(generation: usize, evaluations: u64, pops: &[&Population]) -> GenerationRecord {
    let (best, mean) = pops.iter().map(|p| population_stats(p)).unzip();
    GenerationRecord {
        generation,
        evaluations,
        best,
        mean,
    }
}

pub(crate) fn finish(
    solver: &str,
    tasks: &[&TaskDefinition],
    pops: &[&Population],
    records: Vec<GenerationRecord>,
) -> Result<RunTrace> {
    let mut best = Vec::with_capacity(tasks.len());
    let mut best_points = Vec::with_capacity(tasks.len());
    for (task, pop) in tasks.iter().zip(pops) {
        let b = pop
            .best()
            .cloned()
            .ok_or_else(|| Error::internal("empty population"))?;
        best_points.push(task.decode(&b)?);
        best.push(b);
    }
    Ok(RunTrace {
        solver: solver.to_string(),
        task_ids: tasks.iter().map(|t| t.id.clone()).collect(),
        records,
        best,
        best_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let odd = SolverConfig {
            population_size: 7,
            ..Default::default()
        };
        assert!(odd.validate().is_err());
        let big_nt = SolverConfig {
            population_size: 10,
            n_t: 11,
            ..Default::default()
        };
        assert!(big_nt.validate().is_ok());
        let rmp = SolverConfig {
            rmp: 1.5,
            ..Default::default()
        };
        assert!(rmp.validate().is_err());
    }

    #[test]
    fn matching_setting_serde() {
        let s: MatchingSetting = serde_json::from_str(r#"{"mode":"random"}"#).unwrap();
        assert_eq!(s, MatchingSetting::Random);
        let s: MatchingSetting =
            serde_json::from_str(r#"{"mode":"fixed","into_first":[[0,1]],"into_second":[[1,0]]}"#)
                .unwrap();
        assert!(matches!(s, MatchingSetting::Fixed { .. }));
    }
}
