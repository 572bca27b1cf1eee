//! Multifactorial evolutionary algorithm (MFEA) reference solver.
//!
//! Reconstruction of the classic design:
//!
//! * one unified population of `2N` chromosomes of length `max(d_1, d_2)`;
//!   task `m` decodes the first `d_m` genes,
//! * every individual carries a skill factor (the task it is evaluated on);
//!   the initial population is split evenly between the tasks,
//! * assortative mating: parents with equal skill factors always cross over,
//!   parents with different ones only with probability `rmp`; otherwise each
//!   parent is mutated on its own,
//! * vertical cultural transmission: a crossover child imitates the skill
//!   factor of a randomly chosen parent, a mutated child that of its parent,
//! * selective evaluation: each child is evaluated on its skill task only,
//! * survivors are the `2N` individuals of highest scalar fitness, the
//!   reciprocal of the factorial rank within their skill group.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operators::{polynomial_mutation, sbx_crossover};
use crate::rng::RngStream;
use crate::task::{Chromosome, Population, TaskDefinition};

use super::{random_chromosomes, GenerationRecord, RunTrace, SolverConfig};

#[derive(Debug, Clone)]
struct Individual {
    genes: Vec<f64>,
    skill: usize,
    fitness: Option<f64>,
}

pub fn run_mfea(
    tasks: [&TaskDefinition; 2],
    config: &SolverConfig,
    rng: &RngStream,
) -> Result<RunTrace> {
    config.validate()?;
    let total = 2 * config.population_size;
    let dim = tasks[0].dim().max(tasks[1].dim());
    let mut rng = rng.fork(0);
    if (total as u64) > config.eval_budget {
        return Err(Error::config(format!(
            "evaluation budget {} cannot cover the initial population of {total}",
            config.eval_budget
        )));
    }

    let mut pop: Vec<Individual> = random_chromosomes(total, dim, &mut rng)
        .into_iter()
        .enumerate()
        .map(|(i, c)| Individual {
            genes: c.genes,
            skill: usize::from(i >= total / 2),
            fitness: None,
        })
        .collect();
    let mut used = 0u64;
    evaluate(&tasks, &mut pop, &mut used)?;
    pop = select(&tasks, pop, total);
    let mut records = vec![stats(0, used, &tasks, &pop)];

    for generation in 1..=config.max_generations {
        if used + total as u64 > config.eval_budget {
            break;
        }
        let mut perm: Vec<usize> = (0..total).collect();
        perm.shuffle(&mut rng);
        let half = total / 2;
        let mut children = Vec::with_capacity(total);
        for k in 0..half {
            let pa = &pop[perm[k]];
            let pb = &pop[perm[k + half]];
            if pa.skill == pb.skill || rng.random::<f64>() < config.rmp {
                let (e, f) = sbx_crossover(
                    &Chromosome::new(pa.genes.clone()),
                    &Chromosome::new(pb.genes.clone()),
                    config.sbx,
                    &mut rng,
                )?;
                for child in [e, f] {
                    let child = polynomial_mutation(&child, config.mutation, &mut rng);
                    let skill = if rng.random::<bool>() { pa.skill } else { pb.skill };
                    children.push(Individual {
                        genes: child.genes,
                        skill,
                        fitness: None,
                    });
                }
            } else {
                for parent in [pa, pb] {
                    let child = polynomial_mutation(
                        &Chromosome::new(parent.genes.clone()),
                        config.mutation,
                        &mut rng,
                    );
                    children.push(Individual {
                        genes: child.genes,
                        skill: parent.skill,
                        fitness: None,
                    });
                }
            }
        }
        evaluate(&tasks, &mut children, &mut used)?;
        pop.extend(children);
        pop = select(&tasks, pop, total);
        records.push(stats(generation, used, &tasks, &pop));
    }

    let mut best = Vec::with_capacity(2);
    let mut best_points = Vec::with_capacity(2);
    for (m, task) in tasks.iter().enumerate() {
        let ind = pop
            .iter()
            .find(|i| i.skill == m)
            .ok_or_else(|| Error::internal(format!("no individual left for task {}", task.id)))?;
        let c = Chromosome {
            genes: ind.genes[..task.dim()].to_vec(),
            fitness: ind.fitness,
            feasible: true,
        };
        best_points.push(task.decode(&c)?);
        best.push(c);
    }
    Ok(RunTrace {
        solver: "mfea".into(),
        task_ids: tasks.iter().map(|t| t.id.clone()).collect(),
        records,
        best,
        best_points,
    })
}

/// Evaluates each individual on its skill task, writing repaired genes back.
fn evaluate(tasks: &[&TaskDefinition; 2], pop: &mut [Individual], used: &mut u64) -> Result<()> {
    pop.par_iter_mut()
        .map(|ind| {
            let task = tasks[ind.skill];
            let mut c = Chromosome::new(ind.genes[..task.dim()].to_vec());
            let f = task.evaluate(&mut c)?;
            ind.genes[..task.dim()].copy_from_slice(&c.genes);
            ind.fitness = Some(f);
            Ok(())
        })
        .collect::<Result<Vec<()>>>()?;
    *used += pop.len() as u64;
    Ok(())
}

/// Keeps the `keep` individuals with the best factorial rank. The returned
/// population is ordered by rank, each skill group best first.
fn select(tasks: &[&TaskDefinition; 2], pop: Vec<Individual>, keep: usize) -> Vec<Individual> {
    let mut ranked: Vec<(usize, Individual)> = Vec::with_capacity(pop.len());
    for (m, task) in tasks.iter().enumerate() {
        let mut group: Vec<Individual> = pop.iter().filter(|i| i.skill == m).cloned().collect();
        group.sort_by(|a, b| {
            let ca = task.direction.cost(a.fitness.unwrap_or(f64::NAN));
            let cb = task.direction.cost(b.fitness.unwrap_or(f64::NAN));
            ca.total_cmp(&cb)
        });
        ranked.extend(group.into_iter().enumerate());
    }
    // scalar fitness 1/(rank+1) descends with rank; stable sort keeps task order on ties
    ranked.sort_by_key(|(rank, _)| *rank);
    ranked.into_iter().take(keep).map(|(_, ind)| ind).collect()
}

fn stats(
    generation: usize,
    used: u64,
    tasks: &[&TaskDefinition; 2],
    pop: &[Individual],
) -> GenerationRecord {
    let mut best = Vec::with_capacity(2);
    let mut mean = Vec::with_capacity(2);
    for (m, task) in tasks.iter().enumerate() {
        let members: Vec<Chromosome> = pop
            .iter()
            .filter(|i| i.skill == m)
            .map(|i| Chromosome {
                genes: Vec::new(),
                fitness: i.fitness,
                feasible: true,
            })
            .collect();
        let group = Population::new(task.id.clone(), members, task.direction);
        let (b, mu) = super::population_stats(&group);
        best.push(b);
        mean.push(mu);
    }
    GenerationRecord {
        generation,
        evaluations: used,
        best,
        mean,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn sphere(id: &str, d: usize, center: f64) -> TaskDefinition {
        TaskDefinition::uniform(
            id,
            d,
            -10.0,
            10.0,
            Arc::new(move |x: &[f64]| x.iter().map(|v| (v - center).powi(2)).sum()),
        )
        .unwrap()
    }

    fn cfg(rmp: f64) -> SolverConfig {
        SolverConfig {
            population_size: 30,
            max_generations: 100,
            rmp,
            eval_budget: 1_000_000,
            ..Default::default()
        }
    }

    #[test]
    fn select_keeps_best_ranks_of_both_tasks() {
        let t = sphere("a", 1, 0.0);
        let tasks = [&t, &t];
        let pop: Vec<Individual> = (0..8)
            .map(|i| Individual {
                genes: vec![0.0],
                skill: i % 2,
                fitness: Some(i as f64),
            })
            .collect();
        let kept = select(&tasks, pop, 4);
        let f: Vec<f64> = kept.iter().map(|i| i.fitness.unwrap()).collect();
        assert_eq!(f, vec![0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn mixed_dimensions_and_budget() {
        let t1 = sphere("a", 2, 1.0);
        let t2 = sphere("b", 5, -1.0);
        let c = SolverConfig {
            eval_budget: 6_000,
            ..cfg(0.3)
        };
        let trace = run_mfea([&t1, &t2], &c, &RngStream::new(4)).unwrap();
        assert_eq!(trace.total_evaluations(), 6_000);
        assert_eq!(trace.best[0].len(), 2);
        assert_eq!(trace.best[1].len(), 5);
        for w in trace.records.windows(2) {
            assert!(w[1].best[0] <= w[0].best[0] && w[1].best[1] <= w[0].best[1]);
        }
    }

    #[test]
    fn gate_settings_run_and_are_deterministic() {
        let t1 = sphere("a", 3, 2.0);
        let t2 = sphere("b", 3, 2.0);
        for rmp in [0.0, 1.0] {
            let a = run_mfea([&t1, &t2], &cfg(rmp), &RngStream::new(8)).unwrap();
            let b = run_mfea([&t1, &t2], &cfg(rmp), &RngStream::new(8)).unwrap();
            assert_eq!(a, b);
            let best = a.final_best();
            assert!(best[0] < 1e-2 && best[1] < 1e-2, "rmp {rmp}: {best:?}");
        }
    }

    #[test]
    fn identical_tasks_converge_symmetrically() {
        let t1 = sphere("a", 5, 3.0);
        let t2 = sphere("b", 5, 3.0);
        let (mut s1, mut s2) = (0.0, 0.0);
        for seed in 0..20 {
            let trace = run_mfea([&t1, &t2], &cfg(0.3), &RngStream::new(seed)).unwrap();
            let best = trace.final_best();
            assert!(best[0] < 1e-2 && best[1] < 1e-2);
            s1 += best[0];
            s2 += best[1];
        }
        let ratio = s1.max(s2) / s1.min(s2);
        assert!(ratio <= 2.0, "mean error ratio {ratio}");
    }
}
