use crate::error::{Error, Result};
use crate::operators::elitist_select;
use crate::rng::RngStream;
use crate::task::TaskDefinition;

use super::{breed, finish, init_population, record, EvalCounter, RunTrace, SolverConfig};

/// Single-task generational GA: permutation pairing, SBX, polynomial mutation
/// and elitist selection over parents plus offspring.
pub fn run_soea(task: &TaskDefinition, config: &SolverConfig, rng: &mut RngStream) -> Result<RunTrace> {
    config.validate()?;
    let n = config.population_size;
    let mut counter = EvalCounter::new(config.eval_budget);
    if !counter.can_afford(n) {
        return Err(Error::config(format!(
            "evaluation budget {} cannot cover the initial population of {n}",
            config.eval_budget
        )));
    }
    let mut pop = init_population(task, n, &mut counter, rng)?;
    let mut records = vec![record(0, counter.used(), &[&pop])];
    for generation in 1..=config.max_generations {
        if !counter.can_afford(n) {
            break;
        }
        let mut offspring = breed(&pop.members, config.sbx, config.mutation, rng)?;
        counter.evaluate_all(task, &mut offspring)?;
        pop = elitist_select(&pop, offspring)?;
        records.push(record(generation, counter.used(), &[&pop]));
    }
    finish("soea", &[task], &[&pop], records)
}

/// Two independent single-task GAs, one per task, each with half of the
/// evaluation budget. Task `m` draws from fork `m` of `rng`.
pub fn run_soea_pair(
    tasks: [&TaskDefinition; 2],
    config: &SolverConfig,
    rng: &RngStream,
) -> Result<RunTrace> {
    let per_task = SolverConfig {
        eval_budget: config.eval_budget / 2,
        ..config.clone()
    };
    let parts = tasks
        .iter()
        .enumerate()
        .map(|(m, task)| run_soea(task, &per_task, &mut rng.fork(m as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RunTrace::zip_independent("soea", parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn sphere_1d() -> TaskDefinition {
        TaskDefinition::uniform("sphere", 1, -100.0, 100.0, Arc::new(|x: &[f64]| x[0] * x[0])).unwrap()
    }

    #[test]
    fn constant_objective_keeps_size_and_value() {
        let task = TaskDefinition::uniform("c", 3, 0.0, 1.0, Arc::new(|_: &[f64]| 4.0)).unwrap();
        let cfg = SolverConfig {
            population_size: 10,
            max_generations: 20,
            eval_budget: 10_000,
            ..Default::default()
        };
        let trace = run_soea(&task, &cfg, &mut RngStream::new(1)).unwrap();
        assert_eq!(trace.records.len(), 21);
        assert!(trace.records.iter().all(|r| r.best == vec![4.0] && r.mean == vec![4.0]));
    }

    #[test]
    fn converges_on_sphere() {
        let cfg = SolverConfig {
            population_size: 100,
            max_generations: 500,
            eval_budget: 1_000_000,
            ..Default::default()
        };
        for seed in 0..5 {
            let trace = run_soea(&sphere_1d(), &cfg, &mut RngStream::new(seed)).unwrap();
            assert!(trace.final_best()[0] < 1e-4, "seed {seed}: {:?}", trace.final_best());
        }
    }

    #[test]
    fn same_seed_same_trace() {
        let cfg = SolverConfig {
            population_size: 20,
            max_generations: 30,
            ..Default::default()
        };
        let a = run_soea(&sphere_1d(), &cfg, &mut RngStream::new(9)).unwrap();
        let b = run_soea(&sphere_1d(), &cfg, &mut RngStream::new(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn budget_is_respected() {
        let cfg = SolverConfig {
            population_size: 10,
            max_generations: 1000,
            eval_budget: 255,
            ..Default::default()
        };
        let trace = run_soea(&sphere_1d(), &cfg, &mut RngStream::new(2)).unwrap();
        assert_eq!(trace.total_evaluations(), 250);
        let tiny = SolverConfig {
            eval_budget: 5,
            ..cfg
        };
        assert!(run_soea(&sphere_1d(), &tiny, &mut RngStream::new(2)).is_err());
    }
}
