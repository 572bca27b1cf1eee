use crate::error::{Error, Result};
use crate::operators::elitist_select;
use crate::rng::RngStream;
use crate::task::{Population, TaskDefinition};
use crate::transfer::{build_transfer_population, top_mean, BiasEstimate};

use super::{breed, finish, init_population, record, EvalCounter, RunTrace, SolverConfig};

/// Multi-tasking GA on two tasks.
///
/// Each task keeps its own population of `N`. Per generation the top-`n_t`
/// means of both populations are computed, then the tasks are updated one
/// after the other: the mating pool of task `m` holds `n_t` bias-corrected
/// transfers from the other task's best chromosomes plus its own best
/// `N - n_t`. Offspring compete with the pre-transfer population `P_m`, so
/// transferred chromosomes only survive through their children. Task 2 sees
/// task 1's already updated population within the same generation.
///
/// Task `m` draws all of its randomness from fork `m` of `rng`; with
/// `n_t = 0` each task therefore replays [`run_soea`](super::run_soea) on
/// that fork exactly.
pub fn run_mtga(
    tasks: [&TaskDefinition; 2],
    config: &SolverConfig,
    rng: &RngStream,
) -> Result<RunTrace> {
    config.validate()?;
    let n = config.population_size;
    let n_t = config.n_t;
    if n_t > n {
        return Err(Error::config(format!("n_t = {n_t} exceeds population_size {n}")));
    }
    let plans = config.matching.plans(tasks[0].dim(), tasks[1].dim())?;
    let mut streams = [rng.fork(0), rng.fork(1)];
    let mut counter = EvalCounter::new(config.eval_budget);
    if !counter.can_afford(2 * n) {
        return Err(Error::config(format!(
            "evaluation budget {} cannot cover the initial populations of 2 x {n}",
            config.eval_budget
        )));
    }

    let mut pops: [Population; 2] = [
        init_population(tasks[0], n, &mut counter, &mut streams[0])?,
        init_population(tasks[1], n, &mut counter, &mut streams[1])?,
    ];
    let mut records = vec![record(0, counter.used(), &[&pops[0], &pops[1]])];

    for generation in 1..=config.max_generations {
        if !counter.can_afford(2 * n) {
            break;
        }
        let means = if n_t > 0 && !config.recompute_means_per_transfer {
            Some([
                top_mean(&pops[0], n_t, tasks[0].gene_kind())?,
                top_mean(&pops[1], n_t, tasks[1].gene_kind())?,
            ])
        } else {
            None
        };
        for m in 0..2 {
            let other = 1 - m;
            let mating = if n_t == 0 {
                pops[m].members.clone()
            } else {
                let bias = match &means {
                    Some(means) => {
                        BiasEstimate::new(means[other].clone(), means[m].clone(), n_t)
                    }
                    None => BiasEstimate::estimate(
                        &pops[other],
                        tasks[other].gene_kind(),
                        &pops[m],
                        tasks[m].gene_kind(),
                        n_t,
                    )?,
                };
                build_transfer_population(&pops[m], &pops[other], &bias, &plans[m], &mut streams[m])?
            };
            let mut offspring = breed(&mating, config.sbx, config.mutation, &mut streams[m])?;
            counter.evaluate_all(tasks[m], &mut offspring)?;
            pops[m] = elitist_select(&pops[m], offspring)?;
        }
        records.push(record(generation, counter.used(), &[&pops[0], &pops[1]]));
    }
    finish("mtga", &tasks, &[&pops[0], &pops[1]], records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{run_soea, MatchingSetting};
    use crate::task::{Direction, GeneKind};
    use std::sync::Arc;

    fn sphere(id: &str, d: usize, center: f64) -> TaskDefinition {
        TaskDefinition::uniform(
            id,
            d,
            -100.0,
            100.0,
            Arc::new(move |x: &[f64]| x.iter().map(|v| (v - center).powi(2)).sum()),
        )
        .unwrap()
    }

    fn small() -> SolverConfig {
        SolverConfig {
            population_size: 20,
            max_generations: 50,
            n_t: 8,
            eval_budget: 1_000_000,
            ..Default::default()
        }
    }

    #[test]
    fn identical_1d_spheres_converge() {
        let t1 = sphere("a", 1, 0.0);
        let t2 = sphere("b", 1, 0.0);
        let mut hits = 0;
        for seed in 0..20 {
            let cfg = SolverConfig {
                max_generations: 200,
                ..small()
            };
            let trace = run_mtga([&t1, &t2], &cfg, &RngStream::new(seed)).unwrap();
            let best = trace.final_best();
            if best[0] < 1e-3 && best[1] < 1e-3 {
                hits += 1;
            }
        }
        assert!(hits >= 18, "{hits}/20");
    }

    #[test]
    fn zero_transfer_replays_soea() {
        let t1 = sphere("a", 3, 10.0);
        let t2 = sphere("b", 5, -20.0);
        let cfg = SolverConfig { n_t: 0, ..small() };
        let root = RngStream::new(77);
        let mt = run_mtga([&t1, &t2], &cfg, &root).unwrap();
        for (m, task) in [&t1, &t2].into_iter().enumerate() {
            let so = run_soea(task, &cfg, &mut root.fork(m as u64)).unwrap();
            assert_eq!(mt.records.len(), so.records.len());
            for (a, b) in mt.records.iter().zip(&so.records) {
                assert_eq!(a.best[m], b.best[0]);
                assert_eq!(a.mean[m], b.mean[0]);
            }
            assert_eq!(mt.best[m], so.best[0]);
        }
    }

    #[test]
    fn best_is_monotone_and_budget_respected() {
        let t1 = sphere("a", 4, 30.0);
        let t2 = sphere("b", 6, -30.0);
        let cfg = SolverConfig {
            eval_budget: 2_000,
            max_generations: 1000,
            ..small()
        };
        let trace = run_mtga([&t1, &t2], &cfg, &RngStream::new(3)).unwrap();
        assert_eq!(trace.total_evaluations(), 2_000);
        for w in trace.records.windows(2) {
            assert!(w[1].best[0] <= w[0].best[0]);
            assert!(w[1].best[1] <= w[0].best[1]);
        }
    }

    #[test]
    fn runs_with_all_options() {
        let t1 = sphere("a", 3, 1.0)
            .with_gene_kinds(vec![GeneKind::Numeric, GeneKind::Categorical, GeneKind::Numeric])
            .unwrap();
        let t2 = sphere("b", 3, 2.0);
        let cfg = SolverConfig {
            recompute_means_per_transfer: true,
            matching: MatchingSetting::Fixed {
                into_first: vec![(0, 0), (2, 2)],
                into_second: vec![(0, 0), (1, 1), (2, 2)],
            },
            ..small()
        };
        let a = run_mtga([&t1, &t2], &cfg, &RngStream::new(5)).unwrap();
        let b = run_mtga([&t1, &t2], &cfg, &RngStream::new(5)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.records.len(), 51);
    }

    #[test]
    fn rejects_oversized_transfer() {
        let t = sphere("a", 2, 0.0);
        let cfg = SolverConfig { n_t: 21, ..small() };
        assert!(run_mtga([&t, &t], &cfg, &RngStream::new(0)).is_err());
    }

    #[test]
    fn maximization_task() {
        let t1 = TaskDefinition::uniform("max", 2, -1.0, 1.0, Arc::new(|x: &[f64]| -(x[0] * x[0] + x[1] * x[1])))
            .unwrap()
            .with_direction(Direction::Maximize);
        let t2 = sphere("b", 2, 0.0);
        let trace = run_mtga([&t1, &t2], &small(), &RngStream::new(1)).unwrap();
        for w in trace.records.windows(2) {
            assert!(w[1].best[0] >= w[0].best[0]);
        }
        assert!(trace.final_best()[0] > -1e-3);
    }
}
