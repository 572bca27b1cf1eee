//! Cross-algorithm performance score and run summaries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Best objective `values[k][m][l]` of algorithm `k` on task `m` in
/// repetition `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTensor {
    pub values: Vec<Vec<Vec<f64>>>,
}

impl ResultTensor {
    pub fn new(values: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let t = Self { values };
        t.shape()?;
        Ok(t)
    }

    /// `(algorithms, tasks, repetitions)`; errors if the tensor is ragged or empty.
    pub fn shape(&self) -> Result<(usize, usize, usize)> {
        let k = self.values.len();
        let m = self.values.first().map_or(0, |a| a.len());
        let l = self.values.first().and_then(|a| a.first()).map_or(0, |t| t.len());
        if k == 0 || m == 0 || l == 0 {
            return Err(Error::config("result tensor needs at least one algorithm, task and repetition"));
        }
        for (ki, alg) in self.values.iter().enumerate() {
            if alg.len() != m || alg.iter().any(|t| t.len() != l) {
                return Err(Error::config(format!("result tensor is ragged at algorithm {ki}")));
            }
        }
        Ok((k, m, l))
    }
}

/// Mean and sample (n - 1) standard deviation; the deviation of a single
/// value is 0.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Performance score per algorithm: z-normalize every task's results over all
/// algorithms and repetitions, then sum each algorithm's normalized values.
/// Lower is better. A task whose results are all equal contributes 0.
pub fn performance_score(results: &ResultTensor) -> Result<Vec<f64>> {
    let (k, m, _) = results.shape()?;
    let mut scores = vec![0.0; k];
    for task in 0..m {
        let pooled: Vec<f64> = results.values.iter().flat_map(|a| a[task].iter().copied()).collect();
        let (mu, sigma) = mean_std(&pooled);
        if sigma == 0.0 || !sigma.is_finite() {
            continue;
        }
        for (s, alg) in scores.iter_mut().zip(&results.values) {
            *s += alg[task].iter().map(|b| (b - mu) / sigma).sum::<f64>();
        }
    }
    Ok(scores)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskSummary {
    pub mean: f64,
    pub std: f64,
}

/// Mean and std of the final best objectives per task for one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub solver: String,
    pub repetitions: usize,
    pub tasks: Vec<TaskSummary>,
}

/// Ratio of an algorithm's mean and std to those of a baseline algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedSummary {
    pub solver: String,
    pub mean_ratio: Vec<f64>,
    pub std_ratio: Vec<f64>,
}

/// Summarizes final best objectives `finals[l][m]` of one algorithm.
pub fn summarize_runs(solver: &str, finals: &[Vec<f64>]) -> Result<AlgorithmSummary> {
    let first = finals
        .first()
        .ok_or_else(|| Error::Report(format!("no runs to summarize for {solver}")))?;
    let m = first.len();
    if finals.iter().any(|f| f.len() != m) {
        return Err(Error::Report(format!("runs of {solver} disagree on the number of tasks")));
    }
    let tasks = (0..m)
        .map(|t| {
            let v: Vec<f64> = finals.iter().map(|f| f[t]).collect();
            let (mean, std) = mean_std(&v);
            TaskSummary { mean, std }
        })
        .collect();
    Ok(AlgorithmSummary {
        solver: solver.to_string(),
        repetitions: finals.len(),
        tasks,
    })
}

/// Normalizes every summary by the named baseline (ratio of means, ratio of stds).
pub fn normalize_to_baseline(
    summaries: &[AlgorithmSummary],
    baseline: &str,
) -> Result<Vec<NormalizedSummary>> {
    let base = summaries
        .iter()
        .find(|s| s.solver == baseline)
        .ok_or_else(|| Error::Report(format!("baseline '{baseline}' not among the summarized solvers")))?;
    Ok(summaries
        .iter()
        .map(|s| NormalizedSummary {
            solver: s.solver.clone(),
            mean_ratio: s.tasks.iter().zip(&base.tasks).map(|(a, b)| a.mean / b.mean).collect(),
            std_ratio: s.tasks.iter().zip(&base.tasks).map(|(a, b)| a.std / b.std).collect(),
        })
        .collect())
}
