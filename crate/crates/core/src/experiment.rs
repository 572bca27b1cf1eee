//! Experiment runner: solver × repetition grids on one two-task problem.
//!
//! An experiment directory holds
//!
//! * `manifest.json`: the fully resolved configuration plus generated problem
//!   data; running it again reproduces every CSV byte for byte,
//! * `traces/<solver>_rep<NNN>.csv`: per-generation trace with columns
//!   `generation,evaluations,best_T1,mean_T1,best_T2,mean_T2`,
//! * `best/<solver>_rep<NNN>.json`: final best points (with the `json` flag),
//! * `summary.json` and `scores.csv`: per-solver mean/std of the final best
//!   values and the performance score across solvers.
//!
//! Existing trace files are reused, so an interrupted run resumes where it
//! stopped. Configuration files are JSON; see [`ExperimentConfig`].

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::benchmarks::{load_composed_pair, registry_pair};
use crate::error::{Error, Result};
use crate::metrics::{normalize_to_baseline, performance_score, summarize_runs, AlgorithmSummary, NormalizedSummary, ResultTensor};
use crate::rng::RngStream;
use crate::solvers::{run_mfea, run_mtga, run_soea_pair, GenerationRecord, MatchingSetting, RunTrace, SolverConfig};
use crate::tank::{itae_from_fitness, FlcProblem};
use crate::task::{Direction, TaskDefinition};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const SUMMARY_FILE: &str = "summary.json";
pub const SCORES_FILE: &str = "scores.csv";
pub const TRACE_DIR: &str = "traces";
pub const TRACE_HEADER: [&str; 6] = ["generation", "evaluations", "best_T1", "mean_T1", "best_T2", "mean_T2"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Mtga,
    Soea,
    Mfea,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Mtga => "mtga",
            SolverKind::Soea => "soea",
            SolverKind::Mfea => "mfea",
        }
    }

    /// SOEA runs one independent GA per task with half of the budget each.
    pub fn run(self, tasks: [&TaskDefinition; 2], config: &SolverConfig, rng: &RngStream) -> Result<RunTrace> {
        match self {
            SolverKind::Mtga => run_mtga(tasks, config, rng),
            SolverKind::Soea => run_soea_pair(tasks, config, rng),
            SolverKind::Mfea => run_mfea(tasks, config, rng),
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The two-task problem of an experiment.
///
/// JSON forms: `{"benchmark": "B1"}`, `{"file": "pair.txt"}`, `"flc-cotank"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemSpec {
    /// Registry id, see [`crate::benchmarks::registry`].
    Benchmark(String),
    /// Benchmark data file with two task blocks.
    File(PathBuf),
    /// Simultaneous T1 / IT2 fuzzy controller design on the coupled tank.
    FlcCotank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmitFlags {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for EmitFlags {
    fn default() -> Self {
        Self {
            csv: true,
            json: true,
            svg: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub solvers: Vec<SolverKind>,
    pub problem: ProblemSpec,
    /// Repetition `l` runs every solver with seed `base_seed + l`.
    pub repetitions: usize,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    pub emit: EmitFlags,
    /// Parameters shared by all solvers.
    pub solver: SolverConfig,
    /// Plant and controller settings, used by `flc-cotank`.
    pub flc: FlcProblem,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "experiment".into(),
            solvers: vec![SolverKind::Mtga, SolverKind::Soea],
            problem: ProblemSpec::Benchmark("sphere-ackley".into()),
            repetitions: 20,
            base_seed: 0,
            output_dir: PathBuf::from("results"),
            emit: EmitFlags::default(),
            solver: SolverConfig::default(),
            flc: FlcProblem::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::config("repetitions: must be >= 1"));
        }
        if self.solvers.is_empty() {
            return Err(Error::config("solvers: at least one solver is required"));
        }
        let mut seen = self.solvers.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.solvers.len() {
            return Err(Error::config("solvers: listed more than once"));
        }
        if self.base_seed.checked_add(self.repetitions as u64).is_none() {
            return Err(Error::config("base_seed: overflows with the repetition count"));
        }
        self.solver.validate().map_err(|e| prefix("solver", e))?;
        if self.solvers.contains(&SolverKind::Mtga) && self.solver.n_t > self.solver.population_size {
            return Err(Error::config(format!(
                "solver.n_t: {} exceeds population_size {}",
                self.solver.n_t, self.solver.population_size
            )));
        }
        if self.problem == ProblemSpec::FlcCotank {
            self.flc.validate().map_err(|e| prefix("flc", e))?;
        }
        Ok(())
    }

    /// Fills problem-dependent defaults: `flc-cotank` with random matching
    /// gets the fixed T1/IT2 gene matching table.
    pub fn resolved(&self) -> Self {
        let mut c = self.clone();
        if c.problem == ProblemSpec::FlcCotank && c.solver.matching == MatchingSetting::Random {
            c.solver.matching = FlcProblem::matching_setting();
        }
        c
    }

    pub fn seed(&self, repetition: usize) -> u64 {
        self.base_seed + repetition as u64
    }
}

fn prefix(field: &str, e: Error) -> Error {
    match e {
        Error::Config(m) => Error::Config(format!("{field}: {m}")),
        other => other,
    }
}

/// Everything needed to rerun an experiment, written next to its results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub manifest_version: u32,
    pub crate_version: String,
    pub config: ExperimentConfig,
    pub tasks: Vec<TaskInfo>,
    /// Benchmark data file contents of the problem, for benchmark problems.
    pub problem_data: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskInfo {
    pub id: String,
    pub dim: usize,
    pub direction: Direction,
}

/// Reads an experiment config or a manifest (its `config` is used).
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
    let config = if value.get("manifest_version").is_some() {
        serde_json::from_value::<Manifest>(value).map(|m| m.config)
    } else {
        serde_json::from_value::<ExperimentConfig>(value)
    }
    .map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
    config.validate()?;
    Ok(config)
}

/// The tasks of a problem and, for benchmarks, their data file text.
pub struct BuiltProblem {
    pub tasks: [TaskDefinition; 2],
    pub data: Option<String>,
}

pub fn build_problem(config: &ExperimentConfig) -> Result<BuiltProblem> {
    let (pair, stem) = match &config.problem {
        ProblemSpec::FlcCotank => {
            return Ok(BuiltProblem {
                tasks: config.flc.tasks()?,
                data: None,
            })
        }
        ProblemSpec::Benchmark(id) => (registry_pair(id)?, id.clone()),
        ProblemSpec::File(path) => {
            let spec = path.to_string_lossy();
            let stem = path.file_stem().map_or(spec.to_string(), |s| s.to_string_lossy().into_owned());
            (load_composed_pair(&spec)?, stem)
        }
    };
    let (a, b) = pair;
    let data = format!("{}{}", a.to_data_block(), b.to_data_block());
    let ida = format!("{stem}-T1-{}", a.base);
    let idb = format!("{stem}-T2-{}", b.base);
    Ok(BuiltProblem {
        tasks: [a.into_task(ida)?, b.into_task(idb)?],
        data: Some(data),
    })
}

/// Outcome of [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub output_dir: PathBuf,
    /// Runs executed now; the remaining ones were reused from trace files.
    pub executed: usize,
    pub reused: usize,
    pub report: ScoreReport,
}

pub fn trace_path(dir: &Path, solver: SolverKind, repetition: usize) -> PathBuf {
    dir.join(TRACE_DIR).join(format!("{solver}_rep{repetition:03}.csv"))
}

/// Runs every solver and repetition, then writes summary, scores and (with
/// the `svg` flag) plots.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    let config = config.resolved();
    let problem = build_problem(&config)?;
    let [t1, t2] = &problem.tasks;
    let dir = config.output_dir.clone();
    fs::create_dir_all(dir.join(TRACE_DIR))?;
    if config.emit.json {
        fs::create_dir_all(dir.join("best"))?;
    }

    let manifest = Manifest {
        manifest_version: 1,
        crate_version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        tasks: problem
            .tasks
            .iter()
            .map(|t| TaskInfo {
                id: t.id.clone(),
                dim: t.dim(),
                direction: t.direction,
            })
            .collect(),
        problem_data: problem.data.clone(),
    };
    write_atomic(&dir.join(MANIFEST_FILE), serde_json::to_string_pretty(&manifest)?.as_bytes())?;

    let jobs: Vec<(SolverKind, usize)> = config
        .solvers
        .iter()
        .flat_map(|&s| (0..config.repetitions).map(move |l| (s, l)))
        .collect();
    let executed = jobs
        .par_iter()
        .map(|&(solver, l)| -> Result<bool> {
            let path = trace_path(&dir, solver, l);
            if path.exists() {
                return Ok(false);
            }
            let trace = solver.run([t1, t2], &config.solver, &RngStream::new(config.seed(l)))?;
            if config.emit.json {
                let best = serde_json::json!({
                    "solver": solver.name(),
                    "repetition": l,
                    "seed": config.seed(l),
                    "task_ids": trace.task_ids,
                    "best": trace.final_best(),
                    "best_points": trace.best_points,
                });
                let p = dir.join("best").join(format!("{solver}_rep{l:03}.json"));
                write_atomic(&p, serde_json::to_string_pretty(&best)?.as_bytes())?;
            }
            // the trace is written last; its presence marks a finished run
            write_atomic(&path, trace_csv(&trace.records)?.as_bytes())?;
            Ok(true)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&x| x)
        .count();

    let report = score_directory(&dir)?;
    if config.emit.svg {
        crate::report::emit_reports(&dir)?;
    }
    Ok(ExperimentOutcome {
        output_dir: dir,
        executed,
        reused: jobs.len() - executed,
        report,
    })
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Trace CSV of a two-task run.
pub fn trace_csv(records: &[GenerationRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRACE_HEADER)?;
    for r in records {
        if r.best.len() != 2 || r.mean.len() != 2 {
            return Err(Error::internal("trace records must cover two tasks"));
        }
        w.write_record([
            r.generation.to_string(),
            r.evaluations.to_string(),
            r.best[0].to_string(),
            r.mean[0].to_string(),
            r.best[1].to_string(),
            r.mean[1].to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::internal(e.to_string()))
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<GenerationRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != TRACE_HEADER {
        return Err(Error::Report(format!("{}: unexpected header {header:?}", path.display())));
    }
    let mut records = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row = row?;
        let bad = |what: &str| Error::Report(format!("{}: row {}: bad {what}", path.display(), i + 2));
        let num = |k: usize| row[k].parse::<f64>().map_err(|_| bad(TRACE_HEADER[k]));
        records.push(GenerationRecord {
            generation: row[0].parse().map_err(|_| bad("generation"))?,
            evaluations: row[1].parse().map_err(|_| bad("evaluations"))?,
            best: vec![num(2)?, num(4)?],
            mean: vec![num(3)?, num(5)?],
        });
    }
    Ok(records)
}

/// Summary of an experiment directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub name: String,
    pub task_ids: Vec<String>,
    pub directions: Vec<Direction>,
    pub summaries: Vec<AlgorithmSummary>,
    /// Summaries relative to SOEA, when SOEA took part.
    pub normalized: Option<Vec<NormalizedSummary>>,
    /// Performance score per solver (lower is better), in `summaries` order.
    pub scores: Vec<f64>,
    /// Mean weighted ITAE per solver and task (`flc-cotank` only).
    pub weighted_itae: Option<Vec<Vec<f64>>>,
}

/// Loaded traces of an experiment directory, `traces[k][l]` for the
/// manifest's solvers in order.
pub struct ExperimentData {
    pub manifest: Manifest,
    pub traces: Vec<Vec<Vec<GenerationRecord>>>,
}

pub fn load_experiment(dir: &Path) -> Result<ExperimentData> {
    let mpath = dir.join(MANIFEST_FILE);
    if !mpath.exists() {
        return Err(Error::Report(format!("{} has no {MANIFEST_FILE}", dir.display())));
    }
    let manifest: Manifest = serde_json::from_str(&fs::read_to_string(&mpath)?)
        .map_err(|e| Error::Report(format!("{}: {e}", mpath.display())))?;
    let cfg = &manifest.config;
    let mut traces = Vec::with_capacity(cfg.solvers.len());
    for &s in &cfg.solvers {
        let mut per = Vec::with_capacity(cfg.repetitions);
        for l in 0..cfg.repetitions {
            let p = trace_path(dir, s, l);
            if !p.exists() {
                return Err(Error::Report(format!("missing trace {}", p.display())));
            }
            let t = read_trace_csv(&p)?;
            if t.is_empty() {
                return Err(Error::Report(format!("empty trace {}", p.display())));
            }
            per.push(t);
        }
        traces.push(per);
    }
    Ok(ExperimentData { manifest, traces })
}

/// Recomputes `summary.json` and `scores.csv` from the traces of `dir`.
pub fn score_directory(dir: &Path) -> Result<ScoreReport> {
    let data = load_experiment(dir)?;
    let cfg = &data.manifest.config;
    let directions: Vec<Direction> = data.manifest.tasks.iter().map(|t| t.direction).collect();
    let finals: Vec<Vec<Vec<f64>>> = data
        .traces
        .iter()
        .map(|per| per.iter().map(|t| t.last().map(|r| r.best.clone()).unwrap_or_default()).collect())
        .collect();
    let summaries = cfg
        .solvers
        .iter()
        .zip(&finals)
        .map(|(s, f)| summarize_runs(s.name(), f))
        .collect::<Result<Vec<_>>>()?;
    let scores = scores_of(&finals, &directions)?;
    let normalized = if cfg.solvers.contains(&SolverKind::Soea) {
        Some(normalize_to_baseline(&summaries, "soea")?)
    } else {
        None
    };
    let weighted_itae = (cfg.problem == ProblemSpec::FlcCotank).then(|| {
        finals
            .iter()
            .map(|per| {
                (0..2)
                    .map(|m| per.iter().map(|f| itae_from_fitness(f[m])).sum::<f64>() / per.len() as f64)
                    .collect()
            })
            .collect()
    });
    let report = ScoreReport {
        name: cfg.name.clone(),
        task_ids: data.manifest.tasks.iter().map(|t| t.id.clone()).collect(),
        directions,
        summaries,
        normalized,
        scores,
        weighted_itae,
    };
    if cfg.emit.json {
        fs::write(dir.join(SUMMARY_FILE), serde_json::to_string_pretty(&report)?)?;
    }
    if cfg.emit.csv {
        let mut w = csv::Writer::from_path(dir.join(SCORES_FILE))?;
        w.write_record(["solver", "score", "mean_T1", "std_T1", "mean_T2", "std_T2"])?;
        for (s, score) in report.summaries.iter().zip(&report.scores) {
            let mut row = vec![s.solver.clone(), score.to_string()];
            for t in &s.tasks {
                row.push(t.mean.to_string());
                row.push(t.std.to_string());
            }
            w.write_record(&row)?;
        }
        w.flush()?;
    }
    Ok(report)
}

/// Performance scores from final values `finals[k][l][m]`, turned into
/// costs so that lower is better for every task.
pub fn scores_of(finals: &[Vec<Vec<f64>>], directions: &[Direction]) -> Result<Vec<f64>> {
    let m = directions.len();
    let values = finals
        .iter()
        .map(|per| {
            (0..m)
                .map(|t| per.iter().map(|f| directions[t].cost(f[t])).collect())
                .collect()
        })
        .collect();
    performance_score(&ResultTensor::new(values)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem_spec_json_forms() {
        let b: ProblemSpec = serde_json::from_str(r#"{"benchmark": "B1"}"#).unwrap();
        assert_eq!(b, ProblemSpec::Benchmark("B1".into()));
        let f: ProblemSpec = serde_json::from_str(r#"{"file": "x.txt"}"#).unwrap();
        assert_eq!(f, ProblemSpec::File("x.txt".into()));
        let c: ProblemSpec = serde_json::from_str(r#""flc-cotank""#).unwrap();
        assert_eq!(c, ProblemSpec::FlcCotank);
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        let bad = ExperimentConfig {
            repetitions: 0,
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(Error::Config(m)) if m.contains("repetitions")));
        let dup = ExperimentConfig {
            solvers: vec![SolverKind::Soea, SolverKind::Soea],
            ..Default::default()
        };
        assert!(dup.validate().is_err());
        let typo = serde_json::from_str::<ExperimentConfig>(r#"{"repetitons": 3}"#);
        assert!(typo.is_err());
    }

    #[test]
    fn flc_resolves_fixed_matching() {
        let c = ExperimentConfig {
            problem: ProblemSpec::FlcCotank,
            ..Default::default()
        }
        .resolved();
        assert!(matches!(c.solver.matching, MatchingSetting::Fixed { .. }));
    }

    #[test]
    fn trace_csv_round_trip() {
        let recs = vec![
            GenerationRecord {
                generation: 0,
                evaluations: 20,
                best: vec![1.5, 0.1 + 0.2],
                mean: vec![2.0, 1e-300],
            },
            GenerationRecord {
                generation: 1,
                evaluations: 40,
                best: vec![1.0, 0.25],
                mean: vec![1.75, f64::INFINITY],
            },
        ];
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        fs::write(&p, trace_csv(&recs).unwrap()).unwrap();
        assert_eq!(read_trace_csv(&p).unwrap(), recs);
    }

    #[test]
    fn scores_use_costs() {
        // maximize: larger is better, so solver 0 scores lower
        let finals = vec![vec![vec![5.0], vec![6.0]], vec![vec![1.0], vec![2.0]]];
        let s = scores_of(&finals, &[Direction::Maximize]).unwrap();
        assert!(s[0] < 0.0 && s[1] > 0.0);
    }
}
