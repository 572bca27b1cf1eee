//! Classical test functions with shift and rotation, and a registry of
//! two-task benchmark problems.
//!
//! A [`ComposedTask`] evaluates `f(M (x - o))` where `o` is the shift (the
//! optimum location in task units) and `M` an orthogonal rotation. Every base
//! function is arranged so that its global minimum is 0 at `z = 0`.
//!
//! The registry holds nine pairs `B1`..`B9` following the usual
//! complete / partial / no intersection of optima crossed with high / medium /
//! low landscape similarity layout, plus a `sphere-ackley` pair. Official
//! shift and rotation data are not bundled: registry entries draw seeded
//! synthetic shifts (uniform in the middle half of each range) and random
//! orthogonal rotations. Real data load through the same text format, see
//! [`parse_pair`].

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::task::TaskDefinition;

const WEIERSTRASS_A: f64 = 0.5;
const WEIERSTRASS_B: f64 = 3.0;
const WEIERSTRASS_K_MAX: i32 = 20;
/// Per-coordinate minimizer of the raw Schwefel function.
const SCHWEFEL_OPT: f64 = 420.968_746_227_503_6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseFunction {
    Sphere,
    Ackley,
    Rastrigin,
    Rosenbrock,
    Griewank,
    Weierstrass,
    Schwefel,
}

impl BaseFunction {
    pub const ALL: [BaseFunction; 7] = [
        BaseFunction::Sphere,
        BaseFunction::Ackley,
        BaseFunction::Rastrigin,
        BaseFunction::Rosenbrock,
        BaseFunction::Griewank,
        BaseFunction::Weierstrass,
        BaseFunction::Schwefel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseFunction::Sphere => "sphere",
            BaseFunction::Ackley => "ackley",
            BaseFunction::Rastrigin => "rastrigin",
            BaseFunction::Rosenbrock => "rosenbrock",
            BaseFunction::Griewank => "griewank",
            BaseFunction::Weierstrass => "weierstrass",
            BaseFunction::Schwefel => "schwefel",
        }
    }

    /// Conventional search range `[lo, hi]` per coordinate.
    pub fn default_range(self) -> (f64, f64) {
        match self {
            BaseFunction::Sphere | BaseFunction::Griewank => (-100.0, 100.0),
            BaseFunction::Ackley | BaseFunction::Rastrigin | BaseFunction::Rosenbrock => (-50.0, 50.0),
            BaseFunction::Weierstrass => (-0.5, 0.5),
            BaseFunction::Schwefel => (-500.0, 500.0),
        }
    }

    /// Value at the transformed point `z`; minimum 0 at `z = 0`.
    pub fn eval(self, z: &[f64]) -> f64 {
        let d = z.len() as f64;
        match self {
            BaseFunction::Sphere => z.iter().map(|v| v * v).sum(),
            BaseFunction::Ackley => {
                let sq = z.iter().map(|v| v * v).sum::<f64>() / d;
                let cs = z.iter().map(|v| (2.0 * std::f64::consts::PI * v).cos()).sum::<f64>() / d;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + std::f64::consts::E
            }
            BaseFunction::Rastrigin => z
                .iter()
                .map(|v| v * v - 10.0 * (2.0 * std::f64::consts::PI * v).cos() + 10.0)
                .sum(),
            BaseFunction::Rosenbrock => {
                // shifted by one so the minimizer sits at the origin
                z.windows(2)
                    .map(|w| {
                        let (a, b) = (w[0] + 1.0, w[1] + 1.0);
                        100.0 * (a * a - b).powi(2) + (a - 1.0).powi(2)
                    })
                    .sum()
            }
            BaseFunction::Griewank => {
                let s = z.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let p: f64 = z
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                1.0 + s - p
            }
            BaseFunction::Weierstrass => {
                let series = |x: f64| -> f64 {
                    (0..=WEIERSTRASS_K_MAX)
                        .map(|k| {
                            WEIERSTRASS_A.powi(k)
                                * (2.0 * std::f64::consts::PI * WEIERSTRASS_B.powi(k) * (x + 0.5)).cos()
                        })
                        .sum()
                };
                let offset = series(0.0);
                z.iter().map(|&v| series(v) - offset).sum()
            }
            BaseFunction::Schwefel => {
                let at_opt = SCHWEFEL_OPT * SCHWEFEL_OPT.sqrt().sin();
                z.iter()
                    .map(|v| {
                        let y = v + SCHWEFEL_OPT;
                        at_opt - y * y.abs().sqrt().sin()
                    })
                    .sum()
            }
        }
    }

    pub fn is_separable(self) -> bool {
        matches!(
            self,
            BaseFunction::Sphere | BaseFunction::Rastrigin | BaseFunction::Weierstrass | BaseFunction::Schwefel
        )
    }
}

impl fmt::Display for BaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaseFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BaseFunction::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::config(format!("unknown function kind '{s}'")))
    }
}

/// Base function composed with a shift and an optional rotation.
#[derive(Debug, Clone, PartialEq)]
pub struct ComposedTask {
    pub base: BaseFunction,
    pub shift: Vec<f64>,
    pub rotation: Option<DMatrix<f64>>,
    pub range: (f64, f64),
}

impl ComposedTask {
    /// Unshifted, unrotated task on the function's default range.
    pub fn new(base: BaseFunction, dim: usize) -> Self {
        Self {
            base,
            shift: vec![0.0; dim],
            rotation: None,
            range: base.default_range(),
        }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn with_range(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::config(format!("range [{lo}, {hi}] is empty")));
        }
        self.range = (lo, hi);
        Ok(self)
    }

    pub fn with_shift(mut self, shift: Vec<f64>) -> Result<Self> {
        if shift.len() != self.dim() {
            return Err(Error::config(format!(
                "shift has {} entries, dimension is {}",
                shift.len(),
                self.dim()
            )));
        }
        self.shift = shift;
        Ok(self)
    }

    pub fn with_rotation(mut self, rotation: DMatrix<f64>) -> Result<Self> {
        let d = self.dim();
        if rotation.nrows() != d || rotation.ncols() != d {
            return Err(Error::Validation(format!(
                "rotation is {}x{}, dimension is {d}",
                rotation.nrows(),
                rotation.ncols()
            )));
        }
        let err = orthogonality_error(&rotation);
        if err >= 1e-9 {
            return Err(Error::Validation(format!(
                "rotation matrix is not orthogonal (max |M M^T - I| = {err:e})"
            )));
        }
        self.rotation = Some(rotation);
        Ok(self)
    }

    /// Location of the global minimum in task units.
    pub fn optimum(&self) -> &[f64] {
        &self.shift
    }

    fn transform(&self, x: &[f64]) -> Vec<f64> {
        let centered: Vec<f64> = x.iter().zip(&self.shift).map(|(a, o)| a - o).collect();
        match &self.rotation {
            None => centered,
            Some(m) => (m * DVector::from_vec(centered)).data.into(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        eval_function(self, x)
    }

    /// Wraps the composed function as a minimization task.
    pub fn into_task(self, id: impl Into<String>) -> Result<TaskDefinition> {
        let (lo, hi) = self.range;
        let d = self.dim();
        let f = Arc::new(self);
        TaskDefinition::uniform(
            id,
            d,
            lo,
            hi,
            Arc::new(move |x: &[f64]| f.base.eval(&f.transform(x))),
        )
    }

    /// Serializes in the benchmark data file format.
    pub fn to_data_block(&self) -> String {
        let mut s = format!("{} {} {} {}\n", self.dim(), self.range.0, self.range.1, self.base);
        s.push_str(&join(&self.shift));
        s.push('\n');
        if let Some(m) = &self.rotation {
            for r in 0..m.nrows() {
                let row: Vec<f64> = m.row(r).iter().copied().collect();
                s.push_str(&join(&row));
                s.push('\n');
            }
        }
        s
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// `max |M M^T - I|`.
pub fn orthogonality_error(m: &DMatrix<f64>) -> f64 {
    let prod = m * m.transpose();
    let id = DMatrix::<f64>::identity(m.nrows(), m.ncols());
    (prod - id).abs().max()
}

/// `f(M (x - o))` for the composed task.
pub fn eval_function(f: &ComposedTask, x: &[f64]) -> Result<f64> {
    if x.len() != f.dim() {
        return Err(Error::config(format!(
            "point has {} coordinates, function dimension is {}",
            x.len(),
            f.dim()
        )));
    }
    Ok(f.base.eval(&f.transform(x)))
}

/// Haar-random orthogonal matrix from the QR factorization of a Gaussian matrix.
pub fn random_rotation(dim: usize, rng: &mut RngStream) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// How the optima of a registry pair overlap in normalized gene space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Intersection {
    Complete,
    Partial,
    None,
}

#[derive(Debug, Clone, Copy)]
struct TaskTemplate {
    base: BaseFunction,
    dim: usize,
    rotated: bool,
}

#[derive(Debug, Clone, Copy)]
struct PairTemplate {
    id: &'static str,
    intersection: Intersection,
    similarity: &'static str,
    tasks: [TaskTemplate; 2],
}

const fn tt(base: BaseFunction, dim: usize, rotated: bool) -> TaskTemplate {
    TaskTemplate { base, dim, rotated }
}

use BaseFunction::*;

const REGISTRY: [PairTemplate; 10] = [
    PairTemplate { id: "B1", intersection: Intersection::Complete, similarity: "high", tasks: [tt(Griewank, 50, true), tt(Rastrigin, 50, true)] },
    PairTemplate { id: "B2", intersection: Intersection::Complete, similarity: "medium", tasks: [tt(Ackley, 50, true), tt(Rastrigin, 50, true)] },
    PairTemplate { id: "B3", intersection: Intersection::Complete, similarity: "low", tasks: [tt(Ackley, 50, true), tt(Schwefel, 50, false)] },
    PairTemplate { id: "B4", intersection: Intersection::Partial, similarity: "high", tasks: [tt(Rastrigin, 50, true), tt(Sphere, 50, false)] },
    PairTemplate { id: "B5", intersection: Intersection::Partial, similarity: "medium", tasks: [tt(Ackley, 50, true), tt(Rosenbrock, 50, false)] },
    PairTemplate { id: "B6", intersection: Intersection::Partial, similarity: "low", tasks: [tt(Ackley, 50, true), tt(Weierstrass, 25, true)] },
    PairTemplate { id: "B7", intersection: Intersection::None, similarity: "high", tasks: [tt(Rosenbrock, 50, false), tt(Rastrigin, 50, true)] },
    PairTemplate { id: "B8", intersection: Intersection::None, similarity: "medium", tasks: [tt(Griewank, 50, true), tt(Weierstrass, 50, true)] },
    PairTemplate { id: "B9", intersection: Intersection::None, similarity: "low", tasks: [tt(Rastrigin, 50, true), tt(Schwefel, 50, false)] },
    PairTemplate { id: "sphere-ackley", intersection: Intersection::None, similarity: "high", tasks: [tt(Sphere, 30, false), tt(Ackley, 30, false)] },
];

/// Seed of the synthetic shift/rotation data of registry entries.
pub const REGISTRY_SEED: u64 = 0x4d54_4741;

/// Registry entry description.
#[derive(Debug, Clone, Serialize)]
pub struct RegistryEntry {
    pub id: &'static str,
    pub intersection: Intersection,
    pub similarity: &'static str,
    pub functions: [BaseFunction; 2],
    pub dims: [usize; 2],
    pub rotated: [bool; 2],
}

pub fn registry() -> Vec<RegistryEntry> {
    REGISTRY
        .iter()
        .map(|p| RegistryEntry {
            id: p.id,
            intersection: p.intersection,
            similarity: p.similarity,
            functions: [p.tasks[0].base, p.tasks[1].base],
            dims: [p.tasks[0].dim, p.tasks[1].dim],
            rotated: [p.tasks[0].rotated, p.tasks[1].rotated],
        })
        .collect()
}

/// Composed tasks of a registry entry, with synthetic shifts and rotations.
pub fn registry_pair(id: &str) -> Result<(ComposedTask, ComposedTask)> {
    let (index, template) = REGISTRY
        .iter()
        .enumerate()
        .find(|(_, p)| p.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::config(format!("unknown benchmark '{id}'")))?;
    let root = RngStream::new(REGISTRY_SEED).fork(index as u64);
    let mut shift_rng = root.fork(0);

    // optimum positions in normalized coordinates, drawn from the middle half
    let mut draw = |d: usize| -> Vec<f64> { (0..d).map(|_| shift_rng.random_range(0.25..0.75)).collect() };
    let [a, b] = template.tasks;
    let ua = draw(a.dim);
    let ub = match template.intersection {
        Intersection::Complete => (0..b.dim).map(|i| ua[i % a.dim]).collect(),
        Intersection::Partial => {
            let fresh = draw(b.dim);
            let shared = a.dim.min(b.dim) / 2;
            (0..b.dim).map(|i| if i < shared { ua[i] } else { fresh[i] }).collect()
        }
        Intersection::None => draw(b.dim),
    };

    let build = |t: TaskTemplate, u: Vec<f64>, stream: u64| -> Result<ComposedTask> {
        let (lo, hi) = t.base.default_range();
        let shift = u.iter().map(|v| lo + v * (hi - lo)).collect();
        let mut task = ComposedTask::new(t.base, t.dim).with_shift(shift)?;
        if t.rotated {
            task = task.with_rotation(random_rotation(t.dim, &mut root.fork(stream)))?;
        }
        Ok(task)
    };
    Ok((build(a, ua, 1)?, build(b, ub, 2)?))
}

/// Resolves a benchmark id or a data file path to two tasks.
pub fn load_task_pair(spec: &str) -> Result<(TaskDefinition, TaskDefinition)> {
    let (a, b) = load_composed_pair(spec)?;
    let ida = format!("{}-T1-{}", short_name(spec), a.base);
    let idb = format!("{}-T2-{}", short_name(spec), b.base);
    Ok((a.into_task(ida)?, b.into_task(idb)?))
}

/// Composed tasks for a benchmark id or data file path.
pub fn load_composed_pair(spec: &str) -> Result<(ComposedTask, ComposedTask)> {
    if REGISTRY.iter().any(|p| p.id.eq_ignore_ascii_case(spec)) {
        return registry_pair(spec);
    }
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        return parse_pair(&text, path);
    }
    Err(Error::config(format!(
        "'{spec}' is neither a registry benchmark nor an existing data file"
    )))
}

fn short_name(spec: &str) -> String {
    Path::new(spec)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string())
}

/// Parses a benchmark data file holding two task blocks.
///
/// Each block is a header line `dim range_lo range_hi kind`, a line with the
/// `dim` shift values and optionally `dim` rows of the rotation matrix. Blank
/// lines and lines starting with `#` are ignored.
pub fn parse_pair(text: &str, path: &Path) -> Result<(ComposedTask, ComposedTask)> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.split_whitespace().collect()))
        .collect();
    let load_err = |line: usize, message: String| Error::Load {
        path: path.to_path_buf(),
        line,
        message,
    };
    let numbers = |line: usize, toks: &[&str], expected: usize| -> Result<Vec<f64>> {
        if toks.len() != expected {
            return Err(load_err(line, format!("expected {expected} values, found {}", toks.len())));
        }
        toks.iter()
            .map(|t| t.parse::<f64>().map_err(|_| load_err(line, format!("'{t}' is not a number"))))
            .collect()
    };
    let is_header = |toks: &[&str]| toks.len() == 4 && toks[3].parse::<f64>().is_err();

    let mut tasks = Vec::new();
    let mut pos = 0;
    while pos < lines.len() {
        let (line, toks) = &lines[pos];
        if !is_header(toks) {
            return Err(load_err(*line, "expected header 'dim range_lo range_hi kind'".into()));
        }
        let dim: usize = toks[0]
            .parse()
            .ok()
            .filter(|&d| d > 0)
            .ok_or_else(|| load_err(*line, format!("invalid dimension '{}'", toks[0])))?;
        let lo = numbers(*line, &toks[1..3], 2)?;
        let kind = BaseFunction::from_str(toks[3]).map_err(|e| load_err(*line, e.to_string()))?;
        pos += 1;
        let (sline, stoks) = lines
            .get(pos)
            .ok_or_else(|| load_err(*line, "missing shift vector".into()))?;
        let shift = numbers(*sline, stoks, dim)?;
        pos += 1;
        let mut task = ComposedTask::new(kind, dim)
            .with_range(lo[0], lo[1])
            .map_err(|e| load_err(*line, e.to_string()))?
            .with_shift(shift)?;
        if pos < lines.len() && !is_header(&lines[pos].1) {
            let mut rows = Vec::with_capacity(dim * dim);
            for r in 0..dim {
                let (rline, rtoks) = lines.get(pos + r).ok_or_else(|| {
                    load_err(lines[lines.len() - 1].0, format!("rotation needs {dim} rows, found {r}"))
                })?;
                rows.extend(numbers(*rline, rtoks, dim)?);
            }
            let m = DMatrix::from_row_slice(dim, dim, &rows);
            task = task.with_rotation(m)?;
            pos += dim;
        }
        tasks.push(task);
    }
    match <[ComposedTask; 2]>::try_from(tasks) {
        Ok([a, b]) => Ok((a, b)),
        Err(tasks) => Err(load_err(
            lines.last().map_or(1, |l| l.0),
            format!("expected 2 task blocks, found {}", tasks.len()),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn optimum_values() {
        assert_eq!(ComposedTask::new(Sphere, 3).eval(&[0.0; 3]).unwrap(), 0.0);
        let a = ComposedTask::new(Ackley, 4).eval(&[0.0; 4]).unwrap();
        assert!(a.abs() < 1e-12, "{a}");
        for base in BaseFunction::ALL {
            for d in [1, 2, 10, 50] {
                let v = ComposedTask::new(base, d).eval(&vec![0.0; d]).unwrap();
                assert!(v.abs() < 1e-9, "{base} d={d}: {v}");
            }
        }
    }

    #[test]
    fn rastrigin_hand_value() {
        let v = ComposedTask::new(Rastrigin, 2).eval(&[1.0, 1.0]).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(ComposedTask::new(Sphere, 3).eval(&[0.0; 2]), Err(Error::Config(_))));
    }

    #[test]
    fn registry_tasks_vanish_at_their_optimum() {
        for entry in registry() {
            let (a, b) = registry_pair(entry.id).unwrap();
            for t in [&a, &b] {
                let v = t.eval(t.optimum()).unwrap();
                assert!(v.abs() < 1e-9, "{} {}: {v}", entry.id, t.base);
                if let Some(m) = &t.rotation {
                    assert!(orthogonality_error(m) < 1e-9);
                }
                let (lo, hi) = t.range;
                let q = (hi - lo) / 4.0;
                assert!(t.shift.iter().all(|&o| o >= lo + q - 1e-12 && o <= hi - q + 1e-12));
            }
        }
        let (a, b) = registry_pair("B1").unwrap();
        assert_eq!((a.base, b.base, a.dim(), b.dim()), (Griewank, Rastrigin, 50, 50));
        assert!(a.rotation.is_some() && b.rotation.is_some());
    }

    #[test]
    fn registry_is_deterministic() {
        let (a1, b1) = registry_pair("B5").unwrap();
        let (a2, b2) = registry_pair("b5").unwrap();
        assert_eq!(a1, a2);
        assert_eq!(b1, b2);
        assert!(registry_pair("B10").is_err());
    }

    #[test]
    fn complete_intersection_shares_normalized_optimum() {
        let (a, b) = registry_pair("B2").unwrap();
        let ta = a.clone().into_task("a").unwrap();
        let tb = b.clone().into_task("b").unwrap();
        let ua = ta.encode(a.optimum()).unwrap();
        let ub = tb.encode(b.optimum()).unwrap();
        for (x, y) in ua.iter().zip(&ub) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn file_round_trip_and_identity_file() {
        let path = Path::new("pair.txt");
        let (a, b) = registry_pair("B6").unwrap();
        let text = format!("# pair\n{}\n{}", a.to_data_block(), b.to_data_block());
        let (pa, pb) = parse_pair(&text, path).unwrap();
        assert_eq!(pa.base, a.base);
        assert_eq!(pb.dim(), 25);
        let x: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin() * 10.0).collect();
        assert!((pa.eval(&x).unwrap() - a.eval(&x).unwrap()).abs() < 1e-9);

        let text = "2 -5 5 sphere\n0 0\n2 -5 5 sphere\n0 0\n";
        let (pa, pb) = parse_pair(text, path).unwrap();
        assert_eq!(pa, pb);
        let t = pa.into_task("t").unwrap();
        assert_eq!(t.decode_genes(&[0.5, 0.5]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn file_errors_carry_line_numbers() {
        let path = Path::new("bad.txt");
        let err = parse_pair("2 -5 5 sphere\n0 x\n", path).unwrap_err();
        assert!(matches!(err, Error::Load { line: 2, .. }), "{err}");
        let err = parse_pair("2 -5 5 sphere\n0 0\n\n1 0\n1 1\n2 -5 5 sphere\n0 0\n", path).unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err}");
        let err = parse_pair("2 -5 5 sphere\n0 0\n", path).unwrap_err();
        assert!(matches!(err, Error::Load { .. }), "{err}");
        let err = parse_pair("2 -5 5 cube\n0 0\n2 -5 5 sphere\n0 0\n", path).unwrap_err();
        assert!(matches!(err, Error::Load { line: 1, .. }), "{err}");
    }

    proptest! {
        #[test]
        fn rotation_keeps_minimum(seed in any::<u64>(), d in 1usize..12) {
            let m = random_rotation(d, &mut RngStream::new(seed));
            prop_assert!(orthogonality_error(&m) < 1e-9);
            for base in BaseFunction::ALL {
                let shift: Vec<f64> = (0..d).map(|i| i as f64 * 0.01).collect();
                let t = ComposedTask::new(base, d).with_shift(shift.clone()).unwrap().with_rotation(m.clone()).unwrap();
                prop_assert!(t.eval(&shift).unwrap().abs() < 1e-9);
            }
        }

        #[test]
        fn separable_kinds_sum_coordinatewise(x in prop::collection::vec(-5.0f64..5.0, 1..10)) {
            for base in [Sphere, Rastrigin] {
                let whole = ComposedTask::new(base, x.len()).eval(&x).unwrap();
                let parts: f64 = x.iter().map(|&v| base.eval(&[v])).sum();
                prop_assert!((whole - parts).abs() < 1e-12);
            }
        }
    }
}
