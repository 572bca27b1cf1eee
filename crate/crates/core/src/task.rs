//! Domain types shared by every solver: chromosomes in normalized gene space,
//! task definitions and populations.
//!
//! Genes always live in `[0, 1]`. A task maps them affinely onto its own bounds
//! only when the objective is evaluated, so chromosomes of tasks with very
//! different variable ranges can be compared and transferred gene by gene.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Objective callback, evaluated on a task-space point.
pub type Objective = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// In-place repair of normalized genes, applied before every evaluation.
pub type Repair = Arc<dyn Fn(&mut [f64]) + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Minimize,
    Maximize,
}

impl Direction {
    /// Converts an objective value into a cost that is always minimized.
    /// Non-finite values are the worst possible cost.
    pub fn cost(self, value: f64) -> f64 {
        let c = match self {
            Direction::Minimize => value,
            Direction::Maximize => -value,
        };
        if c.is_nan() {
            f64::INFINITY
        } else {
            c
        }
    }
}

/// Whether a gene is numeric or encodes a category. Categorical genes are
/// excluded from the bias arithmetic during transfer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GeneKind {
    #[default]
    Numeric,
    Categorical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    pub genes: Vec<f64>,
    /// Objective value in task units, once evaluated.
    pub fitness: Option<f64>,
    pub feasible: bool,
}

impl Chromosome {
    /// Unevaluated chromosome; genes are clamped into `[0, 1]`.
    pub fn new(mut genes: Vec<f64>) -> Self {
        clamp_unit(&mut genes);
        Self {
            genes,
            fitness: None,
            feasible: true,
        }
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }
}

/// Clamps every gene into `[0, 1]`. NaN genes are reset to 0.5.
pub fn clamp_unit(genes: &mut [f64]) {
    for g in genes.iter_mut() {
        *g = if g.is_nan() { 0.5 } else { g.clamp(0.0, 1.0) };
    }
}

/// One optimization task: bounds, objective, direction and gene kinds.
#[derive(Clone)]
pub struct TaskDefinition {
    pub id: String,
    lower: Vec<f64>,
    upper: Vec<f64>,
    gene_kind: Vec<GeneKind>,
    pub direction: Direction,
    objective: Objective,
    repair: Option<Repair>,
}

impl fmt::Debug for TaskDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TaskDefinition")
            .field("id", &self.id)
            .field("dim", &self.dim())
            .field("direction", &self.direction)
            .finish_non_exhaustive()
    }
}

impl TaskDefinition {
    pub fn new(
        id: impl Into<String>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        objective: Objective,
    ) -> Result<Self> {
        let id = id.into();
        if lower.is_empty() {
            return Err(Error::config(format!("task {id}: dimension must be positive")));
        }
        if lower.len() != upper.len() {
            return Err(Error::config(format!(
                "task {id}: {} lower bounds but {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        if let Some(i) = (0..lower.len()).find(|&i| !(lower[i] < upper[i])) {
            return Err(Error::config(format!(
                "task {id}: bound {i} has lower {} >= upper {}",
                lower[i], upper[i]
            )));
        }
        let gene_kind = vec![GeneKind::Numeric; lower.len()];
        Ok(Self {
            id,
            lower,
            upper,
            gene_kind,
            direction: Direction::Minimize,
            objective,
            repair: None,
        })
    }

    /// Same bounds `[lo, hi]` on every one of `dim` genes.
    pub fn uniform(
        id: impl Into<String>,
        dim: usize,
        lo: f64,
        hi: f64,
        objective: Objective,
    ) -> Result<Self> {
        Self::new(id, vec![lo; dim], vec![hi; dim], objective)
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    pub fn with_gene_kinds(mut self, kinds: Vec<GeneKind>) -> Result<Self> {
        if kinds.len() != self.dim() {
            return Err(Error::config(format!(
                "task {}: {} gene kinds for dimension {}",
                self.id,
                kinds.len(),
                self.dim()
            )));
        }
        self.gene_kind = kinds;
        Ok(self)
    }

    pub fn with_repair(mut self, repair: Repair) -> Self {
        self.repair = Some(repair);
        self
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn gene_kind(&self) -> &[GeneKind] {
        &self.gene_kind
    }

    /// Maps normalized genes onto the task's bounds.
    pub fn decode_genes(&self, genes: &[f64]) -> Result<Vec<f64>> {
        if genes.len() != self.dim() {
            return Err(Error::config(format!(
                "task {}: chromosome has {} genes, task dimension is {}",
                self.id,
                genes.len(),
                self.dim()
            )));
        }
        Ok(genes
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(g, (lo, hi))| lo + g * (hi - lo))
            .collect())
    }

    pub fn decode(&self, chromosome: &Chromosome) -> Result<Vec<f64>> {
        self.decode_genes(&chromosome.genes)
    }

    /// Inverse of [`decode_genes`](Self::decode_genes). Not clamped.
    pub fn encode(&self, point: &[f64]) -> Result<Vec<f64>> {
        if point.len() != self.dim() {
            return Err(Error::config(format!(
                "task {}: point has {} coordinates, task dimension is {}",
                self.id,
                point.len(),
                self.dim()
            )));
        }
        Ok(point
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(x, (lo, hi))| (x - lo) / (hi - lo))
            .collect())
    }

    /// Objective at a task-space point.
    pub fn objective_at(&self, point: &[f64]) -> f64 {
        (self.objective)(point)
    }

    /// Repairs, decodes and evaluates the chromosome, caching its fitness.
    pub fn evaluate(&self, chromosome: &mut Chromosome) -> Result<f64> {
        if let Some(repair) = &self.repair {
            repair(&mut chromosome.genes);
        }
        let point = self.decode(chromosome)?;
        let value = (self.objective)(&point);
        chromosome.fitness = Some(value);
        chromosome.feasible = value.is_finite();
        Ok(value)
    }

    /// Minimization cost of an evaluated chromosome.
    pub fn cost(&self, chromosome: &Chromosome) -> Result<f64> {
        chromosome
            .fitness
            .map(|f| self.direction.cost(f))
            .ok_or_else(|| Error::internal(format!("task {}: unevaluated chromosome", self.id)))
    }
}

/// Population of one task, kept sorted best-to-worst by the solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub task_id: String,
    pub members: Vec<Chromosome>,
    pub capacity: usize,
    pub direction: Direction,
}

impl Population {
    pub fn new(
        task_id: impl Into<String>,
        members: Vec<Chromosome>,
        direction: Direction,
    ) -> Self {
        let capacity = members.len();
        Self {
            task_id: task_id.into(),
            members,
            capacity,
            direction,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Stable in-place sort, best first.
    pub fn sort(&mut self) -> Result<()> {
        sort_members(&mut self.members, self.direction)
    }

    pub fn best(&self) -> Option<&Chromosome> {
        self.members.first()
    }
}

/// Returns `pop` sorted best-to-worst under `direction`; ties keep insertion order.
pub fn sort_population(mut pop: Population, direction: Direction) -> Result<Population> {
    pop.direction = direction;
    pop.sort()?;
    Ok(pop)
}

pub(crate) fn sort_members(members: &mut [Chromosome], direction: Direction) -> Result<()> {
    if let Some(i) = members.iter().position(|c| c.fitness.is_none()) {
        return Err(Error::internal(format!(
            "cannot sort population: member {i} has no fitness"
        )));
    }
    members.sort_by(|a, b| compare_cost(a, b, direction));
    Ok(())
}

fn compare_cost(a: &Chromosome, b: &Chromosome, direction: Direction) -> Ordering {
    // fitness presence is checked by the caller
    let ca = direction.cost(a.fitness.unwrap_or(f64::NAN));
    let cb = direction.cost(b.fitness.unwrap_or(f64::NAN));
    ca.total_cmp(&cb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zero_objective() -> Objective {
        Arc::new(|_: &[f64]| 0.0)
    }

    fn evaluated(f: f64, tag: f64) -> Chromosome {
        Chromosome {
            genes: vec![tag],
            fitness: Some(f),
            feasible: true,
        }
    }

    #[test]
    fn decode_endpoints_and_midpoint() {
        let task = TaskDefinition::uniform("t", 2, -5.0, 5.0, zero_objective()).unwrap();
        assert_eq!(task.decode_genes(&[0.0, 1.0]).unwrap(), vec![-5.0, 5.0]);
        assert_eq!(task.decode_genes(&[0.5, 0.5]).unwrap(), vec![0.0, 0.0]);
        let wide = TaskDefinition::uniform("w", 1, -100.0, 100.0, zero_objective()).unwrap();
        assert_eq!(wide.decode_genes(&[0.25]).unwrap(), vec![-50.0]);
    }

    #[test]
    fn decode_rejects_wrong_length() {
        let task = TaskDefinition::uniform("t", 3, 0.0, 1.0, zero_objective()).unwrap();
        assert!(matches!(task.decode_genes(&[0.1]), Err(Error::Config(_))));
    }

    #[test]
    fn bounds_are_validated() {
        assert!(TaskDefinition::new("t", vec![1.0], vec![1.0], zero_objective()).is_err());
        assert!(TaskDefinition::new("t", vec![0.0, 0.0], vec![1.0], zero_objective()).is_err());
        assert!(TaskDefinition::new("t", vec![], vec![], zero_objective()).is_err());
        let t = TaskDefinition::uniform("t", 2, 0.0, 1.0, zero_objective()).unwrap();
        assert!(t.with_gene_kinds(vec![GeneKind::Numeric]).is_err());
    }

    #[test]
    fn sort_minimize_and_maximize() {
        let pop = Population::new(
            "t",
            vec![evaluated(3.0, 0.0), evaluated(1.0, 1.0), evaluated(2.0, 2.0)],
            Direction::Minimize,
        );
        let sorted = sort_population(pop.clone(), Direction::Minimize).unwrap();
        let f: Vec<_> = sorted.members.iter().map(|c| c.fitness.unwrap()).collect();
        assert_eq!(f, vec![1.0, 2.0, 3.0]);
        let sorted = sort_population(pop, Direction::Maximize).unwrap();
        let f: Vec<_> = sorted.members.iter().map(|c| c.fitness.unwrap()).collect();
        assert_eq!(f, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn sort_is_stable_for_equal_fitness() {
        let members: Vec<_> = (0..6).map(|i| evaluated(1.0, i as f64)).collect();
        let sorted = sort_population(Population::new("t", members.clone(), Direction::Minimize), Direction::Minimize)
            .unwrap();
        assert_eq!(sorted.members, members);
    }

    /// Insertion sort: stable by construction.
    fn naive_stable_sort(mut v: Vec<Chromosome>) -> Vec<Chromosome> {
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1].fitness.unwrap() > v[j].fitness.unwrap() {
                v.swap(j - 1, j);
                j -= 1;
            }
        }
        v
    }

    #[test]
    fn near_ties_match_naive_stable_sort() {
        let members = vec![
            evaluated(0.5, 0.0),
            evaluated(0.5 - 1e-16, 1.0),
            evaluated(0.5, 2.0),
        ];
        let expected = naive_stable_sort(members.clone());
        let sorted =
            sort_population(Population::new("t", members, Direction::Minimize), Direction::Minimize).unwrap();
        assert_eq!(sorted.members, expected);
        assert_eq!(sorted.members[0].genes, vec![1.0]);
        assert_eq!(sorted.members[1].genes, vec![0.0]);
    }

    #[test]
    fn sort_rejects_unevaluated() {
        let pop = Population::new(
            "t",
            vec![evaluated(1.0, 0.0), Chromosome::new(vec![0.2])],
            Direction::Minimize,
        );
        assert!(matches!(pop.clone().sort(), Err(Error::Internal(_))));
    }

    #[test]
    fn evaluate_sets_fitness_from_decoded_point() {
        let task = TaskDefinition::uniform(
            "sum",
            2,
            -1.0,
            3.0,
            Arc::new(|x: &[f64]| x.iter().sum()),
        )
        .unwrap();
        let mut c = Chromosome::new(vec![0.25, 1.0]);
        let f = task.evaluate(&mut c).unwrap();
        assert_eq!(f, 0.0 + 3.0);
        assert_eq!(c.fitness, Some(3.0));
    }

    proptest! {
        #[test]
        fn encode_inverts_decode(
            bounds in prop::collection::vec((-1e3f64..1e3, 1e-3f64..1e3), 1..12),
            seed_genes in prop::collection::vec(0.0f64..=1.0, 12),
        ) {
            let lower: Vec<f64> = bounds.iter().map(|b| b.0).collect();
            let upper: Vec<f64> = bounds.iter().map(|b| b.0 + b.1).collect();
            let task = TaskDefinition::new("p", lower, upper, zero_objective()).unwrap();
            let genes = &seed_genes[..task.dim()];
            let back = task.encode(&task.decode_genes(genes).unwrap()).unwrap();
            for (a, b) in genes.iter().zip(&back) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
