//! Type-1 and interval type-2 PI fuzzy logic controllers.
//!
//! Both controllers take the error `e` and its change `ė` as inputs, with
//! three Gaussian membership functions per input, and produce the change of
//! control signal `u̇`. A fixed 3x3 rulebase maps `(E_i, Ė_j)` to one of five
//! crisp consequents, `u̇_{i+j-1}`.
//!
//! Genome layout (decoded values, gene order used by the chromosomes):
//!
//! | kind | e means | e stds | ė means | ė stds | consequents | total |
//! |------|---------|--------|---------|--------|-------------|-------|
//! | T1   | 0..3    | 3..6 `δ` | 6..9  | 9..12 `δ` | 12..17   | 17 |
//! | IT2  | 0..3    | 3..9 `(δ_l, δ_r)` pairs | 9..12 | 12..18 pairs | 18..23 | 23 |
//!
//! IT2 outputs are obtained with Karnik–Mendel type reduction followed by
//! midpoint defuzzification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transfer::GeneMatching;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlcKind {
    #[serde(rename = "t1")]
    T1,
    #[serde(rename = "it2")]
    IT2,
}

impl FlcKind {
    pub fn gene_count(self) -> usize {
        match self {
            FlcKind::T1 => 17,
            FlcKind::IT2 => 23,
        }
    }

    fn stds_per_input(self) -> usize {
        match self {
            FlcKind::T1 => 3,
            FlcKind::IT2 => 6,
        }
    }
}

/// Consequent index (0-based) fired by rule `(E_i, Ė_j)`.
pub const RULEBASE: [[usize; 3]; 3] = [[0, 1, 2], [1, 2, 3], [2, 3, 4]];

/// Gaussian membership function with a possibly uncertain standard deviation.
/// For type-1 sets `std_lower == std_upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianMf {
    pub mean: f64,
    pub std_lower: f64,
    pub std_upper: f64,
}

impl GaussianMf {
    pub fn type1(mean: f64, std: f64) -> Self {
        Self {
            mean,
            std_lower: std,
            std_upper: std,
        }
    }

    fn grade(mean: f64, std: f64, x: f64) -> f64 {
        let z = (x - mean) / std;
        (-0.5 * z * z).exp()
    }

    pub fn lower(&self, x: f64) -> f64 {
        Self::grade(self.mean, self.std_lower, x)
    }

    pub fn upper(&self, x: f64) -> f64 {
        Self::grade(self.mean, self.std_upper, x)
    }
}

/// Decoded controller that satisfies the ordering constraints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlcGenome {
    pub kind: FlcKind,
    pub e: [GaussianMf; 3],
    pub edot: [GaussianMf; 3],
    pub consequents: [f64; 5],
}

/// Smallest standard deviation a decoded genome may carry.
pub const DEFAULT_MIN_STD: f64 = 0.01;

/// Re-ranks raw decoded genes so the genome satisfies its constraints:
/// ascending means per input, ascending consequents, `δ_l <= δ_r` per IT2
/// set. Standard deviations below `min_std` are raised to it.
pub fn enforce_flc_constraints(kind: FlcKind, raw: &[f64], min_std: f64) -> Result<FlcGenome> {
    let mut genes = raw.to_vec();
    if genes.len() != kind.gene_count() {
        return Err(Error::config(format!(
            "{kind:?} genome needs {} genes, got {}",
            kind.gene_count(),
            genes.len()
        )));
    }
    rerank_genes(kind, &mut genes);
    for range in std_ranges(kind) {
        for s in &mut genes[range] {
            if !(*s >= min_std) {
                *s = min_std;
            }
        }
    }
    Ok(genome_from_ordered(kind, &genes))
}

/// In-place re-ranking of a gene vector in the genome layout. Works on
/// normalized genes too, as long as each group shares one affine decoding.
pub fn rerank_genes(kind: FlcKind, genes: &mut [f64]) {
    let s = kind.stds_per_input();
    let e_means = 0..3;
    let ed_means = 3 + s..6 + s;
    let cons = 6 + 2 * s..11 + 2 * s;
    for r in [e_means, ed_means, cons] {
        genes[r].sort_by(f64::total_cmp);
    }
    if kind == FlcKind::IT2 {
        for range in std_ranges(kind) {
            for pair in genes[range].chunks_exact_mut(2) {
                if pair[0] > pair[1] {
                    pair.swap(0, 1);
                }
            }
        }
    }
}

fn std_ranges(kind: FlcKind) -> [std::ops::Range<usize>; 2] {
    let s = kind.stds_per_input();
    [3..3 + s, 6 + s..6 + 2 * s]
}

fn genome_from_ordered(kind: FlcKind, g: &[f64]) -> FlcGenome {
    let s = kind.stds_per_input();
    let mfs = |means: usize, stds: usize| -> [GaussianMf; 3] {
        std::array::from_fn(|i| match kind {
            FlcKind::T1 => GaussianMf::type1(g[means + i], g[stds + i]),
            FlcKind::IT2 => GaussianMf {
                mean: g[means + i],
                std_lower: g[stds + 2 * i],
                std_upper: g[stds + 2 * i + 1],
            },
        })
    };
    FlcGenome {
        kind,
        e: mfs(0, 3),
        edot: mfs(3 + s, 6 + s),
        consequents: std::array::from_fn(|k| g[6 + 2 * s + k]),
    }
}

impl FlcGenome {
    /// Gene vector in the genome layout.
    pub fn to_genes(&self) -> Vec<f64> {
        let mut g = Vec::with_capacity(self.kind.gene_count());
        for input in [&self.e, &self.edot] {
            g.extend(input.iter().map(|m| m.mean));
            for m in input {
                match self.kind {
                    FlcKind::T1 => g.push(m.std_lower),
                    FlcKind::IT2 => g.extend([m.std_lower, m.std_upper]),
                }
            }
        }
        g.extend(self.consequents);
        g
    }

    /// Crisp output for inputs `(e, ė)`.
    pub fn infer(&self, e: f64, edot: f64) -> f64 {
        match self.kind {
            FlcKind::T1 => t1_inference(self, e, edot),
            FlcKind::IT2 => it2_inference_km(self, e, edot),
        }
    }

    /// Lower and upper firing strength of every rule plus its consequent,
    /// in rulebase order.
    pub fn firing_intervals(&self, e: f64, edot: f64) -> [(f64, f64, f64); 9] {
        let mut out = [(0.0, 0.0, 0.0); 9];
        for i in 0..3 {
            let (el, eu) = (self.e[i].lower(e), self.e[i].upper(e));
            for j in 0..3 {
                let (dl, du) = (self.edot[j].lower(edot), self.edot[j].upper(edot));
                out[3 * i + j] = (el * dl, eu * du, self.consequents[RULEBASE[i][j]]);
            }
        }
        out
    }
}

/// Type-1 output: product firing, weighted average of the consequents.
/// Uses the lower standard deviations, so it is also the "lower" T1
/// embedded system of an IT2 genome.
pub fn t1_inference(genome: &FlcGenome, e: f64, edot: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..3 {
        let fe = genome.e[i].lower(e);
        for j in 0..3 {
            let f = fe * genome.edot[j].lower(edot);
            num += f * genome.consequents[RULEBASE[i][j]];
            den += f;
        }
    }
    if den > 0.0 && den.is_finite() {
        num / den
    } else {
        genome.consequents[2]
    }
}

/// Output interval `[y_l, y_r]` of Karnik–Mendel type reduction.
///
/// `rules` holds `(lower firing, upper firing, consequent)`. Returns `None`
/// when no rule fires.
pub fn km_interval(rules: &[(f64, f64, f64)]) -> Option<(f64, f64)> {
    if !rules.iter().any(|r| r.1 > 0.0) {
        return None;
    }
    let mut sorted = rules.to_vec();
    sorted.sort_by(|a, b| a.2.total_cmp(&b.2));
    let yl = km_endpoint(&sorted, true)?;
    let yr = km_endpoint(&sorted, false)?;
    Some((yl, yr))
}

/// Iterative KM procedure on rules sorted by consequent. For the left
/// endpoint rules below the switch point take their upper firing and the rest
/// their lower firing; mirrored for the right endpoint.
fn km_endpoint(rules: &[(f64, f64, f64)], left: bool) -> Option<f64> {
    let n = rules.len();
    let weighted = |switch: usize| -> Option<f64> {
        let (mut num, mut den) = (0.0, 0.0);
        for (i, &(lo, hi, y)) in rules.iter().enumerate() {
            let f = if (i < switch) == left { hi } else { lo };
            num += f * y;
            den += f;
        }
        (den > 0.0).then(|| num / den)
    };
    let (mut num, mut den) = (0.0, 0.0);
    for &(lo, hi, y) in rules {
        let f = 0.5 * (lo + hi);
        num += f * y;
        den += f;
    }
    let mut y = num / den;
    // switch = number of rules whose consequent lies at or below y
    let mut switch = rules.partition_point(|r| r.2 <= y);
    for _ in 0..=n {
        let next = match weighted(switch) {
            Some(v) => v,
            None => return km_exhaustive(rules, left),
        };
        let next_switch = rules.partition_point(|r| r.2 <= next);
        y = next;
        if next_switch == switch {
            return Some(y);
        }
        switch = next_switch;
    }
    Some(y)
}

/// Fallback used when an iterate has no firing weight at all.
fn km_exhaustive(rules: &[(f64, f64, f64)], left: bool) -> Option<f64> {
    let mut best: Option<f64> = None;
    for switch in 0..=rules.len() {
        let (mut num, mut den) = (0.0, 0.0);
        for (i, &(lo, hi, y)) in rules.iter().enumerate() {
            let f = if (i < switch) == left { hi } else { lo };
            num += f * y;
            den += f;
        }
        if den > 0.0 {
            let v = num / den;
            best = Some(match best {
                None => v,
                Some(b) if left => b.min(v),
                Some(b) => b.max(v),
            });
        }
    }
    best
}

/// IT2 output: KM type reduction over the nine rules, then the midpoint of
/// `[y_l, y_r]`. Falls back to the centre consequent when nothing fires.
pub fn it2_inference_km(genome: &FlcGenome, e: f64, edot: f64) -> f64 {
    match km_interval(&genome.firing_intervals(e, edot)) {
        Some((yl, yr)) => 0.5 * (yl + yr),
        None => genome.consequents[2],
    }
}

/// Fixed gene matching between the T1 and IT2 genomes.
#[derive(Debug, Clone, PartialEq)]
pub struct FlcMatching {
    /// IT2 target genes from T1 donor genes; the `δ_r` genes are unmatched
    /// and keep the receiving chromosome's values.
    pub it2_from_t1: GeneMatching,
    /// T1 target genes from IT2 donor genes (`δ` from `δ_l`).
    pub t1_from_it2: GeneMatching,
}

impl FlcMatching {
    /// `(target, source)` pairs of [`it2_from_t1`](Self::it2_from_t1).
    pub fn it2_from_t1_pairs() -> Vec<(usize, usize)> {
        t1_to_it2_positions().into_iter().map(|(t1, it2)| (it2, t1)).collect()
    }

    /// `(target, source)` pairs of [`t1_from_it2`](Self::t1_from_it2).
    pub fn t1_from_it2_pairs() -> Vec<(usize, usize)> {
        t1_to_it2_positions()
    }
}

/// `(T1 gene, IT2 gene)` for each of the 17 T1 genes.
fn t1_to_it2_positions() -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(17);
    for i in 0..3 {
        v.push((i, i)); // e means
        v.push((3 + i, 3 + 2 * i)); // e std -> e lower std
        v.push((6 + i, 9 + i)); // ė means
        v.push((9 + i, 12 + 2 * i)); // ė std -> ė lower std
    }
    for k in 0..5 {
        v.push((12 + k, 18 + k));
    }
    v.sort_unstable();
    v
}

/// The fixed T1 <-> IT2 matching tables.
pub fn flc_gene_matching() -> FlcMatching {
    let it2 = FlcKind::IT2.gene_count();
    let t1 = FlcKind::T1.gene_count();
    FlcMatching {
        it2_from_t1: GeneMatching::from_pairs(t1, it2, &FlcMatching::it2_from_t1_pairs())
            .expect("static table"),
        t1_from_it2: GeneMatching::from_pairs(it2, t1, &FlcMatching::t1_from_it2_pairs())
            .expect("static table"),
    }
}

/// Decoding ranges of the genome groups.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlcBounds {
    pub mean: (f64, f64),
    pub std: (f64, f64),
    pub consequent: (f64, f64),
}

impl Default for FlcBounds {
    fn default() -> Self {
        Self {
            mean: (-1.5, 1.5),
            std: (DEFAULT_MIN_STD, 2.0),
            consequent: (0.0, 1.0),
        }
    }
}

impl FlcBounds {
    /// Per-gene lower and upper bounds in the genome layout.
    pub fn vectors(&self, kind: FlcKind) -> (Vec<f64>, Vec<f64>) {
        let s = kind.stds_per_input();
        let mut lo = Vec::with_capacity(kind.gene_count());
        let mut hi = Vec::with_capacity(kind.gene_count());
        for _ in 0..2 {
            lo.extend([self.mean.0; 3]);
            hi.extend([self.mean.1; 3]);
            lo.extend(std::iter::repeat_n(self.std.0, s));
            hi.extend(std::iter::repeat_n(self.std.1, s));
        }
        lo.extend([self.consequent.0; 5]);
        hi.extend([self.consequent.1; 5]);
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use crate::transfer::{transfer_chromosome, BiasEstimate};
    use crate::task::Chromosome;
    use rand::Rng;

    fn symmetric_t1() -> FlcGenome {
        let raw = [
            -1.0, 0.0, 1.0, 0.5, 0.5, 0.5, -1.0, 0.0, 1.0, 0.5, 0.5, 0.5, 0.0, 0.25, 0.5, 0.75, 1.0,
        ];
        enforce_flc_constraints(FlcKind::T1, &raw, DEFAULT_MIN_STD).unwrap()
    }

    fn random_raw(kind: FlcKind, rng: &mut RngStream) -> Vec<f64> {
        let (lo, hi) = FlcBounds::default().vectors(kind);
        lo.iter().zip(&hi).map(|(l, h)| rng.random_range(*l..*h)).collect()
    }

    #[test]
    fn gene_counts() {
        assert_eq!(FlcKind::T1.gene_count(), 17);
        assert_eq!(FlcKind::IT2.gene_count(), 23);
        assert!(enforce_flc_constraints(FlcKind::T1, &[0.0; 16], 0.01).is_err());
        let (lo, hi) = FlcBounds::default().vectors(FlcKind::IT2);
        assert_eq!((lo.len(), hi.len()), (23, 23));
    }

    #[test]
    fn constraints_sort_and_swap() {
        let mut raw = symmetric_t1().to_genes();
        raw[0..3].copy_from_slice(&[0.5, -1.0, 0.0]);
        let g = enforce_flc_constraints(FlcKind::T1, &raw, 0.01).unwrap();
        assert_eq!([g.e[0].mean, g.e[1].mean, g.e[2].mean], [-1.0, 0.0, 0.5]);

        let mut raw = vec![0.0; 23];
        raw[0..3].copy_from_slice(&[-1.0, 0.0, 1.0]);
        raw[3..9].copy_from_slice(&[0.8, 0.3, 0.2, 0.4, 0.0, 0.5]);
        raw[9..12].copy_from_slice(&[1.0, -1.0, 0.0]);
        raw[12..18].fill(0.6);
        raw[18..23].copy_from_slice(&[0.9, 0.1, 0.5, 0.3, 0.7]);
        let g = enforce_flc_constraints(FlcKind::IT2, &raw, 0.01).unwrap();
        assert_eq!((g.e[0].std_lower, g.e[0].std_upper), (0.3, 0.8));
        assert_eq!((g.e[1].std_lower, g.e[1].std_upper), (0.2, 0.4));
        assert_eq!((g.e[2].std_lower, g.e[2].std_upper), (0.01, 0.5));
        assert_eq!(g.consequents, [0.1, 0.3, 0.5, 0.7, 0.9]);
        assert_eq!([g.edot[0].mean, g.edot[2].mean], [-1.0, 1.0]);
    }

    #[test]
    fn constraints_are_idempotent() {
        let mut rng = RngStream::new(12);
        for kind in [FlcKind::T1, FlcKind::IT2] {
            for _ in 0..200 {
                let g = enforce_flc_constraints(kind, &random_raw(kind, &mut rng), 0.01).unwrap();
                let again = enforce_flc_constraints(kind, &g.to_genes(), 0.01).unwrap();
                assert_eq!(g, again);
            }
        }
    }

    #[test]
    fn t1_examples() {
        let mut g = symmetric_t1();
        assert!((t1_inference(&g, 0.0, 0.0) - 0.5).abs() < 1e-12);
        g.consequents = [0.3; 5];
        for (e, ed) in [(0.0, 0.0), (3.0, -2.0), (-0.4, 0.9)] {
            assert!((t1_inference(&g, e, ed) - 0.3).abs() < 1e-12);
        }
        let mut g = symmetric_t1();
        for m in g.e.iter_mut().chain(g.edot.iter_mut()) {
            m.std_lower = 0.05;
            m.std_upper = 0.05;
        }
        assert!((t1_inference(&g, -1.0, -1.0) - g.consequents[0]).abs() < 1e-9);
        // far outside every set: all firings underflow to zero
        assert_eq!(t1_inference(&g, 1e6, 1e6), g.consequents[2]);
    }

    #[test]
    fn km_two_rule_example() {
        let (yl, yr) = km_interval(&[(0.5, 1.0, 0.0), (0.5, 1.0, 1.0)]).unwrap();
        assert!((yl - 1.0 / 3.0).abs() < 1e-12);
        assert!((yr - 2.0 / 3.0).abs() < 1e-12);
        assert!(km_interval(&[(0.0, 0.0, 1.0)]).is_none());
    }

    #[test]
    fn it2_single_rule_and_fallback() {
        let mut rng = RngStream::new(1);
        let mut g = enforce_flc_constraints(FlcKind::IT2, &random_raw(FlcKind::IT2, &mut rng), 0.01).unwrap();
        for (i, m) in g.e.iter_mut().enumerate() {
            m.mean = i as f64 * 10.0;
            m.std_lower = 0.05;
            m.std_upper = 0.1;
        }
        for (j, m) in g.edot.iter_mut().enumerate() {
            m.mean = j as f64 * 10.0;
            m.std_lower = 0.05;
            m.std_upper = 0.1;
        }
        assert!((it2_inference_km(&g, 10.0, 20.0) - g.consequents[3]).abs() < 1e-12);
        assert_eq!(it2_inference_km(&g, 1e6, -1e6), g.consequents[2]);
    }

    #[test]
    fn it2_collapses_to_t1() {
        let mut rng = RngStream::new(2);
        for _ in 0..500 {
            let mut g = enforce_flc_constraints(FlcKind::IT2, &random_raw(FlcKind::IT2, &mut rng), 0.01).unwrap();
            for m in g.e.iter_mut().chain(g.edot.iter_mut()) {
                m.std_upper = m.std_lower;
            }
            let (e, ed) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            assert!((it2_inference_km(&g, e, ed) - t1_inference(&g, e, ed)).abs() < 1e-12);
        }
    }

    #[test]
    fn outputs_stay_within_consequents_and_nest() {
        let mut rng = RngStream::new(3);
        for _ in 0..500 {
            let g = enforce_flc_constraints(FlcKind::IT2, &random_raw(FlcKind::IT2, &mut rng), 0.01).unwrap();
            let (e, ed) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let lo = g.consequents[0];
            let hi = g.consequents[4];
            let y = it2_inference_km(&g, e, ed);
            assert!(y >= lo - 1e-12 && y <= hi + 1e-12);
            let t = t1_inference(&g, e, ed);
            assert!(t >= lo - 1e-12 && t <= hi + 1e-12);

            let rules = g.firing_intervals(e, ed);
            let (num, den) = rules
                .iter()
                .fold((0.0, 0.0), |(n, d), r| (n + 0.5 * (r.0 + r.1) * r.2, d + 0.5 * (r.0 + r.1)));
            if den > 0.0 {
                let (yl, yr) = km_interval(&rules).unwrap();
                let mid = num / den;
                assert!(yl <= mid + 1e-12 && mid <= yr + 1e-12);
            }
        }
    }

    #[test]
    fn fixed_matching_tables() {
        let m = flc_gene_matching();
        assert_eq!(m.it2_from_t1.d_target(), 23);
        assert_eq!(m.it2_from_t1.matched_count(), 17);
        assert_eq!(m.t1_from_it2.matched_count(), 17);
        for r in [4, 6, 8, 13, 15, 17] {
            assert_eq!(m.it2_from_t1.index_map[r], None);
        }
        assert_eq!(m.it2_from_t1.index_map[3], Some(3));
        assert_eq!(m.it2_from_t1.index_map[5], Some(4));
        assert_eq!(m.t1_from_it2.index_map[16], Some(22));
    }

    #[test]
    fn transferred_lower_std_above_upper_is_swapped() {
        let m = flc_gene_matching();
        let t1 = symmetric_t1().to_genes();
        let mut donor = t1.clone();
        donor[3] = 0.9; // δ_E1
        let mut base = vec![0.0; 23];
        base[..].copy_from_slice(&{
            let mut raw = vec![0.3; 23];
            raw[0..3].copy_from_slice(&[-1.0, 0.0, 1.0]);
            raw[9..12].copy_from_slice(&[-1.0, 0.0, 1.0]);
            raw
        });
        let zero_bias = BiasEstimate::new(vec![Some(0.0); 17], vec![Some(0.0); 23], 1);
        // genes here are decoded values; clamp does not bite below 1
        let out = transfer_chromosome(
            &Chromosome { genes: donor, fitness: None, feasible: true },
            Some(&Chromosome { genes: base, fitness: None, feasible: true }),
            &zero_bias,
            &m.it2_from_t1,
        )
        .unwrap();
        assert_eq!(out.genes[3], 0.9);
        assert_eq!(out.genes[4], 0.3);
        let g = enforce_flc_constraints(FlcKind::IT2, &out.genes, 0.01).unwrap();
        assert_eq!((g.e[0].std_lower, g.e[0].std_upper), (0.3, 0.9));
    }

    #[test]
    fn matching_round_trip_is_identity() {
        let m = flc_gene_matching();
        let t1: Vec<f64> = (0..17).map(|i| i as f64 / 20.0).collect();
        let base = Chromosome::new(vec![0.99; 23]);
        let z17 = vec![Some(0.0); 17];
        let z23 = vec![Some(0.0); 23];
        let it2 = transfer_chromosome(
            &Chromosome::new(t1.clone()),
            Some(&base),
            &BiasEstimate::new(z17.clone(), z23.clone(), 1),
            &m.it2_from_t1,
        )
        .unwrap();
        let back = transfer_chromosome(&it2, None, &BiasEstimate::new(z23, z17, 1), &m.t1_from_it2).unwrap();
        assert_eq!(back.genes, t1);
    }
}
