//! Coupled-tank water-level plant and the weighted ITAE fitness of a fuzzy
//! PI controller.
//!
//! Tank 1 receives the pump flow `Q1` and drains through the baffle into tank
//! 2; the controller tracks the level `H2` of tank 2:
//!
//! ```text
//! A1 dH1/dt = Q1 - a1 sqrt(H1) - a3 ssqrt(H1 - H2)
//! A2 dH2/dt = Q2 - a2 sqrt(H2) + a3 ssqrt(H1 - H2)
//! ```
//!
//! with `ssqrt(x) = sign(x) sqrt(|x|)`. The `a1` outlet term is only active
//! when outlet 1 is open.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{enforce_flc_constraints, flc_gene_matching, rerank_genes, FlcBounds, FlcGenome, FlcKind, FlcMatching};
use crate::solvers::MatchingSetting;
use crate::task::{Direction, TaskDefinition};

/// Physical constants, reference schedule and timing of one plant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlantConfig {
    pub name: String,
    /// Cross-sectional areas (cm^2).
    pub a1: f64,
    pub a2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub outlet1_open: bool,
    /// Constant inflow of pump 2 (cm^3/s).
    pub q2: f64,
    /// `(sample index, level cm)` pairs; each level holds from its sample on.
    pub setpoints: Vec<(usize, f64)>,
    /// Dead time between controller output and pump flow (s).
    pub input_delay: f64,
    /// Number of samples `N_p`.
    pub horizon: usize,
    /// Sample period `T_s` (s).
    pub sample_period: f64,
    /// RK4 substeps per sample.
    pub substeps: usize,
    pub initial_levels: (f64, f64),
}

impl Default for PlantConfig {
    fn default() -> Self {
        Self {
            name: "I".into(),
            a1: 36.52,
            a2: 36.52,
            alpha1: 5.6186,
            alpha2: 5.6186,
            alpha3: 10.0,
            outlet1_open: false,
            q2: 0.0,
            setpoints: vec![(0, 15.0)],
            input_delay: 0.0,
            horizon: 200,
            sample_period: 1.0,
            substeps: 10,
            initial_levels: (0.0, 0.0),
        }
    }
}

impl PlantConfig {
    /// The four evaluation plants: nominal, 2 s input delay, two-step
    /// setpoint 22.5 then 7.5 cm (switching at half horizon), and weaker
    /// coupling `a3 = 8`.
    pub fn standard_suite() -> [PlantConfig; 4] {
        let base = PlantConfig::default();
        [
            base.clone(),
            PlantConfig {
                name: "II".into(),
                input_delay: 2.0,
                ..base.clone()
            },
            PlantConfig {
                name: "III".into(),
                setpoints: vec![(0, 22.5), (base.horizon / 2, 7.5)],
                ..base.clone()
            },
            PlantConfig {
                name: "IV".into(),
                alpha3: 8.0,
                ..base
            },
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let consts = [self.a1, self.a2, self.alpha1, self.alpha2, self.alpha3, self.q2, self.input_delay];
        if consts.iter().any(|c| !(*c >= 0.0)) {
            return Err(Error::config(format!("plant {}: physical constants must be >= 0", self.name)));
        }
        if self.a1 == 0.0 || self.a2 == 0.0 {
            return Err(Error::config(format!("plant {}: tank areas must be positive", self.name)));
        }
        if self.horizon == 0 || self.substeps == 0 || !(self.sample_period > 0.0) {
            return Err(Error::config(format!(
                "plant {}: horizon, substeps and sample period must be positive",
                self.name
            )));
        }
        Ok(())
    }

    pub fn setpoint_at(&self, sample: usize) -> f64 {
        self.setpoints
            .iter()
            .rfind(|(k, _)| *k <= sample)
            .map_or(0.0, |(_, level)| *level)
    }

    /// Dead time in whole samples.
    pub fn delay_samples(&self) -> usize {
        (self.input_delay / self.sample_period - 1e-9).ceil().max(0.0) as usize
    }
}

fn ssqrt(x: f64) -> f64 {
    x.signum() * x.abs().sqrt()
}

/// `(dH1/dt, dH2/dt)`. Negative levels count as empty.
pub fn plant_derivatives(h1: f64, h2: f64, q1: f64, q2: f64, config: &PlantConfig) -> (f64, f64) {
    Rates::new(config).at((h1, h2), q1, q2)
}

/// Plant constants with the areas inverted once.
#[derive(Clone, Copy)]
struct Rates {
    inv_a1: f64,
    inv_a2: f64,
    alpha1: f64,
    alpha2: f64,
    alpha3: f64,
}

impl Rates {
    fn new(config: &PlantConfig) -> Self {
        Self {
            inv_a1: 1.0 / config.a1,
            inv_a2: 1.0 / config.a2,
            alpha1: if config.outlet1_open { config.alpha1 } else { 0.0 },
            alpha2: config.alpha2,
            alpha3: config.alpha3,
        }
    }

    #[inline]
    fn at(&self, h: (f64, f64), q1: f64, q2: f64) -> (f64, f64) {
        let h1 = h.0.max(0.0);
        let h2 = h.1.max(0.0);
        let outlet1 = if self.alpha1 > 0.0 { self.alpha1 * h1.sqrt() } else { 0.0 };
        let between = self.alpha3 * ssqrt(h1 - h2);
        (
            (q1 - outlet1 - between) * self.inv_a1,
            (q2 - self.alpha2 * h2.sqrt() + between) * self.inv_a2,
        )
    }
}

/// One RK4 step; a step that would drive a level below zero is redone as two
/// half steps (up to `depth` levels) before clamping at empty.
fn rk4_step(rates: &Rates, h: (f64, f64), q1: f64, q2: f64, dt: f64, depth: u32) -> (f64, f64) {
    let f = |s: (f64, f64)| rates.at(s, q1, q2);
    let k1 = f(h);
    let k2 = f((h.0 + 0.5 * dt * k1.0, h.1 + 0.5 * dt * k1.1));
    let k3 = f((h.0 + 0.5 * dt * k2.0, h.1 + 0.5 * dt * k2.1));
    let k4 = f((h.0 + dt * k3.0, h.1 + dt * k3.1));
    let next = (
        h.0 + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        h.1 + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    );
    if (next.0 < 0.0 || next.1 < 0.0) && depth > 0 {
        let mid = rk4_step(rates, h, q1, q2, 0.5 * dt, depth - 1);
        return rk4_step(rates, mid, q1, q2, 0.5 * dt, depth - 1);
    }
    (next.0.max(0.0), next.1.max(0.0))
}

/// Scaling between physical signals and the controller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LoopConfig {
    /// The controller sees `e / e_scale` (e in cm).
    pub e_scale: f64,
    /// The controller sees `ė / edot_scale` (ė in cm/s).
    pub edot_scale: f64,
    /// Controller output `y` in the consequent range `[0, 1]` maps to the
    /// control rate `u̇ = rate_gain * (2y - 1)` (1/s).
    pub rate_gain: f64,
    /// Pump flow per unit control signal (cm^3/s).
    pub output_gain: f64,
    pub u_limits: (f64, f64),
}

impl Default for LoopConfig {
    fn default() -> Self {
        Self {
            e_scale: 15.0,
            edot_scale: 1.0,
            rate_gain: 1.0,
            output_gain: 50.0,
            u_limits: (0.0, 1.0),
        }
    }
}

/// Sampled closed- or open-loop response.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SimTrace {
    pub time: Vec<f64>,
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
    pub setpoint: Vec<f64>,
    pub e: Vec<f64>,
    pub edot: Vec<f64>,
    pub u: Vec<f64>,
    pub q1: Vec<f64>,
    /// Set when the state became non-finite and the run stopped early.
    pub aborted: bool,
}

impl SimTrace {
    fn with_capacity(n: usize) -> Self {
        let v = || Vec::with_capacity(n);
        Self {
            time: v(),
            h1: v(),
            h2: v(),
            setpoint: v(),
            e: v(),
            edot: v(),
            u: v(),
            q1: v(),
            aborted: false,
        }
    }

    /// `sum_t t |e(t)|` with `t = 1..N_p`.
    pub fn itae(&self) -> f64 {
        if self.aborted {
            return f64::INFINITY;
        }
        itae(&self.e)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("time,h1,h2,setpoint,e,edot,u,q1\n");
        for k in 0..self.time.len() {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                self.time[k], self.h1[k], self.h2[k], self.setpoint[k], self.e[k], self.edot[k], self.u[k], self.q1[k]
            ));
        }
        s
    }
}

/// `sum_t t |e_t|` over samples numbered from 1.
pub fn itae(errors: &[f64]) -> f64 {
    errors.iter().enumerate().map(|(k, e)| (k + 1) as f64 * e.abs()).sum()
}

/// Source of the control signal for one simulation.
enum Drive<'a> {
    Controller(&'a FlcGenome),
    Prescribed(&'a [f64]),
}

fn simulate(drive: Drive<'_>, plant: &PlantConfig, lc: &LoopConfig) -> Result<SimTrace> {
    plant.validate()?;
    let n = plant.horizon;
    let ts = plant.sample_period;
    let dt = ts / plant.substeps as f64;
    let mut trace = SimTrace::with_capacity(n);
    let mut delay: VecDeque<f64> = std::iter::repeat_n(0.0, plant.delay_samples()).collect();
    let rates = Rates::new(plant);
    let mut h = plant.initial_levels;
    let mut u = 0.0;
    let mut e_prev = None;
    for k in 0..n {
        let sp = plant.setpoint_at(k);
        let e = sp - h.1;
        let edot = e_prev.map_or(0.0, |p| (e - p) / ts);
        e_prev = Some(e);
        u = match drive {
            Drive::Controller(flc) => {
                let y = flc.infer(e / lc.e_scale, edot / lc.edot_scale);
                let rate = lc.rate_gain * (2.0 * y - 1.0);
                (u + rate * ts).clamp(lc.u_limits.0, lc.u_limits.1)
            }
            Drive::Prescribed(seq) => seq.get(k).copied().unwrap_or(0.0),
        };
        delay.push_back(u);
        let applied = delay.pop_front().unwrap_or(u);
        let q1 = lc.output_gain * applied;

        trace.time.push(k as f64 * ts);
        trace.h1.push(h.0);
        trace.h2.push(h.1);
        trace.setpoint.push(sp);
        trace.e.push(e);
        trace.edot.push(edot);
        trace.u.push(u);
        trace.q1.push(q1);

        for _ in 0..plant.substeps {
            h = rk4_step(&rates, h, q1, plant.q2, dt, 2);
        }
        if !(h.0.is_finite() && h.1.is_finite() && u.is_finite()) {
            trace.aborted = true;
            break;
        }
    }
    Ok(trace)
}

/// Closed loop with a fuzzy PI controller: per sample `e = r - H2`,
/// `ė` by backward difference (0 at the first sample), `u += u̇ T_s` clamped to
/// the actuator limits, `Q1 = output_gain * u` after the input delay.
pub fn simulate_closed_loop(flc: &FlcGenome, plant: &PlantConfig, lc: &LoopConfig) -> Result<SimTrace> {
    simulate(Drive::Controller(flc), plant, lc)
}

/// Plant driven by a prescribed control sequence (zero past its end).
pub fn simulate_open_loop(u: &[f64], plant: &PlantConfig, lc: &LoopConfig) -> Result<SimTrace> {
    simulate(Drive::Prescribed(u), plant, lc)
}

/// Weighted ITAE sum that stands in for an aborted simulation.
pub const ABORTED_ITAE: f64 = 1e12;
/// Regularization of the fitness denominator.
pub const FITNESS_EPS: f64 = 1e-9;

/// `sum_p w_p ITAE_p`; aborted plants count as [`ABORTED_ITAE`].
pub fn weighted_itae(flc: &FlcGenome, plants: &[PlantConfig], weights: &[f64], lc: &LoopConfig) -> Result<f64> {
    if plants.len() != weights.len() {
        return Err(Error::config(format!(
            "{} plants but {} weights",
            plants.len(),
            weights.len()
        )));
    }
    let mut total = 0.0;
    for (plant, w) in plants.iter().zip(weights) {
        let trace = simulate_closed_loop(flc, plant, lc)?;
        if trace.aborted {
            return Ok(ABORTED_ITAE);
        }
        total += w * trace.itae();
    }
    Ok(if total.is_finite() { total } else { ABORTED_ITAE })
}

/// Fitness `F = 1 / (sum_p w_p ITAE_p + eps)`, to be maximized.
pub fn itae_fitness(flc: &FlcGenome, plants: &[PlantConfig], weights: &[f64], lc: &LoopConfig) -> Result<f64> {
    Ok(fitness_from_itae(weighted_itae(flc, plants, weights, lc)?))
}

pub fn fitness_from_itae(weighted: f64) -> f64 {
    1.0 / (weighted + FITNESS_EPS)
}

/// Weighted ITAE recovered from a fitness value.
pub fn itae_from_fitness(fitness: f64) -> f64 {
    1.0 / fitness - FITNESS_EPS
}

/// Default plant weights; plant III's ITAE is several times larger than the
/// others and is down-weighted.
pub const DEFAULT_WEIGHTS: [f64; 4] = [1.0, 1.0, 1.0 / 3.0, 1.0];

/// Simultaneous T1 / IT2 controller design problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlcProblem {
    pub plants: Vec<PlantConfig>,
    pub weights: Vec<f64>,
    pub loop_config: LoopConfig,
    pub bounds: FlcBounds,
    pub min_std: f64,
}

impl Default for FlcProblem {
    fn default() -> Self {
        Self {
            plants: PlantConfig::standard_suite().to_vec(),
            weights: DEFAULT_WEIGHTS.to_vec(),
            loop_config: LoopConfig::default(),
            bounds: FlcBounds::default(),
            min_std: crate::fuzzy::DEFAULT_MIN_STD,
        }
    }
}

impl FlcProblem {
    pub fn validate(&self) -> Result<()> {
        if self.plants.len() != self.weights.len() || self.plants.is_empty() {
            return Err(Error::config("FLC problem needs one weight per plant"));
        }
        for p in &self.plants {
            p.validate()?;
        }
        Ok(())
    }

    /// Decodes task-space genes into a constrained genome.
    pub fn genome(&self, kind: FlcKind, point: &[f64]) -> Result<FlcGenome> {
        enforce_flc_constraints(kind, point, self.min_std)
    }

    /// Maximization task whose fitness is [`itae_fitness`]. Genes are
    /// re-ranked to satisfy the genome constraints before evaluation.
    pub fn task(&self, kind: FlcKind) -> Result<TaskDefinition> {
        self.validate()?;
        let (lo, hi) = self.bounds.vectors(kind);
        let me = Arc::new(self.clone());
        let id = match kind {
            FlcKind::T1 => "flc-t1",
            FlcKind::IT2 => "flc-it2",
        };
        Ok(TaskDefinition::new(
            id,
            lo,
            hi,
            Arc::new(move |x: &[f64]| {
                me.genome(kind, x)
                    .and_then(|g| itae_fitness(&g, &me.plants, &me.weights, &me.loop_config))
                    .unwrap_or(fitness_from_itae(ABORTED_ITAE))
            }),
        )?
        .with_direction(Direction::Maximize)
        .with_repair(Arc::new(move |genes: &mut [f64]| rerank_genes(kind, genes))))
    }

    /// `(T1 task, IT2 task)`.
    pub fn tasks(&self) -> Result<[TaskDefinition; 2]> {
        Ok([self.task(FlcKind::T1)?, self.task(FlcKind::IT2)?])
    }

    /// Fixed T1 <-> IT2 matching for MTGA with task 1 = T1 and task 2 = IT2.
    pub fn matching_setting() -> MatchingSetting {
        let _: FlcMatching = flc_gene_matching();
        MatchingSetting::Fixed {
            into_first: FlcMatching::t1_from_it2_pairs(),
            into_second: FlcMatching::it2_from_t1_pairs(),
        }
    }
}
