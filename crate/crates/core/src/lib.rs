//! Multi-tasking genetic algorithm (MTGA) for evolutionary multi-task optimization.
//!
//! Two tasks are evolved in separate populations. Each generation the fittest
//! chromosomes of one population are moved into the other after removing the
//! estimated bias between the two tasks, i.e. the difference between the means
//! of the best `n_t` chromosomes of each population. Transfer is sequential: the
//! second task already sees the first task's updated population.
//!
//! The crate also contains:
//!
//! * the single-task GA (SOEA) and multifactorial (MFEA) reference solvers,
//! * shifted/rotated benchmark functions and a registry of two-task problems,
//! * the cross-algorithm performance score and run summaries,
//! * type-1 and interval type-2 PI fuzzy controllers with Karnik–Mendel type
//!   reduction,
//! * a coupled-tank water-level plant with the weighted ITAE fitness used to
//!   co-optimize a T1 and an IT2 controller,
//! * an experiment runner that writes traces, summaries, scores and plots.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod benchmarks;
pub mod error;
pub mod experiment;
pub mod fuzzy;
pub mod metrics;
pub mod operators;
pub mod report;
pub mod rng;
pub mod solvers;
pub mod tank;
pub mod task;
pub mod transfer;

pub use error::{Error, Result};
pub use rng::RngStream;
pub use task::{Chromosome, Direction, GeneKind, Population, TaskDefinition};
