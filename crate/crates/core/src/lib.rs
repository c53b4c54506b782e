//! Differential evolution accelerated by convergence-point estimation and
//! Gaussian sampling, together with baseline optimizers, a shifted/rotated
//! benchmark suite, rank-based comparison statistics and an experiment harness.

pub mod accelerated;
pub mod benchmarks;
pub mod error;
pub mod estimation;
pub mod harness;
pub mod optimizers;
pub mod problem;
pub mod rng;
pub mod stats;

pub use error::{BudgetExhausted, Error, Result};
