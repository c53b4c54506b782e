//! Baseline optimizers as budget-driven, seed-deterministic run loops.
//!
//! Every optimizer consumes evaluations until the budget is spent and returns
//! a [`RunRecord`]. Comparisons are minimization throughout.

pub mod de;
pub mod es;
pub mod ga;
pub mod pso;
pub mod rs;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::accelerated::{run_accelerated_de, AcceleratedConfig, Variant};
use crate::error::{Error, Result};
use crate::estimation::EstimateMethod;
use crate::problem::{Budget, Problem};
use crate::rng::RngStream;

pub use de::{binomial_crossover, de_mutation, de_select, run_de, DeConfig, DeStrategy, Survivor};
pub use es::{run_es, EsConfig};
pub use ga::{run_ga, GaConfig};
pub use pso::{pso_update, run_pso, PsoConfig};
pub use rs::{run_rs, RsConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryPoint {
    pub evaluations: u64,
    pub best_so_far: f64,
}

/// Convergence-point estimate logged by the accelerated variants once per generation.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateLog {
    pub generation: u64,
    pub method: EstimateMethod,
    pub coordinates: Vec<f64>,
    pub fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub best_genome: Vec<f64>,
    pub best_fitness: f64,
    pub history: Vec<HistoryPoint>,
    pub evaluations_used: u64,
    pub seed: u64,
    pub estimates: Vec<EstimateLog>,
}

impl RunRecord {
    /// Bitwise comparison of everything a run produces.
    pub fn bitwise_eq(&self, other: &RunRecord) -> bool {
        fn bits(v: &[f64]) -> Vec<u64> {
            v.iter().map(|x| x.to_bits()).collect()
        }
        self.evaluations_used == other.evaluations_used
            && self.seed == other.seed
            && self.best_fitness.to_bits() == other.best_fitness.to_bits()
            && bits(&self.best_genome) == bits(&other.best_genome)
            && self.history.len() == other.history.len()
            && self.history.iter().zip(&other.history).all(|(a, b)| {
                a.evaluations == b.evaluations && a.best_so_far.to_bits() == b.best_so_far.to_bits()
            })
    }

    pub fn is_monotone(&self) -> bool {
        self.history
            .windows(2)
            .all(|w| w[1].best_so_far <= w[0].best_so_far && w[1].evaluations > w[0].evaluations)
    }
}

pub(crate) fn check_rate(key: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::config(key, format!("{value} is outside [0, 1]")))
    }
}

pub(crate) fn check_non_negative(key: &str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::config(key, format!("{value} must be a finite non-negative number")))
    }
}

/// The algorithm families the harness knows how to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Rs,
    Ga,
    De,
    Es,
    Pso,
    P1,
    P2,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Rs => "RS",
            Algorithm::Ga => "GA",
            Algorithm::De => "DE",
            Algorithm::Es => "ES",
            Algorithm::Pso => "PSO",
            Algorithm::P1 => "P1",
            Algorithm::P2 => "P2",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rs" => Ok(Algorithm::Rs),
            "ga" => Ok(Algorithm::Ga),
            "de" => Ok(Algorithm::De),
            "es" => Ok(Algorithm::Es),
            "pso" => Ok(Algorithm::Pso),
            "p1" => Ok(Algorithm::P1),
            "p2" => Ok(Algorithm::P2),
            _ => Err(Error::UnknownAlgorithm(s.to_string())),
        }
    }
}

/// A fully parameterized optimizer.
#[derive(Debug, Clone, PartialEq)]
pub enum OptimizerConfig {
    Rs(RsConfig),
    Ga(GaConfig),
    De(DeConfig),
    Es(EsConfig),
    Pso(PsoConfig),
    Accelerated(AcceleratedConfig),
}

impl OptimizerConfig {
    /// Default parameters for `algorithm` at `dimension`.
    pub fn defaults(algorithm: Algorithm, dimension: usize) -> Self {
        match algorithm {
            Algorithm::Rs => OptimizerConfig::Rs(RsConfig::default()),
            Algorithm::Ga => OptimizerConfig::Ga(GaConfig::for_dimension(dimension)),
            Algorithm::De => OptimizerConfig::De(DeConfig::for_dimension(dimension)),
            Algorithm::Es => OptimizerConfig::Es(EsConfig::default()),
            Algorithm::Pso => OptimizerConfig::Pso(PsoConfig::for_dimension(dimension)),
            Algorithm::P1 => {
                OptimizerConfig::Accelerated(AcceleratedConfig::for_dimension(Variant::P1, dimension))
            }
            Algorithm::P2 => {
                OptimizerConfig::Accelerated(AcceleratedConfig::for_dimension(Variant::P2, dimension))
            }
        }
    }

    pub fn algorithm(&self) -> Algorithm {
        match self {
            OptimizerConfig::Rs(_) => Algorithm::Rs,
            OptimizerConfig::Ga(_) => Algorithm::Ga,
            OptimizerConfig::De(_) => Algorithm::De,
            OptimizerConfig::Es(_) => Algorithm::Es,
            OptimizerConfig::Pso(_) => Algorithm::Pso,
            OptimizerConfig::Accelerated(c) => match c.variant {
                Variant::P1 => Algorithm::P1,
                Variant::P2 => Algorithm::P2,
            },
        }
    }

    pub fn set_history_stride(&mut self, stride: u64) {
        match self {
            OptimizerConfig::Rs(c) => c.history_stride = stride,
            OptimizerConfig::Ga(c) => c.history_stride = stride,
            OptimizerConfig::De(c) => c.history_stride = stride,
            OptimizerConfig::Es(c) => c.history_stride = stride,
            OptimizerConfig::Pso(c) => c.history_stride = stride,
            OptimizerConfig::Accelerated(c) => c.de.history_stride = stride,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OptimizerConfig::Rs(c) => c.validate(),
            OptimizerConfig::Ga(c) => c.validate(),
            OptimizerConfig::De(c) => c.validate(),
            OptimizerConfig::Es(c) => c.validate(),
            OptimizerConfig::Pso(c) => c.validate(),
            OptimizerConfig::Accelerated(c) => c.validate(),
        }
    }

    pub fn run(&self, problem: &Problem, budget: Budget, rng: &mut RngStream) -> Result<RunRecord> {
        match self {
            OptimizerConfig::Rs(c) => run_rs(problem, c, budget, rng),
            OptimizerConfig::Ga(c) => run_ga(problem, c, budget, rng),
            OptimizerConfig::De(c) => run_de(problem, c, budget, rng),
            OptimizerConfig::Es(c) => run_es(problem, c, budget, rng),
            OptimizerConfig::Pso(c) => run_pso(problem, c, budget, rng),
            OptimizerConfig::Accelerated(c) => run_accelerated_de(problem, c, budget, rng),
        }
    }
}
