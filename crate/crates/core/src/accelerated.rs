//! DE accelerated by convergence-point estimation and Gaussian sampling.
//!
//! After every DE generation the survivors' elite is averaged (P1) or
//! fitness-weighted averaged (P2) into an estimated convergence point. The
//! point and `k` Gaussian samples around it are evaluated and merged into the
//! population with [`inject`].
//!
//! The DE phase draws from the run's stream and the sampling phase from a
//! substream derived without consuming it, so `k = 0` replays plain DE exactly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{
    average_strategy, elite_count, gaussian_sample, inject, weighted_average_strategy, EstimatedPoint,
    WeightMode,
};
use crate::optimizers::de::{de_generation, DeConfig};
use crate::optimizers::{check_non_negative, EstimateLog, RunRecord};
use crate::problem::{clamp_to_bounds, init_population, Budget, Evaluator, Population, Problem};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Elite averaging.
    P1,
    /// Weighted elite averaging.
    P2,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::P1 => "P1",
            Variant::P2 => "P2",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "P1" => Ok(Variant::P1),
            "P2" => Ok(Variant::P2),
            _ => Err(Error::UnknownAlgorithm(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcceleratedConfig {
    pub variant: Variant,
    pub de: DeConfig,
    pub elite_rate: f64,
    /// Absolute standard deviation of the Gaussian samples.
    pub sigma: f64,
    /// Number of Gaussian samples; `None` uses the elite count.
    pub k: Option<usize>,
    pub was_mode: WeightMode,
}

impl AcceleratedConfig {
    pub fn new(variant: Variant, de: DeConfig) -> Self {
        Self {
            variant,
            de,
            elite_rate: 0.05,
            sigma: 5.0,
            k: None,
            was_mode: WeightMode::Consistent,
        }
    }

    pub fn for_dimension(variant: Variant, dimension: usize) -> Self {
        Self::new(variant, DeConfig::for_dimension(dimension))
    }

    pub fn sample_count(&self) -> usize {
        self.k
            .unwrap_or_else(|| elite_count(self.de.population_size, self.elite_rate))
    }

    pub fn validate(&self) -> Result<()> {
        self.de.validate()?;
        if !(self.elite_rate > 0.0 && self.elite_rate <= 1.0) {
            return Err(Error::config("elite_rate", format!("{} is outside (0, 1]", self.elite_rate)));
        }
        check_non_negative("sigma", self.sigma)?;
        let k = self.sample_count();
        if k >= self.de.population_size {
            return Err(Error::config(
                "k",
                format!("{k} must be below population_size {}", self.de.population_size),
            ));
        }
        Ok(())
    }

    /// Estimate for the current (post-selection) population.
    pub fn estimate(&self, pop: &Population) -> Result<EstimatedPoint> {
        match self.variant {
            Variant::P1 => average_strategy(pop, self.elite_rate),
            Variant::P2 => weighted_average_strategy(pop, self.elite_rate, self.was_mode),
        }
    }
}

pub fn run_accelerated_de(
    problem: &Problem,
    config: &AcceleratedConfig,
    budget: Budget,
    rng: &mut RngStream,
) -> Result<RunRecord> {
    config.validate()?;
    let k = config.sample_count();
    let mut sampling = rng.substream(&[1]);
    let mut eval = Evaluator::new(problem, budget, config.de.history_stride);
    let mut pop = init_population(&mut eval, config.de.population_size, rng)?;
    let mut estimates = Vec::new();
    let mut generation = 0u64;

    while eval.remaining() > 0 {
        generation += 1;
        if de_generation(&mut pop, &config.de, &mut eval, rng).is_err() {
            break;
        }
        if k == 0 || eval.remaining() < k as u64 + 1 {
            continue;
        }
        let estimate = config.estimate(&pop)?;
        let mut center = estimate.coordinates.clone();
        clamp_to_bounds(&mut center, problem);
        let center = eval.evaluate_individual(center)?;
        let mut samples = Vec::with_capacity(k);
        for genome in gaussian_sample(&center.genome, config.sigma, k, problem, &mut sampling) {
            samples.push(eval.evaluate_individual(genome)?);
        }
        estimates.push(EstimateLog {
            generation,
            method: estimate.method,
            coordinates: center.genome.clone(),
            fitness: center.fitness,
        });
        inject(&mut pop, center, samples, k)?;
    }

    let mut record = eval.finish(rng.seed());
    record.estimates = estimates;
    Ok(record)
}
