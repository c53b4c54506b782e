//! Differential evolution with binomial crossover and one-to-one greedy selection.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{check_rate, RunRecord};
use crate::error::{BudgetExhausted, Error, Result};
use crate::problem::{clamp_to_bounds, init_population, Budget, Evaluator, Individual, Population, Problem};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeStrategy {
    Rand1,
    Best1,
    CurrentToBest1,
}

impl DeStrategy {
    /// Number of distinct random members (besides the target) the strategy needs.
    pub fn random_members(self) -> usize {
        match self {
            DeStrategy::Rand1 => 3,
            DeStrategy::Best1 | DeStrategy::CurrentToBest1 => 2,
        }
    }

    /// The donor formula on explicit vectors. `p3` is read only by `Rand1`.
    pub fn donor(
        self,
        target: &[f64],
        best: &[f64],
        p1: &[f64],
        p2: &[f64],
        p3: &[f64],
        f: f64,
    ) -> Vec<f64> {
        match self {
            DeStrategy::Rand1 => (0..target.len())
                .map(|d| p1[d] + f * (p2[d] - p3[d]))
                .collect(),
            DeStrategy::Best1 => (0..target.len())
                .map(|d| best[d] + f * (p1[d] - p2[d]))
                .collect(),
            DeStrategy::CurrentToBest1 => (0..target.len())
                .map(|d| target[d] + f * (best[d] - target[d]) + f * (p1[d] - p2[d]))
                .collect(),
        }
    }
}

impl fmt::Display for DeStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeStrategy::Rand1 => "rand_1",
            DeStrategy::Best1 => "best_1",
            DeStrategy::CurrentToBest1 => "current_to_best_1",
        })
    }
}

impl FromStr for DeStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace(['/', '-'], "_").to_ascii_lowercase().as_str() {
            "rand_1" | "de_rand_1" => Ok(DeStrategy::Rand1),
            "best_1" | "de_best_1" => Ok(DeStrategy::Best1),
            "current_to_best_1" | "de_current_to_best_1" => Ok(DeStrategy::CurrentToBest1),
            _ => Err(Error::config("strategy", format!("unknown DE strategy `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeConfig {
    pub population_size: usize,
    pub scale_factor: f64,
    pub crossover_rate: f64,
    pub strategy: DeStrategy,
    pub history_stride: u64,
}

impl Default for DeConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            scale_factor: 0.7,
            crossover_rate: 0.9,
            strategy: DeStrategy::CurrentToBest1,
            history_stride: 1,
        }
    }
}

impl DeConfig {
    /// Population of `50 × dimension`.
    pub fn for_dimension(dimension: usize) -> Self {
        Self {
            population_size: 50 * dimension,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 {
            return Err(Error::config(
                "population_size",
                format!("DE needs at least 4 members, got {}", self.population_size),
            ));
        }
        if !(self.scale_factor > 0.0 && self.scale_factor.is_finite()) {
            return Err(Error::config("scale_factor", "must be positive"));
        }
        check_rate("crossover_rate", self.crossover_rate)
    }
}

/// `count` distinct indices in `0..n`, all different from `exclude`.
fn distinct_indices(n: usize, exclude: usize, count: usize, rng: &mut RngStream) -> [usize; 3] {
    let mut out = [usize::MAX; 3];
    for k in 0..count {
        loop {
            let c = rng.index(n);
            if c != exclude && !out[..k].contains(&c) {
                out[k] = c;
                break;
            }
        }
    }
    out
}

/// Donor vector for member `target`, using `best` as the population best.
pub fn de_mutation(
    pop: &Population,
    target: usize,
    best: usize,
    strategy: DeStrategy,
    f: f64,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    let needed = strategy.random_members() + 1;
    if pop.len() < needed {
        return Err(Error::config(
            "population_size",
            format!("{strategy} needs {needed} members, population has {}", pop.len()),
        ));
    }
    let p = distinct_indices(pop.len(), target, strategy.random_members(), rng);
    let g = |i: usize| pop.members[i].genome.as_slice();
    let p3 = if strategy == DeStrategy::Rand1 { g(p[2]) } else { &[] };
    Ok(strategy.donor(g(target), g(best), g(p[0]), g(p[1]), p3, f))
}

/// Binomial crossover with one forced donor gene at a uniformly drawn index.
pub fn binomial_crossover(target: &[f64], donor: &[f64], cr: f64, rng: &mut RngStream) -> Vec<f64> {
    let forced = rng.index(target.len());
    target
        .iter()
        .zip(donor)
        .enumerate()
        .map(|(j, (&t, &v))| if j == forced || rng.unit() < cr { v } else { t })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Survivor {
    Target,
    Trial,
}

/// One-to-one selection; ties go to the trial.
pub fn de_select(target_fitness: f64, trial_fitness: f64) -> Survivor {
    if trial_fitness <= target_fitness {
        Survivor::Trial
    } else {
        Survivor::Target
    }
}

/// One generation over the snapshot `pop`: mutation, crossover, evaluation,
/// then selection. On budget exhaustion, members whose trials were evaluated
/// are still selected before the error is returned.
pub(crate) fn de_generation(
    pop: &mut Population,
    config: &DeConfig,
    eval: &mut Evaluator<'_>,
    rng: &mut RngStream,
) -> std::result::Result<(), BudgetExhausted> {
    let problem = eval.problem();
    let best = pop.best_index().expect("population is non-empty");
    let mut trials: Vec<Individual> = Vec::with_capacity(pop.len());
    let mut outcome = Ok(());
    for i in 0..pop.len() {
        let donor = de_mutation(pop, i, best, config.strategy, config.scale_factor, rng)
            .expect("population size validated");
        let mut trial = binomial_crossover(&pop.members[i].genome, &donor, config.crossover_rate, rng);
        clamp_to_bounds(&mut trial, problem);
        match eval.evaluate_individual(trial) {
            Ok(ind) => trials.push(ind),
            Err(e) => {
                outcome = Err(e);
                break;
            }
        }
    }
    for (slot, trial) in pop.members.iter_mut().zip(trials) {
        if de_select(slot.fitness, trial.fitness) == Survivor::Trial {
            *slot = trial;
        }
    }
    outcome
}

pub fn run_de(problem: &Problem, config: &DeConfig, budget: Budget, rng: &mut RngStream) -> Result<RunRecord> {
    config.validate()?;
    let mut eval = Evaluator::new(problem, budget, config.history_stride);
    let mut pop = init_population(&mut eval, config.population_size, rng)?;
    while eval.remaining() > 0 {
        if de_generation(&mut pop, config, &mut eval, rng).is_err() {
            break;
        }
    }
    Ok(eval.finish(rng.seed()))
}
