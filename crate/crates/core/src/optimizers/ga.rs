//! Generational real-coded GA with a single unconditional elite.
//!
//! Binary tournaments pick parents; crossover is per-gene uniform and applied
//! with probability `crossover_rate`; each gene mutates with probability
//! `mutation_rate` by a Gaussian step of `mutation_sigma_fraction × width`.

use super::{check_non_negative, check_rate, RunRecord};
use crate::error::{BudgetExhausted, Error, Result};
use crate::problem::{clamp_to_bounds, init_population, Budget, Evaluator, Individual, Population, Problem};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub mutation_sigma_fraction: f64,
    pub tournament_size: usize,
    pub history_stride: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            crossover_rate: 0.5,
            mutation_rate: 0.1,
            mutation_sigma_fraction: 0.05,
            tournament_size: 2,
            history_stride: 1,
        }
    }
}

impl GaConfig {
    pub fn for_dimension(dimension: usize) -> Self {
        Self {
            population_size: 50 * dimension,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::config("population_size", "GA needs at least 2 members"));
        }
        if self.tournament_size < 1 {
            return Err(Error::config("tournament_size", "must be at least 1"));
        }
        check_rate("crossover_rate", self.crossover_rate)?;
        check_rate("mutation_rate", self.mutation_rate)?;
        check_non_negative("mutation_sigma_fraction", self.mutation_sigma_fraction)
    }
}

/// Index of the tournament winner; the lower index wins equal fitness.
fn tournament(pop: &Population, size: usize, rng: &mut RngStream) -> usize {
    let mut winner = rng.index(pop.len());
    for _ in 1..size {
        let c = rng.index(pop.len());
        let (wf, cf) = (pop.members[winner].fitness, pop.members[c].fitness);
        if cf < wf || (cf == wf && c < winner) {
            winner = c;
        }
    }
    winner
}

fn make_child(pop: &Population, config: &GaConfig, problem: &Problem, rng: &mut RngStream) -> Vec<f64> {
    let a = tournament(pop, config.tournament_size, rng);
    let b = tournament(pop, config.tournament_size, rng);
    let mut child = pop.members[a].genome.clone();
    if rng.bernoulli(config.crossover_rate) {
        for (gene, &other) in child.iter_mut().zip(&pop.members[b].genome) {
            if rng.bernoulli(0.5) {
                *gene = other;
            }
        }
    }
    for (d, gene) in child.iter_mut().enumerate() {
        if rng.bernoulli(config.mutation_rate) {
            *gene += config.mutation_sigma_fraction * problem.range(d) * rng.gaussian();
        }
    }
    clamp_to_bounds(&mut child, problem);
    child
}

/// Replace `pop` with the elite plus `len - 1` evaluated children. A partial
/// generation at budget exhaustion keeps the old members in unfilled slots.
pub(crate) fn ga_generation(
    pop: &mut Population,
    config: &GaConfig,
    eval: &mut Evaluator<'_>,
    rng: &mut RngStream,
) -> std::result::Result<(), BudgetExhausted> {
    let problem = eval.problem();
    let elite = pop.members[pop.best_index().expect("non-empty")].clone();
    let mut next = Vec::with_capacity(pop.len());
    next.push(elite);
    let mut outcome = Ok(());
    while next.len() < pop.len() {
        let child = make_child(pop, config, problem, rng);
        match eval.evaluate_individual(child) {
            Ok(ind) => next.push(ind),
            Err(e) => {
                outcome = Err(e);
                break;
            }
        }
    }
    if outcome.is_err() {
        // keep the population size fixed and the elite present
        let elite_idx = pop.best_index().expect("non-empty");
        let mut rest: Vec<Individual> = pop
            .members
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != elite_idx)
            .map(|(_, m)| m.clone())
            .collect();
        rest.truncate(pop.len() - next.len());
        next.extend(rest);
    }
    pop.members = next;
    outcome
}

pub fn run_ga(problem: &Problem, config: &GaConfig, budget: Budget, rng: &mut RngStream) -> Result<RunRecord> {
    config.validate()?;
    let mut eval = Evaluator::new(problem, budget, config.history_stride);
    let mut pop = init_population(&mut eval, config.population_size, rng)?;
    while eval.remaining() > 0 {
        if ga_generation(&mut pop, config, &mut eval, rng).is_err() {
            break;
        }
    }
    Ok(eval.finish(rng.seed()))
}
