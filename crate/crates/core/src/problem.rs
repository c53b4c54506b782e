//! Problems, individuals, populations and evaluation-budget accounting.
//!
//! All comparisons are minimization: a fitness is better iff it is strictly
//! lower. Ties resolve to the lowest index everywhere.

use std::fmt;
use std::sync::Arc;

use crate::error::{BudgetExhausted, Error, Result};
use crate::optimizers::{HistoryPoint, RunRecord};
use crate::rng::RngStream;

pub type Objective = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A box-bounded minimization problem. Immutable once built and cheap to clone.
#[derive(Clone)]
pub struct Problem {
    name: String,
    lower: Vec<f64>,
    upper: Vec<f64>,
    objective: Objective,
    bias: f64,
    optimum: Option<Vec<f64>>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dimension", &self.dimension())
            .field("bias", &self.bias)
            .finish_non_exhaustive()
    }
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        objective: Objective,
        bias: f64,
    ) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                actual: upper.len(),
                context: "upper bound",
            });
        }
        if lower.is_empty() {
            return Err(Error::config("dimension", "must be at least 1"));
        }
        for (dim, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo < hi) {
                return Err(Error::InvalidBounds {
                    dim,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(Self {
            name: name.into(),
            lower,
            upper,
            objective,
            bias,
            optimum: None,
        })
    }

    /// Same bounds `[lo, hi]` in every dimension.
    pub fn with_uniform_bounds(
        name: impl Into<String>,
        dimension: usize,
        lo: f64,
        hi: f64,
        objective: Objective,
        bias: f64,
    ) -> Result<Self> {
        Self::new(name, vec![lo; dimension], vec![hi; dimension], objective, bias)
    }

    /// Attach the known optimum genome; evaluating it is expected to give the bias.
    pub fn with_optimum(mut self, optimum: Vec<f64>) -> Result<Self> {
        if optimum.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: optimum.len(),
                context: "optimum",
            });
        }
        self.optimum = Some(optimum);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn optimum(&self) -> Option<&[f64]> {
        self.optimum.as_deref()
    }

    /// Per-dimension width `upper - lower`.
    pub fn range(&self, dim: usize) -> f64 {
        self.upper[dim] - self.lower[dim]
    }

    pub fn contains(&self, genome: &[f64]) -> bool {
        genome.len() == self.dimension()
            && genome
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&x, (&lo, &hi))| lo <= x && x <= hi)
    }

    /// Objective value plus bias, without touching any budget.
    pub fn value(&self, genome: &[f64]) -> f64 {
        (self.objective)(genome) + self.bias
    }

    pub fn random_genome(&self, rng: &mut RngStream) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| rng.uniform(lo, hi))
            .collect()
    }
}

/// Project every component onto `[lower, upper]`. Components already inside are untouched.
pub fn clamp_to_bounds(genome: &mut [f64], problem: &Problem) {
    for ((x, &lo), &hi) in genome.iter_mut().zip(problem.lower()).zip(problem.upper()) {
        *x = x.clamp(lo, hi);
    }
}

/// Evaluation budget: `used` never exceeds `max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    max: u64,
    used: u64,
}

impl Budget {
    pub fn new(max_evaluations: u64) -> Self {
        Self {
            max: max_evaluations,
            used: 0,
        }
    }

    pub fn max(&self) -> u64 {
        self.max
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> u64 {
        self.max - self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.used >= self.max
    }

    pub fn consume(&mut self) -> std::result::Result<(), BudgetExhausted> {
        if self.is_exhausted() {
            return Err(BudgetExhausted { max: self.max });
        }
        self.used += 1;
        Ok(())
    }
}

/// Charge one unit of `budget` and evaluate. The only place objective values
/// are produced during a run.
pub fn evaluate(
    problem: &Problem,
    genome: &[f64],
    budget: &mut Budget,
) -> std::result::Result<f64, BudgetExhausted> {
    debug_assert!(
        problem.contains(genome),
        "genome outside bounds of {}: {genome:?}",
        problem.name()
    );
    budget.consume()?;
    Ok(problem.value(genome))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Vec<f64>,
    /// `NaN` until evaluated.
    pub fitness: f64,
}

impl Individual {
    pub fn new(genome: Vec<f64>, fitness: f64) -> Self {
        Self { genome, fitness }
    }

    pub fn unevaluated(genome: Vec<f64>) -> Self {
        Self {
            genome,
            fitness: f64::NAN,
        }
    }

    pub fn is_evaluated(&self) -> bool {
        !self.fitness.is_nan()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Population {
    pub members: Vec<Individual>,
}

impl Population {
    pub fn new(members: Vec<Individual>) -> Self {
        Self { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn fitness(&self) -> impl Iterator<Item = f64> + '_ {
        self.members.iter().map(|m| m.fitness)
    }

    /// Index of the lowest fitness; the first index wins ties.
    pub fn best_index(&self) -> Result<usize> {
        if self.members.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        let mut best = 0;
        for (i, m) in self.members.iter().enumerate().skip(1) {
            if m.fitness < self.members[best].fitness {
                best = i;
            }
        }
        Ok(best)
    }

    /// Member indices ordered best-first, stable on ties.
    pub fn ranked_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.members.len()).collect();
        idx.sort_by(|&a, &b| self.members[a].fitness.total_cmp(&self.members[b].fitness));
        idx
    }
}

pub fn best_individual(pop: &Population) -> Result<&Individual> {
    pop.best_index().map(|i| &pop.members[i])
}

/// Budget-charging evaluation front end for a single run.
///
/// Tracks the best-so-far solution and samples the convergence history every
/// `stride` evaluations (plus the first and last).
pub struct Evaluator<'p> {
    problem: &'p Problem,
    budget: Budget,
    stride: u64,
    best_genome: Vec<f64>,
    best_fitness: f64,
    history: Vec<HistoryPoint>,
}

impl<'p> Evaluator<'p> {
    pub fn new(problem: &'p Problem, budget: Budget, stride: u64) -> Self {
        Self {
            problem,
            budget,
            stride: stride.max(1),
            best_genome: Vec::new(),
            best_fitness: f64::INFINITY,
            history: Vec::new(),
        }
    }

    pub fn problem(&self) -> &'p Problem {
        self.problem
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn remaining(&self) -> u64 {
        self.budget.remaining()
    }

    pub fn evaluate(&mut self, genome: &[f64]) -> std::result::Result<f64, BudgetExhausted> {
        let f = evaluate(self.problem, genome, &mut self.budget)?;
        if f < self.best_fitness || self.best_genome.is_empty() {
            self.best_fitness = f;
            self.best_genome.clear();
            self.best_genome.extend_from_slice(genome);
        }
        let used = self.budget.used();
        if used == 1 || used % self.stride == 0 {
            self.history.push(HistoryPoint {
                evaluations: used,
                best_so_far: self.best_fitness,
            });
        }
        Ok(f)
    }

    pub fn evaluate_individual(
        &mut self,
        genome: Vec<f64>,
    ) -> std::result::Result<Individual, BudgetExhausted> {
        let f = self.evaluate(&genome)?;
        Ok(Individual::new(genome, f))
    }

    pub fn best_fitness(&self) -> f64 {
        self.best_fitness
    }

    pub fn finish(mut self, seed: u64) -> RunRecord {
        let used = self.budget.used();
        if self.history.last().map(|h| h.evaluations) != Some(used) && used > 0 {
            self.history.push(HistoryPoint {
                evaluations: used,
                best_so_far: self.best_fitness,
            });
        }
        RunRecord {
            best_genome: self.best_genome,
            best_fitness: self.best_fitness,
            history: self.history,
            evaluations_used: used,
            seed,
            estimates: Vec::new(),
        }
    }
}

/// `size` uniform genomes, all evaluated. Fails without charging anything if
/// the remaining budget cannot cover the whole population.
pub fn init_population(
    eval: &mut Evaluator<'_>,
    size: usize,
    rng: &mut RngStream,
) -> std::result::Result<Population, BudgetExhausted> {
    if (eval.remaining() as usize) < size {
        return Err(BudgetExhausted {
            max: eval.budget().max(),
        });
    }
    let problem = eval.problem();
    let mut members = Vec::with_capacity(size);
    for _ in 0..size {
        let genome = problem.random_genome(rng);
        members.push(eval.evaluate_individual(genome)?);
    }
    Ok(Population::new(members))
}
