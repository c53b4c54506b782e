//! (1+1) evolution strategy with a fixed mutation strength.

use super::{check_non_negative, RunRecord};
use crate::error::Result;
use crate::problem::{clamp_to_bounds, Budget, Evaluator, Problem};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub struct EsConfig {
    /// Step size as a fraction of each dimension's width.
    pub mutation_strength: f64,
    pub history_stride: u64,
}

impl Default for EsConfig {
    fn default() -> Self {
        Self {
            mutation_strength: 0.2,
            history_stride: 1,
        }
    }
}

impl EsConfig {
    pub fn validate(&self) -> Result<()> {
        check_non_negative("mutation_strength", self.mutation_strength)
    }

    /// Per-dimension standard deviation of the Gaussian step.
    pub fn sigma(&self, problem: &Problem) -> Vec<f64> {
        (0..problem.dimension())
            .map(|d| self.mutation_strength * problem.range(d))
            .collect()
    }
}

/// The offspring replaces the parent when it is not worse.
pub fn run_es(problem: &Problem, config: &EsConfig, budget: Budget, rng: &mut RngStream) -> Result<RunRecord> {
    config.validate()?;
    let sigma = config.sigma(problem);
    let mut eval = Evaluator::new(problem, budget, config.history_stride);
    let mut parent = problem.random_genome(rng);
    let mut parent_f = eval.evaluate(&parent)?;
    while eval.remaining() > 0 {
        let mut child: Vec<f64> = parent
            .iter()
            .zip(&sigma)
            .map(|(&x, &s)| x + s * rng.gaussian())
            .collect();
        clamp_to_bounds(&mut child, problem);
        let f = eval.evaluate(&child)?;
        if f <= parent_f {
            parent = child;
            parent_f = f;
        }
    }
    Ok(eval.finish(rng.seed()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn sphere() -> Problem {
        Problem::with_uniform_bounds(
            "sphere",
            2,
            -100.0,
            100.0,
            Arc::new(|x: &[f64]| x.iter().map(|v| v * v).sum()),
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn sigma_is_fraction_of_width() {
        assert_eq!(EsConfig::default().sigma(&sphere()), vec![40.0, 40.0]);
    }

    #[test]
    fn zero_strength_never_moves() {
        let p = sphere();
        let mut rng = RngStream::new(5);
        let start = p.random_genome(&mut rng.clone());
        let config = EsConfig {
            mutation_strength: 0.0,
            ..EsConfig::default()
        };
        let rec = run_es(&p, &config, Budget::new(100), &mut rng).unwrap();
        assert_eq!(rec.best_genome, start);
    }

    #[test]
    fn monotone_and_improves() {
        let rec = run_es(&sphere(), &EsConfig::default(), Budget::new(2000), &mut RngStream::new(1)).unwrap();
        assert!(rec.is_monotone());
        assert!(rec.best_fitness < rec.history[0].best_so_far);
        assert_eq!(rec.evaluations_used, 2000);
    }
}
