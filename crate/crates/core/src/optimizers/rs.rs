//! Random search.

use super::{check_non_negative, RunRecord};
use crate::error::Result;
use crate::problem::{clamp_to_bounds, Budget, Evaluator, Problem};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub struct RsConfig {
    /// Sample around the incumbent instead of over the whole box.
    pub neighborhood: bool,
    /// Neighborhood standard deviation as a fraction of each dimension's width.
    pub neighborhood_fraction: f64,
    pub history_stride: u64,
}

impl Default for RsConfig {
    fn default() -> Self {
        Self {
            neighborhood: false,
            neighborhood_fraction: 0.1,
            history_stride: 1,
        }
    }
}

impl RsConfig {
    pub fn validate(&self) -> Result<()> {
        check_non_negative("neighborhood_fraction", self.neighborhood_fraction)
    }
}

/// Keep one incumbent; replace it only on strict improvement.
pub fn run_rs(problem: &Problem, config: &RsConfig, budget: Budget, rng: &mut RngStream) -> Result<RunRecord> {
    config.validate()?;
    let mut eval = Evaluator::new(problem, budget, config.history_stride);
    let mut incumbent = problem.random_genome(rng);
    let mut incumbent_f = eval.evaluate(&incumbent)?;
    while eval.remaining() > 0 {
        let candidate = if config.neighborhood {
            let mut c: Vec<f64> = incumbent
                .iter()
                .enumerate()
                .map(|(d, &x)| x + config.neighborhood_fraction * problem.range(d) * rng.gaussian())
                .collect();
            clamp_to_bounds(&mut c, problem);
            c
        } else {
            problem.random_genome(rng)
        };
        let f = eval.evaluate(&candidate)?;
        if f < incumbent_f {
            incumbent = candidate;
            incumbent_f = f;
        }
    }
    Ok(eval.finish(rng.seed()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn problem(f: fn(&[f64]) -> f64) -> Problem {
        Problem::with_uniform_bounds("p", 2, -100.0, 100.0, Arc::new(f), 0.0).unwrap()
    }

    #[test]
    fn never_worse_than_first_sample() {
        let p = problem(|x| x.iter().map(|v| v * v).sum());
        let rec = run_rs(&p, &RsConfig::default(), Budget::new(2000), &mut RngStream::new(1)).unwrap();
        assert!(rec.best_fitness <= rec.history[0].best_so_far);
        assert_eq!(rec.evaluations_used, 2000);
        assert!(rec.is_monotone());
    }

    #[test]
    fn constant_function_keeps_first_sample() {
        let p = problem(|_| 1.0);
        let mut rng = RngStream::new(3);
        let first = p.random_genome(&mut rng.clone());
        let rec = run_rs(&p, &RsConfig::default(), Budget::new(200), &mut rng).unwrap();
        assert_eq!(rec.best_genome, first);
    }

    #[test]
    fn neighborhood_mode_stays_in_bounds() {
        let p = problem(|x| x.iter().map(|v| (v - 99.0).powi(2)).sum());
        let config = RsConfig {
            neighborhood: true,
            ..RsConfig::default()
        };
        let rec = run_rs(&p, &config, Budget::new(500), &mut RngStream::new(8)).unwrap();
        assert!(p.contains(&rec.best_genome));
    }
}
