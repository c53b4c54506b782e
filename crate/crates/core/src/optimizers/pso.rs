//! Global-best particle swarm with inertia weight and velocity clamping.

use super::{check_non_negative, RunRecord};
use crate::error::{Error, Result};
use crate::problem::{init_population, Budget, Evaluator, Problem};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub struct PsoConfig {
    pub population_size: usize,
    pub inertia: f64,
    pub c1: f64,
    pub c2: f64,
    /// `v_max` as a fraction of each dimension's width.
    pub vmax_fraction: f64,
    pub history_stride: u64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            inertia: 0.9,
            c1: 2.0,
            c2: 2.0,
            vmax_fraction: 0.2,
            history_stride: 1,
        }
    }
}

impl PsoConfig {
    pub fn for_dimension(dimension: usize) -> Self {
        Self {
            population_size: 50 * dimension,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 1 {
            return Err(Error::config("population_size", "PSO needs at least 1 particle"));
        }
        check_non_negative("inertia", self.inertia)?;
        check_non_negative("c1", self.c1)?;
        check_non_negative("c2", self.c2)?;
        check_non_negative("vmax_fraction", self.vmax_fraction)
    }

    pub fn vmax(&self, problem: &Problem) -> Vec<f64> {
        (0..problem.dimension())
            .map(|d| self.vmax_fraction * problem.range(d))
            .collect()
    }
}

/// Velocity and position update with explicit per-dimension coefficients `r1`, `r2`.
#[allow(clippy::too_many_arguments)]
pub fn pso_update_with(
    x: &[f64],
    v: &[f64],
    pbest: &[f64],
    gbest: &[f64],
    config: &PsoConfig,
    vmax: &[f64],
    problem: &Problem,
    r1: &[f64],
    r2: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let d = x.len();
    let mut nx = Vec::with_capacity(d);
    let mut nv = Vec::with_capacity(d);
    for i in 0..d {
        let vel = config.inertia * v[i]
            + config.c1 * r1[i] * (pbest[i] - x[i])
            + config.c2 * r2[i] * (gbest[i] - x[i]);
        let vel = vel.clamp(-vmax[i], vmax[i]);
        nv.push(vel);
        nx.push((x[i] + vel).clamp(problem.lower()[i], problem.upper()[i]));
    }
    (nx, nv)
}

/// One particle update; `r1`, `r2` are drawn fresh per dimension (r1 first).
#[allow(clippy::too_many_arguments)]
pub fn pso_update(
    x: &[f64],
    v: &[f64],
    pbest: &[f64],
    gbest: &[f64],
    config: &PsoConfig,
    vmax: &[f64],
    problem: &Problem,
    rng: &mut RngStream,
) -> (Vec<f64>, Vec<f64>) {
    let mut r1 = Vec::with_capacity(x.len());
    let mut r2 = Vec::with_capacity(x.len());
    for _ in 0..x.len() {
        r1.push(rng.unit());
        r2.push(rng.unit());
    }
    pso_update_with(x, v, pbest, gbest, config, vmax, problem, &r1, &r2)
}

pub fn run_pso(problem: &Problem, config: &PsoConfig, budget: Budget, rng: &mut RngStream) -> Result<RunRecord> {
    config.validate()?;
    let vmax = config.vmax(problem);
    let mut eval = Evaluator::new(problem, budget, config.history_stride);
    let swarm = init_population(&mut eval, config.population_size, rng)?;
    let mut positions: Vec<Vec<f64>> = swarm.members.iter().map(|m| m.genome.clone()).collect();
    let mut velocities = vec![vec![0.0; problem.dimension()]; positions.len()];
    let mut pbest = swarm.clone();
    let mut gbest = pbest.best_index()?;

    'outer: while eval.remaining() > 0 {
        for i in 0..positions.len() {
            let (nx, nv) = pso_update(
                &positions[i],
                &velocities[i],
                &pbest.members[i].genome,
                &pbest.members[gbest].genome,
                config,
                &vmax,
                problem,
                rng,
            );
            let f = match eval.evaluate(&nx) {
                Ok(f) => f,
                Err(_) => break 'outer,
            };
            if f < pbest.members[i].fitness {
                pbest.members[i].genome.clone_from(&nx);
                pbest.members[i].fitness = f;
            }
            positions[i] = nx;
            velocities[i] = nv;
        }
        gbest = pbest.best_index()?;
    }
    Ok(eval.finish(rng.seed()))
}
