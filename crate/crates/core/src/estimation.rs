//! Convergence-point estimation and Gaussian sampling injection.
//!
//! Three estimators produce a point the population is believed to be moving
//! toward:
//!
//! * **averaging** takes the per-dimension mean of the elite sub-population;
//! * **weighted averaging** takes a fitness-weighted mean of the same elites;
//! * **analytical** finds the point with least total squared distance to the
//!   lines traced by parent→offspring moving vectors.
//!
//! [`gaussian_sample`] draws candidates around an estimate and [`inject`]
//! merges them back into a population by a best-k pool rule.

use std::fmt;

use log::warn;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{clamp_to_bounds, Individual, Population, Problem};
use crate::rng::RngStream;

/// Largest accepted condition number of the accumulated projector sum.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EstimateMethod {
    #[serde(rename = "AS")]
    Averaging,
    #[serde(rename = "WAS")]
    WeightedAveraging,
    #[serde(rename = "analytical")]
    Analytical,
}

impl fmt::Display for EstimateMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimateMethod::Averaging => "AS",
            EstimateMethod::WeightedAveraging => "WAS",
            EstimateMethod::Analytical => "analytical",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedPoint {
    pub coordinates: Vec<f64>,
    pub method: EstimateMethod,
    /// Members (or moving vectors) that contributed.
    pub elite_count: usize,
}

impl EstimatedPoint {
    /// Copy of the coordinates projected into the problem's box.
    pub fn clamped(&self, problem: &Problem) -> Vec<f64> {
        let mut c = self.coordinates.clone();
        clamp_to_bounds(&mut c, problem);
        c
    }
}

/// How weighted averaging turns elite fitness into weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// `w ∝ f_worst − f + ε`: lower fitness weighs more.
    #[default]
    Consistent,
    /// `w = f / Σf`, exactly as normalized fitness. Requires positive fitness.
    Literal,
}

/// `max(1, round(rate × size))`, capped at `size`.
pub fn elite_count(size: usize, rate: f64) -> usize {
    ((rate * size as f64).round() as usize).clamp(1, size.max(1))
}

fn check_rate(rate: f64) -> Result<()> {
    if rate > 0.0 && rate <= 1.0 {
        Ok(())
    } else {
        Err(Error::config("elite_rate", format!("{rate} is outside (0, 1]")))
    }
}

/// The best `elite_count(len, rate)` members, ordered by fitness then index.
pub fn select_elite(pop: &Population, rate: f64) -> Result<Vec<&Individual>> {
    if pop.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    check_rate(rate)?;
    let s = elite_count(pop.len(), rate);
    Ok(pop.ranked_indices().into_iter().take(s).map(|i| &pop.members[i]).collect())
}

fn mean_of(elite: &[&Individual]) -> Vec<f64> {
    let d = elite[0].genome.len();
    let s = elite.len() as f64;
    (0..d)
        .map(|i| elite.iter().map(|m| m.genome[i]).sum::<f64>() / s)
        .collect()
}

/// Per-dimension mean of the elite genomes.
pub fn average_strategy(pop: &Population, rate: f64) -> Result<EstimatedPoint> {
    let elite = select_elite(pop, rate)?;
    Ok(EstimatedPoint {
        coordinates: mean_of(&elite),
        method: EstimateMethod::Averaging,
        elite_count: elite.len(),
    })
}

/// Normalized weights for the given elite fitness values.
pub fn elite_weights(fitness: &[f64], mode: WeightMode) -> Result<Vec<f64>> {
    match mode {
        WeightMode::Literal => {
            if let Some(&bad) = fitness.iter().find(|&&f| !(f > 0.0)) {
                return Err(Error::NonPositiveFitness(bad));
            }
            let total: f64 = fitness.iter().sum();
            Ok(fitness.iter().map(|f| f / total).collect())
        }
        WeightMode::Consistent => {
            let worst = fitness.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let eps = 1e-12 * (1.0 + worst.abs());
            let raw: Vec<f64> = fitness.iter().map(|f| worst - f + eps).collect();
            let total: f64 = raw.iter().sum();
            Ok(raw.iter().map(|r| r / total).collect())
        }
    }
}

/// Fitness-weighted mean of the elite genomes. Equal elite fitness gives
/// exactly the plain average in either mode.
pub fn weighted_average_strategy(pop: &Population, rate: f64, mode: WeightMode) -> Result<EstimatedPoint> {
    let elite = select_elite(pop, rate)?;
    let fitness: Vec<f64> = elite.iter().map(|m| m.fitness).collect();
    let method = EstimateMethod::WeightedAveraging;
    if mode == WeightMode::Literal {
        elite_weights(&fitness, mode)?;
    }
    if fitness.iter().all(|&f| f == fitness[0]) {
        return Ok(EstimatedPoint {
            coordinates: mean_of(&elite),
            method,
            elite_count: elite.len(),
        });
    }
    let w = elite_weights(&fitness, mode)?;
    let d = elite[0].genome.len();
    let coordinates = (0..d)
        .map(|i| elite.iter().zip(&w).map(|(m, wj)| wj * m.genome[i]).sum())
        .collect();
    Ok(EstimatedPoint {
        coordinates,
        method,
        elite_count: elite.len(),
    })
}

/// Displacement from a worse parent to its better offspring.
#[derive(Debug, Clone, PartialEq)]
pub struct MovingVector {
    pub parent: Vec<f64>,
    pub offspring: Vec<f64>,
    unit: Vec<f64>,
}

impl MovingVector {
    /// `None` when parent and offspring coincide (no direction).
    pub fn new(parent: Vec<f64>, offspring: Vec<f64>) -> Option<Self> {
        let d: Vec<f64> = offspring.iter().zip(&parent).map(|(o, p)| o - p).collect();
        let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return None;
        }
        let unit = d.iter().map(|x| x / norm).collect();
        Some(Self {
            parent,
            offspring,
            unit,
        })
    }

    pub fn direction(&self) -> Vec<f64> {
        self.offspring.iter().zip(&self.parent).map(|(o, p)| o - p).collect()
    }

    pub fn unit_direction(&self) -> &[f64] {
        &self.unit
    }
}

/// Moving vectors for paired parents and offspring, dropping zero-length pairs.
pub fn moving_vectors(parents: &[Vec<f64>], offspring: &[Vec<f64>]) -> Vec<MovingVector> {
    parents
        .iter()
        .zip(offspring)
        .filter_map(|(p, o)| MovingVector::new(p.clone(), o.clone()))
        .collect()
}

/// Least-squares nearest point to all moving-vector lines:
/// `X = [Σ (I − u uᵀ)]⁻¹ Σ (I − u uᵀ) p`.
pub fn analytical_estimate(vectors: &[MovingVector]) -> Result<EstimatedPoint> {
    if vectors.len() < 2 {
        return Err(Error::DegenerateDirections(format!(
            "need at least 2 moving vectors, got {}",
            vectors.len()
        )));
    }
    let d = vectors[0].parent.len();
    let mut a = DMatrix::<f64>::zeros(d, d);
    let mut b = DVector::<f64>::zeros(d);
    for v in vectors {
        if v.parent.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: v.parent.len(),
                context: "moving vector",
            });
        }
        let u = DVector::from_column_slice(&v.unit);
        let p = DVector::from_column_slice(&v.parent);
        let proj = DMatrix::<f64>::identity(d, d) - &u * u.transpose();
        b += &proj * p;
        a += proj;
    }

    let eig = SymmetricEigen::new(a.clone()).eigenvalues;
    let max = eig.max();
    let min = eig.min();
    if !(min > 0.0) || max / min > MAX_CONDITION {
        return Err(Error::DegenerateDirections(format!(
            "projector sum is singular or ill-conditioned (eigenvalues {min:e}..{max:e})"
        )));
    }
    let x = a
        .cholesky()
        .ok_or_else(|| Error::DegenerateDirections("projector sum is not positive definite".into()))?
        .solve(&b);
    Ok(EstimatedPoint {
        coordinates: x.iter().copied().collect(),
        method: EstimateMethod::Analytical,
        elite_count: vectors.len(),
    })
}

/// Analytical estimate, or the elite average of `pop` when the directions are degenerate.
pub fn analytical_or_average(vectors: &[MovingVector], pop: &Population, rate: f64) -> Result<EstimatedPoint> {
    match analytical_estimate(vectors) {
        Ok(p) => Ok(p),
        Err(Error::DegenerateDirections(msg)) => {
            warn!("analytical estimate unavailable ({msg}); using elite average");
            average_strategy(pop, rate)
        }
        Err(e) => Err(e),
    }
}

/// Sum of squared distances from `x` to each moving-vector line.
pub fn line_distance_objective(vectors: &[MovingVector], x: &[f64]) -> f64 {
    vectors
        .iter()
        .map(|v| {
            let diff: Vec<f64> = v.parent.iter().zip(x).map(|(p, xi)| p - xi).collect();
            let along: f64 = diff.iter().zip(&v.unit).map(|(a, u)| a * u).sum();
            diff.iter()
                .zip(&v.unit)
                .map(|(a, u)| (a - along * u).powi(2))
                .sum::<f64>()
        })
        .sum()
}

/// `k` isotropic Gaussian draws around `center`, clamped to the problem's box.
pub fn gaussian_sample(
    center: &[f64],
    sigma: f64,
    k: usize,
    problem: &Problem,
    rng: &mut RngStream,
) -> Vec<Vec<f64>> {
    (0..k)
        .map(|_| {
            let mut g: Vec<f64> = center.iter().map(|&c| c + sigma * rng.gaussian()).collect();
            clamp_to_bounds(&mut g, problem);
            g
        })
        .collect()
}

/// Merge an evaluated estimate and `samples` into `pop`.
///
/// The pool is `{center} ∪ samples ∪ {k worst members}`; its `k` best take the
/// `k` worst slots. Pooled members that survive keep their own slots, and on
/// equal fitness members are preferred over newcomers. Returns how many
/// newcomers entered.
pub fn inject(pop: &mut Population, center: Individual, samples: Vec<Individual>, k: usize) -> Result<usize> {
    if k == 0 {
        return Ok(0);
    }
    if k >= pop.len() {
        return Err(Error::config(
            "k",
            format!("injection count {k} must be below population size {}", pop.len()),
        ));
    }
    if samples.len() != k {
        return Err(Error::config(
            "k",
            format!("expected {k} samples, got {}", samples.len()),
        ));
    }

    let ranked = pop.ranked_indices();
    let worst: Vec<usize> = ranked.iter().rev().take(k).copied().collect();

    enum Entry {
        Member(usize),
        New(Individual),
    }
    let mut pool: Vec<(f64, Entry)> = worst
        .iter()
        .map(|&i| (pop.members[i].fitness, Entry::Member(i)))
        .collect();
    pool.push((center.fitness, Entry::New(center)));
    pool.extend(samples.into_iter().map(|s| (s.fitness, Entry::New(s))));
    pool.sort_by(|a, b| a.0.total_cmp(&b.0));
    pool.truncate(k);

    let kept: Vec<usize> = pool
        .iter()
        .filter_map(|(_, e)| match e {
            Entry::Member(i) => Some(*i),
            Entry::New(_) => None,
        })
        .collect();
    let mut free: Vec<usize> = worst.into_iter().filter(|i| !kept.contains(i)).collect();
    free.sort_unstable();

    let newcomers: Vec<Individual> = pool
        .into_iter()
        .filter_map(|(_, e)| match e {
            Entry::New(ind) => Some(ind),
            Entry::Member(_) => None,
        })
        .collect();
    let injected = newcomers.len();
    for (slot, ind) in free.into_iter().zip(newcomers) {
        pop.members[slot] = ind;
    }
    Ok(injected)
}
