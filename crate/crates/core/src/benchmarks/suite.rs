//! Decorated benchmark problems and the twenty-function suite.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::functions::Base;
use super::rotation::{random_rotation, RotationMatrix};
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::rng::{derive_seed, RngStream};

pub const LOWER: f64 = -100.0;
pub const UPPER: f64 = 100.0;
/// Shifts are drawn inside this box so optima stay away from the boundary.
pub const SHIFT_RANGE: f64 = 80.0;

/// One decorated benchmark: `base(R · (scale · (x - shift)) + c) + bias`, where
/// `c` moves the base's minimizer to the shift point.
#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    pub name: String,
    pub base: Base,
    pub dimension: usize,
    pub bias: f64,
    pub shift: Option<Vec<f64>>,
    pub rotation: Option<RotationMatrix>,
    /// Search-range scaling applied to `x - shift` before rotation.
    pub scale: f64,
}

impl BenchmarkSpec {
    pub fn new(name: impl Into<String>, base: Base, dimension: usize, bias: f64) -> Self {
        Self {
            name: name.into(),
            base,
            dimension,
            bias,
            shift: None,
            rotation: None,
            scale: 1.0,
        }
    }

    pub fn with_shift(mut self, shift: Vec<f64>) -> Self {
        self.shift = Some(shift);
        self
    }

    pub fn with_rotation(mut self, rotation: RotationMatrix) -> Self {
        self.rotation = Some(rotation);
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }
}

pub fn make_problem(spec: &BenchmarkSpec) -> Result<Problem> {
    let d = spec.dimension;
    if d == 0 {
        return Err(Error::config("dimension", "must be at least 1"));
    }
    if let Some(shift) = &spec.shift {
        if shift.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: shift.len(),
                context: "shift vector",
            });
        }
        if let Some(bad) = shift.iter().find(|s| !(LOWER < **s && **s < UPPER)) {
            return Err(Error::config(
                "shift",
                format!("component {bad} is not strictly inside [{LOWER}, {UPPER}]"),
            ));
        }
    }
    if let Some(rot) = &spec.rotation {
        if rot.dimension() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: rot.dimension(),
                context: "rotation matrix",
            });
        }
    }
    if !(spec.scale > 0.0 && spec.scale.is_finite()) {
        return Err(Error::config("scale", "must be positive and finite"));
    }

    let base = spec.base;
    let shift = spec.shift.clone().unwrap_or_else(|| vec![0.0; d]);
    let rotation = spec.rotation.clone();
    let scale = spec.scale;
    let offset = base.minimizer_coordinate();
    let optimum = shift.clone();

    let objective = Arc::new(move |x: &[f64]| -> f64 {
        let mut t: Vec<f64> = x.iter().zip(&shift).map(|(xi, si)| scale * (xi - si)).collect();
        if let Some(r) = &rotation {
            let mut z = vec![0.0; t.len()];
            r.apply(&t, &mut z);
            t = z;
        }
        if offset != 0.0 {
            t.iter_mut().for_each(|v| *v += offset);
        }
        base.eval(&t)
    });
    Problem::with_uniform_bounds(spec.name.clone(), d, LOWER, UPPER, objective, spec.bias)?
        .with_optimum(optimum)
}

/// Static description of one suite row.
#[derive(Debug, Clone, Copy)]
pub struct FunctionInfo {
    pub id: &'static str,
    pub label: &'static str,
    pub base: Base,
    pub rotated: bool,
    pub scale: f64,
    pub bias: f64,
}

const fn row(
    id: &'static str,
    label: &'static str,
    base: Base,
    rotated: bool,
    scale: f64,
    bias: f64,
) -> FunctionInfo {
    FunctionInfo {
        id,
        label,
        base,
        rotated,
        scale,
        bias,
    }
}

/// The unimodal and basic multimodal rows, in table order.
pub const FUNCTIONS: [FunctionInfo; 20] = [
    row("f1", "Sphere function", Base::Sphere, false, 1.0, -1400.0),
    row("f2", "Rotated high conditioned elliptic function", Base::Elliptic, true, 1.0, -1300.0),
    row("f3", "Rotated Bent Cigar function", Base::BentCigar, true, 1.0, -1200.0),
    row("f4", "Rotated discus function", Base::Discus, true, 1.0, -1100.0),
    row("f5", "Different powers function", Base::DifferentPowers, false, 1.0, -1000.0),
    row("f6", "Rotated Rosenbrock's function", Base::Rosenbrock, true, 2.048 / 100.0, -900.0),
    row("f7", "Rotated Schaffers function", Base::SchaffersF7, true, 1.0, -800.0),
    row("f8", "Rotated Ackley's function", Base::Ackley, true, 1.0, -700.0),
    row("f9", "Rotated Weierstrass function", Base::Weierstrass, true, 0.5 / 100.0, -600.0),
    row("f10", "Rotated Griewank's function", Base::Griewank, true, 600.0 / 100.0, -500.0),
    row("f11", "Rastrigin's function", Base::Rastrigin, false, 5.12 / 100.0, -400.0),
    row("f12", "Rotated Rastrigin's function", Base::Rastrigin, true, 5.12 / 100.0, -300.0),
    row(
        "f13",
        "Non-continuous rotated Rastrigin's function",
        Base::NoncontinuousRastrigin,
        true,
        5.12 / 100.0,
        -200.0,
    ),
    row("f14", "Schwefel's function", Base::Schwefel, false, 1000.0 / 100.0, -100.0),
    row("f15", "Rotated Schwefel's function", Base::Schwefel, true, 1000.0 / 100.0, 100.0),
    row("f16", "Rotated Katsuura function", Base::Katsuura, true, 5.0 / 100.0, 200.0),
    row("f17", "Lunacek bi-Rastrigin function", Base::LunacekBiRastrigin, false, 10.0 / 100.0, 300.0),
    row(
        "f18",
        "Rotated Lunacek bi-Rastrigin function",
        Base::LunacekBiRastrigin,
        true,
        10.0 / 100.0,
        400.0,
    ),
    row(
        "f19",
        "Expanded Griewank's plus Rosenbrock's function",
        Base::ExpandedGriewankRosenbrock,
        false,
        5.0 / 100.0,
        500.0,
    ),
    row("f20", "Expanded Schaffers f6 function", Base::ExpandedSchaffersF6, false, 1.0, 600.0),
];

/// Index of a suite function by id (`"f7"`).
pub fn function_index(id: &str) -> Result<usize> {
    FUNCTIONS
        .iter()
        .position(|f| f.id == id)
        .ok_or_else(|| Error::UnknownFunction(id.to_string()))
}

/// A suite row instantiated for one dimension and master seed.
#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub info: FunctionInfo,
    pub seed: u64,
    pub spec: BenchmarkSpec,
}

impl SuiteEntry {
    pub fn problem(&self) -> Result<Problem> {
        make_problem(&self.spec)
    }
}

pub fn suite_entry(index: usize, dimension: usize, master_seed: u64) -> SuiteEntry {
    let info = FUNCTIONS[index];
    let seed = derive_seed(master_seed, &[dimension as u64, index as u64]);
    let root = RngStream::new(seed);
    let mut shift_rng = root.substream(&[0]);
    let shift: Vec<f64> = (0..dimension)
        .map(|_| shift_rng.uniform(-SHIFT_RANGE, SHIFT_RANGE))
        .collect();
    let mut spec = BenchmarkSpec::new(info.id, info.base, dimension, info.bias)
        .with_shift(shift)
        .with_scale(info.scale);
    if info.rotated {
        spec = spec.with_rotation(random_rotation(dimension, &mut root.substream(&[1])));
    }
    SuiteEntry { info, seed, spec }
}

pub fn suite_entries(dimension: usize, master_seed: u64) -> Vec<SuiteEntry> {
    (0..FUNCTIONS.len())
        .map(|i| suite_entry(i, dimension, master_seed))
        .collect()
}

/// All twenty suite problems for `dimension`, in table order.
pub fn suite(dimension: usize, master_seed: u64) -> Result<Vec<Problem>> {
    suite_entries(dimension, master_seed)
        .iter()
        .map(SuiteEntry::problem)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub id: String,
    pub name: String,
    pub base: Base,
    pub bias: f64,
    pub seed: u64,
    pub dimension: usize,
    pub rotated: bool,
    pub scale: f64,
    pub shift: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteManifest {
    pub master_seed: u64,
    pub functions: Vec<ManifestRow>,
}

impl SuiteManifest {
    pub fn build(dimensions: &[usize], master_seed: u64, indices: &[usize]) -> Self {
        let functions = dimensions
            .iter()
            .flat_map(|&d| indices.iter().map(move |&i| suite_entry(i, d, master_seed)))
            .map(|e| ManifestRow {
                id: e.info.id.to_string(),
                name: e.info.label.to_string(),
                base: e.info.base,
                bias: e.info.bias,
                seed: e.seed,
                dimension: e.spec.dimension,
                rotated: e.info.rotated,
                scale: e.info.scale,
                shift: e.spec.shift.clone().unwrap_or_default(),
            })
            .collect();
        Self {
            master_seed,
            functions,
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn bias(&self, id: &str, dimension: usize) -> Option<f64> {
        self.functions
            .iter()
            .find(|r| r.id == id && r.dimension == dimension)
            .map(|r| r.bias)
    }
}
