//! Experiment configuration: TOML ingestion, defaults and validation.
//!
//! ```toml
//! master_seed = 7
//! trials = 30
//! dimensions = [2, 10, 30]
//! functions = ["f1", "f2"]
//!
//! [[algorithms]]
//! name = "DE"
//!
//! [[algorithms]]
//! name = "DE-rand"
//! kind = "de"
//! strategy = "rand/1"
//! ```
//!
//! Omitted keys take their defaults; unknown keys, and parameters that do not
//! apply to an algorithm's kind, are rejected with the key named.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::accelerated::AcceleratedConfig;
use crate::benchmarks::{function_index, FUNCTIONS};
use crate::error::{Error, Result};
use crate::estimation::WeightMode;
use crate::optimizers::{Algorithm, DeStrategy, OptimizerConfig};

pub const DEFAULT_DIMENSIONS: [usize; 3] = [2, 10, 30];
pub const DEFAULT_TRIALS: usize = 30;
pub const DEFAULT_MASTER_SEED: u64 = 20_240_611;
pub const DEFAULT_POPULATION_FACTOR: usize = 50;
pub const DEFAULT_BUDGET_FACTOR: u64 = 1000;

/// One `[[algorithms]]` block. Every parameter is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AlgorithmParams {
    /// Column label; also the kind when `kind` is omitted.
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub population_size: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossover_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation_sigma_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tournament_size: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation_strength: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inertia: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vmax_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neighborhood: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neighborhood_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elite_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub was_mode: Option<String>,
}

impl AlgorithmParams {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            ..Self::default()
        }
    }

    fn set_keys(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        let mut mark = |set: bool, key: &'static str| {
            if set {
                keys.push(key);
            }
        };
        mark(self.population_size.is_some(), "population_size");
        mark(self.strategy.is_some(), "strategy");
        mark(self.scale_factor.is_some(), "scale_factor");
        mark(self.crossover_rate.is_some(), "crossover_rate");
        mark(self.mutation_rate.is_some(), "mutation_rate");
        mark(self.mutation_sigma_fraction.is_some(), "mutation_sigma_fraction");
        mark(self.tournament_size.is_some(), "tournament_size");
        mark(self.mutation_strength.is_some(), "mutation_strength");
        mark(self.inertia.is_some(), "inertia");
        mark(self.c1.is_some(), "c1");
        mark(self.c2.is_some(), "c2");
        mark(self.vmax_fraction.is_some(), "vmax_fraction");
        mark(self.neighborhood.is_some(), "neighborhood");
        mark(self.neighborhood_fraction.is_some(), "neighborhood_fraction");
        mark(self.elite_rate.is_some(), "elite_rate");
        mark(self.sigma.is_some(), "sigma");
        mark(self.k.is_some(), "k");
        mark(self.was_mode.is_some(), "was_mode");
        keys
    }
}

fn allowed_keys(kind: Algorithm) -> &'static [&'static str] {
    const DE: &[&str] = &["population_size", "strategy", "scale_factor", "crossover_rate"];
    match kind {
        Algorithm::Rs => &["neighborhood", "neighborhood_fraction"],
        Algorithm::Ga => &[
            "population_size",
            "crossover_rate",
            "mutation_rate",
            "mutation_sigma_fraction",
            "tournament_size",
        ],
        Algorithm::De => DE,
        Algorithm::Es => &["mutation_strength"],
        Algorithm::Pso => &["population_size", "inertia", "c1", "c2", "vmax_fraction"],
        Algorithm::P1 | Algorithm::P2 => &[
            "population_size",
            "strategy",
            "scale_factor",
            "crossover_rate",
            "elite_rate",
            "sigma",
            "k",
            "was_mode",
        ],
    }
}

fn positive(key: &str, value: i64) -> Result<usize> {
    if value >= 1 {
        Ok(value as usize)
    } else {
        Err(Error::config(key, format!("must be at least 1, got {value}")))
    }
}

fn non_negative(key: &str, value: i64) -> Result<usize> {
    if value >= 0 {
        Ok(value as usize)
    } else {
        Err(Error::config(key, format!("must be non-negative, got {value}")))
    }
}

/// A configured algorithm column.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmEntry {
    pub label: String,
    pub kind: Algorithm,
    pub params: AlgorithmParams,
}

impl AlgorithmEntry {
    pub fn from_params(params: AlgorithmParams) -> Result<Self> {
        if params.name.trim().is_empty() {
            return Err(Error::config("algorithms.name", "every algorithm needs a name"));
        }
        let kind_text = params.kind.clone().unwrap_or_else(|| params.name.clone());
        let kind: Algorithm = kind_text.parse().map_err(|_| {
            Error::config(
                if params.kind.is_some() { "algorithms.kind" } else { "algorithms.name" },
                format!("unknown algorithm {kind_text:?} (expected RS, GA, DE, ES, PSO, P1 or P2)"),
            )
        })?;
        let allowed = allowed_keys(kind);
        if let Some(bad) = params.set_keys().into_iter().find(|k| !allowed.contains(k)) {
            return Err(Error::config(
                format!("algorithms.{bad}"),
                format!("{bad} does not apply to {} ({kind})", params.name),
            ));
        }
        Ok(Self {
            label: params.name.clone(),
            kind,
            params,
        })
    }

    /// Fully parameterized optimizer for `dimension`, without the history stride.
    pub fn optimizer(&self, dimension: usize, population_factor: usize) -> Result<OptimizerConfig> {
        let p = &self.params;
        let key = |k: &str| format!("algorithms.{k}");
        let population = match p.population_size {
            Some(v) => positive(&key("population_size"), v)?,
            None => population_factor * dimension,
        };
        let strategy = match &p.strategy {
            Some(s) => Some(s.parse::<DeStrategy>().map_err(|e| Error::config(key("strategy"), e.to_string()))?),
            None => None,
        };
        let mut config = OptimizerConfig::defaults(self.kind, dimension);
        match &mut config {
            OptimizerConfig::Rs(c) => {
                c.neighborhood = p.neighborhood.unwrap_or(c.neighborhood);
                c.neighborhood_fraction = p.neighborhood_fraction.unwrap_or(c.neighborhood_fraction);
            }
            OptimizerConfig::Ga(c) => {
                c.population_size = population;
                c.crossover_rate = p.crossover_rate.unwrap_or(c.crossover_rate);
                c.mutation_rate = p.mutation_rate.unwrap_or(c.mutation_rate);
                c.mutation_sigma_fraction = p.mutation_sigma_fraction.unwrap_or(c.mutation_sigma_fraction);
                if let Some(t) = p.tournament_size {
                    c.tournament_size = positive(&key("tournament_size"), t)?;
                }
            }
            OptimizerConfig::De(c) => {
                c.population_size = population;
                c.strategy = strategy.unwrap_or(c.strategy);
                c.scale_factor = p.scale_factor.unwrap_or(c.scale_factor);
                c.crossover_rate = p.crossover_rate.unwrap_or(c.crossover_rate);
            }
            OptimizerConfig::Es(c) => {
                c.mutation_strength = p.mutation_strength.unwrap_or(c.mutation_strength);
            }
            OptimizerConfig::Pso(c) => {
                c.population_size = population;
                c.inertia = p.inertia.unwrap_or(c.inertia);
                c.c1 = p.c1.unwrap_or(c.c1);
                c.c2 = p.c2.unwrap_or(c.c2);
                c.vmax_fraction = p.vmax_fraction.unwrap_or(c.vmax_fraction);
            }
            OptimizerConfig::Accelerated(c) => {
                apply_accelerated(c, p, population, strategy)?;
            }
        }
        config.validate().map_err(|e| match e {
            Error::Config { key, message } => Error::Config {
                key: format!("algorithms.{key}"),
                message: format!("{message} (algorithm {}, dimension {dimension})", self.label),
            },
            other => other,
        })?;
        Ok(config)
    }
}

fn apply_accelerated(
    c: &mut AcceleratedConfig,
    p: &AlgorithmParams,
    population: usize,
    strategy: Option<DeStrategy>,
) -> Result<()> {
    c.de.population_size = population;
    c.de.strategy = strategy.unwrap_or(c.de.strategy);
    c.de.scale_factor = p.scale_factor.unwrap_or(c.de.scale_factor);
    c.de.crossover_rate = p.crossover_rate.unwrap_or(c.de.crossover_rate);
    c.elite_rate = p.elite_rate.unwrap_or(c.elite_rate);
    c.sigma = p.sigma.unwrap_or(c.sigma);
    if let Some(k) = p.k {
        c.k = Some(non_negative("algorithms.k", k)?);
    }
    if let Some(mode) = &p.was_mode {
        c.was_mode = match mode.as_str() {
            "consistent" => WeightMode::Consistent,
            "literal" => WeightMode::Literal,
            other => {
                return Err(Error::config(
                    "algorithms.was_mode",
                    format!("{other:?} is not \"consistent\" or \"literal\""),
                ))
            }
        };
    }
    Ok(())
}

fn population_of(config: &OptimizerConfig) -> usize {
    match config {
        OptimizerConfig::Rs(_) | OptimizerConfig::Es(_) => 1,
        OptimizerConfig::Ga(c) => c.population_size,
        OptimizerConfig::De(c) => c.population_size,
        OptimizerConfig::Pso(c) => c.population_size,
        OptimizerConfig::Accelerated(c) => c.de.population_size,
    }
}

/// The eight default columns: five baselines, plain DE, P1, P2 and a
/// DE/best/1 strategy ablation.
pub fn default_algorithms() -> Vec<AlgorithmEntry> {
    let mut params: Vec<AlgorithmParams> = ["RS", "GA", "DE", "ES", "PSO", "P1", "P2"]
        .into_iter()
        .map(AlgorithmParams::named)
        .collect();
    params.push(AlgorithmParams {
        kind: Some("de".into()),
        strategy: Some("best/1".into()),
        ..AlgorithmParams::named("DE/best/1")
    });
    params
        .into_iter()
        .map(|p| AlgorithmEntry::from_params(p).expect("default algorithms are valid"))
        .collect()
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    master_seed: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dimensions: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    functions: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    history_stride: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    population_factor: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    budget_factor: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    log_estimates: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    algorithms: Option<Vec<AlgorithmParams>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub trials: usize,
    pub dimensions: Vec<usize>,
    /// Indices into [`FUNCTIONS`].
    pub functions: Vec<usize>,
    pub algorithms: Vec<AlgorithmEntry>,
    pub output: Option<PathBuf>,
    /// Evaluations between history samples; `None` means one population size.
    pub history_stride: Option<u64>,
    pub population_factor: usize,
    pub budget_factor: u64,
    /// Also write per-generation estimated points of P1/P2 runs.
    pub log_estimates: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            master_seed: DEFAULT_MASTER_SEED,
            trials: DEFAULT_TRIALS,
            dimensions: DEFAULT_DIMENSIONS.to_vec(),
            functions: (0..FUNCTIONS.len()).collect(),
            algorithms: default_algorithms(),
            output: None,
            history_stride: None,
            population_factor: DEFAULT_POPULATION_FACTOR,
            budget_factor: DEFAULT_BUDGET_FACTOR,
            log_estimates: false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut c = ExperimentConfig::default();
        if let Some(seed) = raw.master_seed {
            c.master_seed = u64::try_from(seed)
                .map_err(|_| Error::config("master_seed", format!("must be non-negative, got {seed}")))?;
        }
        if let Some(t) = raw.trials {
            c.trials = positive("trials", t)?;
        }
        if let Some(dims) = raw.dimensions {
            c.dimensions = dims
                .into_iter()
                .map(|d| positive("dimensions", d))
                .collect::<Result<_>>()?;
        }
        if let Some(fs) = raw.functions {
            c.functions = fs
                .iter()
                .map(|f| function_index(f).map_err(|_| Error::config("functions", format!("unknown function {f:?}"))))
                .collect::<Result<_>>()?;
        }
        c.output = raw.output.map(PathBuf::from);
        if let Some(s) = raw.history_stride {
            c.history_stride = Some(positive("history_stride", s)? as u64);
        }
        if let Some(p) = raw.population_factor {
            c.population_factor = positive("population_factor", p)?;
        }
        if let Some(b) = raw.budget_factor {
            c.budget_factor = positive("budget_factor", b)? as u64;
        }
        c.log_estimates = raw.log_estimates.unwrap_or(false);
        if let Some(algs) = raw.algorithms {
            c.algorithms = algs
                .into_iter()
                .map(AlgorithmEntry::from_params)
                .collect::<Result<_>>()?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if self.dimensions.is_empty() {
            return Err(Error::config("dimensions", "at least one dimension is required"));
        }
        if self.functions.is_empty() {
            return Err(Error::config("functions", "at least one function is required"));
        }
        if let Some(&f) = self.functions.iter().find(|&&f| f >= FUNCTIONS.len()) {
            return Err(Error::config("functions", format!("function index {f} is out of range")));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("algorithms", "at least one algorithm is required"));
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..i].iter().any(|b| b.label == a.label) {
                return Err(Error::config("algorithms.name", format!("duplicate algorithm name {:?}", a.label)));
            }
            for &d in &self.dimensions {
                let pop = population_of(&a.optimizer(d, self.population_factor)?);
                if self.budget(d) < pop as u64 {
                    return Err(Error::config(
                        "budget_factor",
                        format!(
                            "budget {} at dimension {d} cannot cover the initial population of {} ({pop})",
                            self.budget(d),
                            a.label
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn budget(&self, dimension: usize) -> u64 {
        self.budget_factor * dimension as u64
    }

    pub fn history_stride(&self, dimension: usize) -> u64 {
        self.history_stride
            .unwrap_or((self.population_factor * dimension) as u64)
    }

    /// Optimizer for algorithm column `index` at `dimension`, stride included.
    pub fn optimizer(&self, index: usize, dimension: usize) -> Result<OptimizerConfig> {
        let mut c = self.algorithms[index].optimizer(dimension, self.population_factor)?;
        c.set_history_stride(self.history_stride(dimension));
        Ok(c)
    }

    pub fn algorithm_labels(&self) -> Vec<String> {
        self.algorithms.iter().map(|a| a.label.clone()).collect()
    }

    /// TOML with every top-level default written out.
    pub fn to_toml(&self) -> Result<String> {
        let raw = RawConfig {
            master_seed: Some(self.master_seed as i64),
            trials: Some(self.trials as i64),
            dimensions: Some(self.dimensions.iter().map(|&d| d as i64).collect()),
            functions: Some(self.functions.iter().map(|&i| FUNCTIONS[i].id.to_string()).collect()),
            output: self.output.as_ref().map(|p| p.display().to_string()),
            history_stride: self.history_stride.map(|s| s as i64),
            population_factor: Some(self.population_factor as i64),
            budget_factor: Some(self.budget_factor as i64),
            log_estimates: Some(self.log_estimates),
            algorithms: Some(self.algorithms.iter().map(|a| a.params.clone()).collect()),
        };
        toml::to_string(&raw).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    ExperimentConfig::from_toml_str(&text)
}
