//! Seeded, parallel execution of every (dimension, function, algorithm, trial)
//! cell and persistence of the outcomes.
//!
//! Trial seeds depend on the master seed, dimension, function and trial but
//! not on the algorithm, so all columns of one trial are paired: plain DE and
//! P1 draw the same initial population.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;

use super::config::ExperimentConfig;
use crate::benchmarks::{suite_entry, SuiteManifest, FUNCTIONS};
use crate::error::{Error, Result};
use crate::optimizers::{HistoryPoint, RunRecord};
use crate::problem::{Budget, Problem};
use crate::rng::{derive_seed, RngStream};

/// Header of `results.csv`.
pub const RESULTS_HEADER: [&str; 6] = ["algorithm", "function", "dimension", "seed", "evaluations", "best_fitness"];
pub const RESULTS_FILE: &str = "results.csv";
pub const FAILURES_FILE: &str = "failures.csv";
pub const MANIFEST_FILE: &str = "suite_manifest.toml";
pub const RESOLVED_CONFIG_FILE: &str = "config.resolved.toml";
pub const HISTORY_DIR: &str = "history";

const TRIAL_DOMAIN: u64 = 0x7472_6961_6c73;

/// Seed shared by every algorithm for one trial of one function.
pub fn trial_seed(master_seed: u64, dimension: usize, function_index: usize, trial: usize) -> u64 {
    derive_seed(
        master_seed,
        &[TRIAL_DOMAIN, dimension as u64, function_index as u64, trial as u64],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey {
    pub dimension: usize,
    pub function: usize,
    pub algorithm: usize,
    pub trial: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub key: CellKey,
    pub algorithm: String,
    pub function: String,
    pub seed: u64,
    pub record: RunRecord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailedRun {
    pub key: CellKey,
    pub algorithm: String,
    pub function: String,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentResults {
    /// Sorted by [`CellKey`].
    pub runs: Vec<RunOutcome>,
    pub failures: Vec<FailedRun>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses rayon's default.
    pub threads: Option<usize>,
    /// Restrict to these function indices (intersected with the config).
    pub functions: Option<Vec<usize>>,
    /// Restrict to these dimensions (intersected with the config).
    pub dimensions: Option<Vec<usize>>,
    /// Replace an existing non-empty output directory.
    pub overwrite: bool,
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic with a non-string payload".to_string()
    }
}

/// All cells of `config` after applying the filters in `options`.
pub fn cell_keys(config: &ExperimentConfig, options: &RunOptions) -> Vec<CellKey> {
    let dims: Vec<usize> = config
        .dimensions
        .iter()
        .copied()
        .filter(|d| options.dimensions.as_ref().is_none_or(|f| f.contains(d)))
        .collect();
    let funcs: Vec<usize> = config
        .functions
        .iter()
        .copied()
        .filter(|f| options.functions.as_ref().is_none_or(|o| o.contains(f)))
        .collect();
    let mut keys = Vec::new();
    for &dimension in &dims {
        for &function in &funcs {
            for algorithm in 0..config.algorithms.len() {
                for trial in 0..config.trials {
                    keys.push(CellKey {
                        dimension,
                        function,
                        algorithm,
                        trial,
                    });
                }
            }
        }
    }
    keys
}

/// Execute every cell in memory. Run errors and panics become [`FailedRun`]s.
pub fn run_cells(config: &ExperimentConfig, options: &RunOptions) -> Result<ExperimentResults> {
    config.validate()?;
    let keys = cell_keys(config, options);

    let mut problems: Vec<((usize, usize), Problem)> = Vec::new();
    for k in &keys {
        if !problems.iter().any(|(id, _)| *id == (k.dimension, k.function)) {
            let p = suite_entry(k.function, k.dimension, config.master_seed).problem()?;
            problems.push(((k.dimension, k.function), p));
        }
    }
    let problem_for = |k: &CellKey| -> &Problem {
        &problems
            .iter()
            .find(|(id, _)| *id == (k.dimension, k.function))
            .expect("problem built for every key")
            .1
    };

    let run_one = |k: &CellKey| -> std::result::Result<RunOutcome, FailedRun> {
        let algorithm = config.algorithms[k.algorithm].label.clone();
        let function = FUNCTIONS[k.function].id.to_string();
        let seed = trial_seed(config.master_seed, k.dimension, k.function, k.trial);
        let fail = |message: String| FailedRun {
            key: *k,
            algorithm: algorithm.clone(),
            function: function.clone(),
            seed,
            message,
        };
        let optimizer = config.optimizer(k.algorithm, k.dimension).map_err(|e| fail(e.to_string()))?;
        let problem = problem_for(k);
        let budget = Budget::new(config.budget(k.dimension));
        let outcome = catch_unwind(AssertUnwindSafe(|| {
            optimizer.run(problem, budget, &mut RngStream::new(seed))
        }));
        match outcome {
            Ok(Ok(record)) => Ok(RunOutcome {
                key: *k,
                algorithm: algorithm.clone(),
                function: function.clone(),
                seed,
                record,
            }),
            Ok(Err(e)) => Err(fail(e.to_string())),
            Err(payload) => Err(fail(format!("panicked: {}", panic_message(payload)))),
        }
    };

    let run_all = || keys.par_iter().map(run_one).collect::<Vec<_>>();
    let outcomes = match options.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::config("threads", e.to_string()))?
            .install(run_all),
        None => run_all(),
    };

    let mut results = ExperimentResults::default();
    for o in outcomes {
        match o {
            Ok(run) => results.runs.push(run),
            Err(f) => {
                warn!("{} on {} d={} trial {} failed: {}", f.algorithm, f.function, f.key.dimension, f.key.trial, f.message);
                results.failures.push(f);
            }
        }
    }
    results.runs.sort_by_key(|r| r.key);
    results.failures.sort_by_key(|f| f.key);
    Ok(results)
}

/// File-system-safe form of an algorithm label.
pub fn file_label(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '-' })
        .collect()
}

pub fn history_path(root: &Path, run: &RunOutcome) -> PathBuf {
    root.join(HISTORY_DIR)
        .join(format!("d{}", run.key.dimension))
        .join(&run.function)
        .join(format!("{}_t{:03}.csv", file_label(&run.algorithm), run.key.trial))
}

fn estimates_path(root: &Path, run: &RunOutcome) -> PathBuf {
    history_path(root, run).with_extension("estimates.csv")
}

fn prepare_output(dir: &Path, overwrite: bool) -> Result<()> {
    if dir.exists() {
        let non_empty = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?.next().is_some();
        if non_empty {
            if !overwrite {
                return Err(Error::config(
                    "output",
                    format!("{} already contains files; pass --overwrite to replace them", dir.display()),
                ));
            }
            fs::remove_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    csv::Writer::from_path(path).map_err(Error::from)
}

pub fn write_results_csv(path: &Path, runs: &[RunOutcome]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(RESULTS_HEADER)?;
    for r in runs {
        w.write_record([
            r.algorithm.clone(),
            r.function.clone(),
            r.key.dimension.to_string(),
            r.seed.to_string(),
            r.record.evaluations_used.to_string(),
            r.record.best_fitness.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_failures_csv(path: &Path, failures: &[FailedRun]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["algorithm", "function", "dimension", "trial", "seed", "message"])?;
    for f in failures {
        w.write_record([
            f.algorithm.clone(),
            f.function.clone(),
            f.key.dimension.to_string(),
            f.key.trial.to_string(),
            f.seed.to_string(),
            f.message.clone(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub const HISTORY_HEADER: [&str; 4] = ["algorithm", "trial", "evaluations", "best_so_far"];

fn write_history(path: &Path, run: &RunOutcome) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(HISTORY_HEADER)?;
    for h in &run.record.history {
        w.write_record([
            run.algorithm.clone(),
            run.key.trial.to_string(),
            h.evaluations.to_string(),
            h.best_so_far.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_estimates(path: &Path, run: &RunOutcome) -> Result<()> {
    let mut w = csv_writer(path)?;
    let dim = run.key.dimension;
    let mut header = vec!["generation".to_string(), "method".to_string(), "fitness".to_string()];
    header.extend((0..dim).map(|i| format!("x{i}")));
    w.write_record(&header)?;
    for e in &run.record.estimates {
        let mut row = vec![e.generation.to_string(), e.method.to_string(), e.fitness.to_string()];
        row.extend(e.coordinates.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Read one history file back.
pub fn read_history(path: &Path) -> Result<(String, Vec<HistoryPoint>)> {
    let mut r = csv::Reader::from_path(path)?;
    let mut label = String::new();
    let mut points = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        label = rec[0].to_string();
        let parse_err = |what: &str| Error::Parse(format!("{}: bad {what}", path.display()));
        points.push(HistoryPoint {
            evaluations: rec[2].parse().map_err(|_| parse_err("evaluations"))?,
            best_so_far: rec[3].parse().map_err(|_| parse_err("best_so_far"))?,
        });
    }
    Ok((label, points))
}

/// Run `config` and persist everything under `output`:
/// `results.csv`, `failures.csv`, `suite_manifest.toml`,
/// `config.resolved.toml` and one history CSV per run.
pub fn run_experiment(config: &ExperimentConfig, output: &Path, options: &RunOptions) -> Result<ExperimentResults> {
    config.validate()?;
    prepare_output(output, options.overwrite)?;
    let write = |name: &str, text: String| {
        let p = output.join(name);
        fs::write(&p, text).map_err(|e| Error::io(&p, e))
    };
    write(RESOLVED_CONFIG_FILE, config.to_toml()?)?;
    write(
        MANIFEST_FILE,
        SuiteManifest::build(&config.dimensions, config.master_seed, &config.functions).to_toml()?,
    )?;

    let keys = cell_keys(config, options).len();
    info!("running {keys} cells into {}", output.display());
    let results = run_cells(config, options)?;

    write_results_csv(&output.join(RESULTS_FILE), &results.runs)?;
    write_failures_csv(&output.join(FAILURES_FILE), &results.failures)?;
    for run in &results.runs {
        write_history(&history_path(output, run), run)?;
        if config.log_estimates && !run.record.estimates.is_empty() {
            write_estimates(&estimates_path(output, run), run)?;
        }
    }
    info!("{} runs finished, {} failed", results.runs.len(), results.failures.len());
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_seed_ignores_algorithm_but_not_trial() {
        assert_eq!(trial_seed(1, 2, 3, 4), trial_seed(1, 2, 3, 4));
        assert_ne!(trial_seed(1, 2, 3, 4), trial_seed(1, 2, 3, 5));
        assert_ne!(trial_seed(1, 2, 3, 4), trial_seed(1, 10, 3, 4));
        assert_ne!(trial_seed(1, 2, 3, 4), trial_seed(1, 2, 4, 4));
    }

    #[test]
    fn file_labels_are_safe() {
        assert_eq!(file_label("DE/best/1"), "DE-best-1");
        assert_eq!(file_label("P1"), "P1");
    }

    #[test]
    fn cell_filters() {
        let c = ExperimentConfig::from_toml_str("trials = 2\ndimensions = [2, 10]\nfunctions = [\"f1\", \"f2\"]\n").unwrap();
        assert_eq!(cell_keys(&c, &RunOptions::default()).len(), 2 * 2 * 8 * 2);
        let o = RunOptions {
            dimensions: Some(vec![2]),
            functions: Some(vec![1]),
            ..RunOptions::default()
        };
        let keys = cell_keys(&c, &o);
        assert_eq!(keys.len(), 16);
        assert!(keys.iter().all(|k| k.dimension == 2 && k.function == 1));
    }
}
