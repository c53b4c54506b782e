//! Per-cell statistical comparison of final fitness values.

use std::path::Path;

use super::experiment::{RunOutcome, RESULTS_FILE, RESULTS_HEADER};
use crate::error::{Error, Result};
use crate::stats::{
    better_group, holm_adjust, kruskal_wallis, mann_whitney_u, SampleGroup, Symbol, TestResult,
};

/// One row of `results.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub algorithm: String,
    pub function: String,
    pub dimension: usize,
    pub seed: u64,
    pub evaluations: u64,
    pub best_fitness: f64,
}

impl From<&RunOutcome> for ResultRow {
    fn from(r: &RunOutcome) -> Self {
        Self {
            algorithm: r.algorithm.clone(),
            function: r.function.clone(),
            dimension: r.key.dimension,
            seed: r.seed,
            evaluations: r.record.evaluations_used,
            best_fitness: r.record.best_fitness,
        }
    }
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != RESULTS_HEADER {
        return Err(Error::Parse(format!(
            "{}: unexpected header {header:?}",
            path.display()
        )));
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = |col: &str| Error::Parse(format!("{} row {}: bad {col}", path.display(), line + 2));
        rows.push(ResultRow {
            algorithm: rec[0].to_string(),
            function: rec[1].to_string(),
            dimension: rec[2].parse().map_err(|_| bad("dimension"))?,
            seed: rec[3].parse().map_err(|_| bad("seed"))?,
            evaluations: rec[4].parse().map_err(|_| bad("evaluations"))?,
            best_fitness: rec[5].parse().map_err(|_| bad("best_fitness"))?,
        });
    }
    Ok(rows)
}

/// `results.csv` inside a results directory.
pub fn read_results_dir(dir: &Path) -> Result<Vec<ResultRow>> {
    read_results(&dir.join(RESULTS_FILE))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub algorithm: String,
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub std: f64,
    /// Fewer runs than the fullest group in the cell.
    pub reduced: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairComparison {
    pub algorithm_a: String,
    pub algorithm_b: String,
    pub p_raw: f64,
    pub p_adjusted: f64,
    pub symbol: Symbol,
    /// Group with the lower median (mean on ties); `None` if indistinguishable.
    pub better: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub function: String,
    pub dimension: usize,
    pub summaries: Vec<GroupSummary>,
    pub kruskal: Option<TestResult>,
    pub pairs: Vec<PairComparison>,
}

impl CellReport {
    pub fn summary(&self, algorithm: &str) -> Option<&GroupSummary> {
        self.summaries.iter().find(|s| s.algorithm == algorithm)
    }

    pub fn pair(&self, a: &str, b: &str) -> Option<&PairComparison> {
        self.pairs.iter().find(|p| {
            (p.algorithm_a == a && p.algorithm_b == b) || (p.algorithm_a == b && p.algorithm_b == a)
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub algorithms: Vec<String>,
    pub cells: Vec<CellReport>,
}

impl ComparisonReport {
    pub fn cell(&self, function: &str, dimension: usize) -> Option<&CellReport> {
        self.cells
            .iter()
            .find(|c| c.function == function && c.dimension == dimension)
    }
}

fn first_appearance<T: PartialEq + Clone>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for it in items {
        if !out.contains(&it) {
            out.push(it);
        }
    }
    out
}

/// Summaries, Kruskal–Wallis and Holm-adjusted pairwise Mann–Whitney tests
/// for every (function, dimension) cell. Algorithms and cells keep the order
/// in which they first appear in `rows`.
pub fn build_report(rows: &[ResultRow]) -> Result<ComparisonReport> {
    let algorithms = first_appearance(rows.iter().map(|r| r.algorithm.clone()));
    if algorithms.len() < 2 {
        return Err(Error::Stats(format!(
            "a comparison needs at least 2 algorithms, found {}",
            algorithms.len()
        )));
    }
    let cells = first_appearance(rows.iter().map(|r| (r.function.clone(), r.dimension)));
    let mut out = Vec::with_capacity(cells.len());
    for (function, dimension) in cells {
        let mut groups = Vec::new();
        for alg in &algorithms {
            let values: Vec<f64> = rows
                .iter()
                .filter(|r| r.function == function && r.dimension == dimension && &r.algorithm == alg)
                .map(|r| r.best_fitness)
                .filter(|v| v.is_finite())
                .collect();
            if !values.is_empty() {
                groups.push(SampleGroup::new(alg.clone(), values)?);
            }
        }
        out.push(compare_cell(function, dimension, &groups)?);
    }
    Ok(ComparisonReport {
        algorithms,
        cells: out,
    })
}

/// Statistics for one cell from its per-algorithm samples.
pub fn compare_cell(function: String, dimension: usize, groups: &[SampleGroup]) -> Result<CellReport> {
    let full = groups.iter().map(SampleGroup::len).max().unwrap_or(0);
    let summaries = groups
        .iter()
        .map(|g| GroupSummary {
            algorithm: g.label.clone(),
            n: g.len(),
            mean: g.mean(),
            median: g.median(),
            std: g.std_dev(),
            reduced: g.len() < full,
        })
        .collect();
    let kruskal = if groups.len() >= 2 {
        Some(kruskal_wallis(groups)?)
    } else {
        None
    };

    let mut raw = Vec::new();
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            raw.push((i, j, mann_whitney_u(&groups[i], &groups[j])?.p_value));
        }
    }
    let adjusted = holm_adjust(&raw.iter().map(|r| r.2).collect::<Vec<_>>());
    let pairs = raw
        .iter()
        .zip(adjusted)
        .map(|(&(i, j, p_raw), p_adjusted)| PairComparison {
            algorithm_a: groups[i].label.clone(),
            algorithm_b: groups[j].label.clone(),
            p_raw,
            p_adjusted,
            symbol: Symbol::from_p(p_adjusted),
            better: better_group(&groups[i], &groups[j]).map(|g| g.label.clone()),
        })
        .collect();
    Ok(CellReport {
        function,
        dimension,
        summaries,
        kruskal,
        pairs,
    })
}
