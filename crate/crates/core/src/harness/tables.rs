//! Summary and significance tables in CSV and aligned-text form.
//!
//! * `summary.csv`: `function,dimension,<algorithm...>`, each cell `mean ± std`
//!   at full precision (empty when the algorithm has no runs in that cell).
//! * `significance.csv`: `function,dimension,algorithm_a,algorithm_b,p_raw,
//!   p_adjusted,symbol,better` with ASCII symbols `>>`, `>`, `~`.
//! * `kruskal.csv`: `function,dimension,statistic,p_value`.
//!
//! The `.txt` variants carry the same content rounded for reading.

use std::fs;
use std::path::{Path, PathBuf};

use super::report::ComparisonReport;
use crate::error::{Error, Result};
use crate::stats::Symbol;

pub const SUMMARY_FILE: &str = "summary.csv";
pub const SIGNIFICANCE_FILE: &str = "significance.csv";
pub const KRUSKAL_FILE: &str = "kruskal.csv";
pub const SUMMARY_TEXT_FILE: &str = "summary.txt";
pub const SIGNIFICANCE_TEXT_FILE: &str = "significance.txt";

pub const SIGNIFICANCE_HEADER: [&str; 8] = [
    "function",
    "dimension",
    "algorithm_a",
    "algorithm_b",
    "p_raw",
    "p_adjusted",
    "symbol",
    "better",
];

const PLUS_MINUS: &str = " ± ";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Text,
    Both,
}

fn to_csv(rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

fn from_csv(text: &str) -> Result<Vec<Vec<String>>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    r.records()
        .map(|rec| Ok(rec?.iter().map(str::to_string).collect()))
        .collect()
}

fn summary_rows(report: &ComparisonReport, fmt: impl Fn(f64, f64) -> String) -> Vec<Vec<String>> {
    let mut header = vec!["function".to_string(), "dimension".to_string()];
    header.extend(report.algorithms.iter().cloned());
    let mut rows = vec![header];
    for cell in &report.cells {
        let mut row = vec![cell.function.clone(), cell.dimension.to_string()];
        for alg in &report.algorithms {
            row.push(cell.summary(alg).map_or(String::new(), |s| fmt(s.mean, s.std)));
        }
        rows.push(row);
    }
    rows
}

pub fn summary_csv(report: &ComparisonReport) -> Result<String> {
    to_csv(summary_rows(report, |m, s| format!("{m}{PLUS_MINUS}{s}")))
}

pub fn significance_csv(report: &ComparisonReport) -> Result<String> {
    let mut rows = vec![SIGNIFICANCE_HEADER.iter().map(|s| s.to_string()).collect()];
    for cell in &report.cells {
        for p in &cell.pairs {
            rows.push(vec![
                cell.function.clone(),
                cell.dimension.to_string(),
                p.algorithm_a.clone(),
                p.algorithm_b.clone(),
                p.p_raw.to_string(),
                p.p_adjusted.to_string(),
                p.symbol.as_ascii().to_string(),
                p.better.clone().unwrap_or_default(),
            ]);
        }
    }
    to_csv(rows)
}

pub fn kruskal_csv(report: &ComparisonReport) -> Result<String> {
    let mut rows = vec![vec!["function", "dimension", "statistic", "p_value"]
        .into_iter()
        .map(String::from)
        .collect()];
    for cell in &report.cells {
        if let Some(k) = &cell.kruskal {
            rows.push(vec![
                cell.function.clone(),
                cell.dimension.to_string(),
                k.statistic.to_string(),
                k.p_value.to_string(),
            ]);
        }
    }
    to_csv(rows)
}

/// Left-aligned columns separated by two spaces.
fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s}{}", " ".repeat(widths[c] - s.chars().count())))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn summary_text(report: &ComparisonReport) -> String {
    align(&summary_rows(report, |m, s| format!("{m:.4e}{PLUS_MINUS}{s:.2e}")))
}

pub fn significance_text(report: &ComparisonReport) -> String {
    let mut rows = vec![vec![
        "function".to_string(),
        "dimension".to_string(),
        "comparison".to_string(),
        "p_adjusted".to_string(),
        "kruskal_p".to_string(),
    ]];
    for cell in &report.cells {
        let kp = cell.kruskal.map_or(String::new(), |k| format!("{:.3e}", k.p_value));
        for p in &cell.pairs {
            let (first, second) = match &p.better {
                Some(b) if *b == p.algorithm_b => (&p.algorithm_b, &p.algorithm_a),
                _ => (&p.algorithm_a, &p.algorithm_b),
            };
            let symbol = if p.better.is_none() { Symbol::Similar } else { p.symbol };
            rows.push(vec![
                cell.function.clone(),
                cell.dimension.to_string(),
                format!("{first} {symbol} {second}"),
                format!("{:.3e}", p.p_adjusted),
                kp.clone(),
            ]);
        }
    }
    align(&rows)
}

/// Write the tables into `dir`, returning the paths written.
pub fn emit_tables(report: &ComparisonReport, dir: &Path, format: TableFormat) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files: Vec<(&str, String)> = Vec::new();
    if matches!(format, TableFormat::Csv | TableFormat::Both) {
        files.push((SUMMARY_FILE, summary_csv(report)?));
        files.push((SIGNIFICANCE_FILE, significance_csv(report)?));
        files.push((KRUSKAL_FILE, kruskal_csv(report)?));
    }
    if matches!(format, TableFormat::Text | TableFormat::Both) {
        files.push((SUMMARY_TEXT_FILE, summary_text(report)));
        files.push((SIGNIFICANCE_TEXT_FILE, significance_text(report)));
    }
    let mut written = Vec::new();
    for (name, text) in files {
        let p = dir.join(name);
        fs::write(&p, text).map_err(|e| Error::io(&p, e))?;
        written.push(p);
    }
    Ok(written)
}

/// One populated cell of `summary.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryEntry {
    pub function: String,
    pub dimension: usize,
    pub algorithm: String,
    pub mean: f64,
    pub std: f64,
}

/// Parsed `summary.csv`: the algorithm header plus every populated cell.
pub fn parse_summary_csv(text: &str) -> Result<(Vec<String>, Vec<SummaryEntry>)> {
    let rows = from_csv(text)?;
    let header = rows.first().ok_or_else(|| Error::Parse("empty summary table".into()))?;
    if header.len() < 2 || header[0] != "function" || header[1] != "dimension" {
        return Err(Error::Parse(format!("unexpected summary header {header:?}")));
    }
    let algorithms = header[2..].to_vec();
    let mut entries = Vec::new();
    for row in &rows[1..] {
        let dimension = row[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad dimension {:?}", row[1])))?;
        for (alg, cell) in algorithms.iter().zip(&row[2..]) {
            if cell.is_empty() {
                continue;
            }
            let (m, s) = cell
                .split_once(PLUS_MINUS)
                .ok_or_else(|| Error::Parse(format!("bad summary cell {cell:?}")))?;
            let num = |t: &str| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t:?}")));
            entries.push(SummaryEntry {
                function: row[0].clone(),
                dimension,
                algorithm: alg.clone(),
                mean: num(m)?,
                std: num(s)?,
            });
        }
    }
    Ok((algorithms, entries))
}

/// One row of `significance.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignificanceEntry {
    pub function: String,
    pub dimension: usize,
    pub algorithm_a: String,
    pub algorithm_b: String,
    pub p_raw: f64,
    pub p_adjusted: f64,
    pub symbol: Symbol,
    pub better: Option<String>,
}

pub fn parse_significance_csv(text: &str) -> Result<Vec<SignificanceEntry>> {
    let rows = from_csv(text)?;
    match rows.first() {
        Some(h) if *h == SIGNIFICANCE_HEADER => {}
        other => return Err(Error::Parse(format!("unexpected significance header {other:?}"))),
    }
    rows[1..]
        .iter()
        .map(|r| {
            let num = |t: &str| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t:?}")));
            Ok(SignificanceEntry {
                function: r[0].clone(),
                dimension: r[1].parse().map_err(|_| Error::Parse(format!("bad dimension {:?}", r[1])))?,
                algorithm_a: r[2].clone(),
                algorithm_b: r[3].clone(),
                p_raw: num(&r[4])?,
                p_adjusted: num(&r[5])?,
                symbol: Symbol::parse(&r[6])?,
                better: if r[7].is_empty() { None } else { Some(r[7].clone()) },
            })
        })
        .collect()
}
