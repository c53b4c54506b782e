//! Convergence plots: median best-so-far with an interquartile band per
//! algorithm, written as standalone SVG with a CSV sidecar of the plotted
//! points.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;

use super::experiment::{file_label, read_history, HISTORY_DIR, MANIFEST_FILE};
use super::report::read_results_dir;
use crate::benchmarks::SuiteManifest;
use crate::error::{Error, Result};
use crate::optimizers::HistoryPoint;
use crate::stats::quantile;

pub const SIDECAR_HEADER: [&str; 5] = ["algorithm", "evaluations", "y_median", "y_q1", "y_q3"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub evaluations: u64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceCurve {
    pub algorithm: String,
    pub runs: usize,
    pub points: Vec<CurvePoint>,
}

/// Best-so-far of a history at `evaluations`, holding the last recorded value.
fn value_at(history: &[HistoryPoint], evaluations: u64) -> Option<f64> {
    let idx = history.partition_point(|h| h.evaluations <= evaluations);
    idx.checked_sub(1).map(|i| history[i].best_so_far)
}

/// Pointwise median and quartiles of the runs' step curves over the union of
/// their evaluation counts. `None` when there is nothing to aggregate.
pub fn aggregate(algorithm: &str, runs: &[Vec<HistoryPoint>]) -> Option<ConvergenceCurve> {
    let runs: Vec<&Vec<HistoryPoint>> = runs.iter().filter(|r| !r.is_empty()).collect();
    if runs.is_empty() {
        return None;
    }
    let mut grid: Vec<u64> = runs.iter().flat_map(|r| r.iter().map(|h| h.evaluations)).collect();
    grid.sort_unstable();
    grid.dedup();
    let points = grid
        .into_iter()
        .filter_map(|e| {
            let vals: Vec<f64> = runs.iter().filter_map(|r| value_at(r, e)).collect();
            if vals.is_empty() {
                return None;
            }
            Some(CurvePoint {
                evaluations: e,
                median: quantile(&vals, 0.5),
                q1: quantile(&vals, 0.25),
                q3: quantile(&vals, 0.75),
            })
        })
        .collect();
    Some(ConvergenceCurve {
        algorithm: algorithm.to_string(),
        runs: runs.len(),
        points,
    })
}

/// A series in plot coordinates (possibly log-transformed).
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub algorithm: String,
    /// `(evaluations, median, q1, q3)`.
    pub points: Vec<(u64, f64, f64, f64)>,
}

/// Transform curves for plotting: `log10(value − bias)` when a bias is given
/// and every plotted value exceeds it, raw values otherwise. Returns the
/// y-axis label and the series.
pub fn plot_series(curves: &[ConvergenceCurve], bias: Option<f64>) -> (String, Vec<PlotSeries>) {
    let all_above = |b: f64| {
        curves
            .iter()
            .flat_map(|c| &c.points)
            .all(|p| p.q1 - b > 0.0 && p.median - b > 0.0 && p.q3 - b > 0.0)
    };
    let log_bias = bias.filter(|&b| all_above(b));
    let t = |v: f64| match log_bias {
        Some(b) => (v - b).log10(),
        None => v,
    };
    let label = if log_bias.is_some() {
        "log10(best - optimum)".to_string()
    } else {
        "best fitness".to_string()
    };
    let series = curves
        .iter()
        .map(|c| PlotSeries {
            algorithm: c.algorithm.clone(),
            points: c
                .points
                .iter()
                .map(|p| (p.evaluations, t(p.median), t(p.q1), t(p.q3)))
                .collect(),
        })
        .collect();
    (label, series)
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];
const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 * (1.0 + lo.abs()) {
        (lo - 1.0, hi + 1.0)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

/// Standalone SVG for `series`. Depends only on its arguments, so re-plotting
/// from the sidecar reproduces the same document.
pub fn render_svg(title: &str, y_label: &str, series: &[PlotSeries]) -> String {
    let (x0, x1) = range(series.iter().flat_map(|s| s.points.iter().map(|p| p.0 as f64)));
    let (y0, y1) = range(series.iter().flat_map(|s| s.points.iter().flat_map(|p| [p.1, p.2, p.3])));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + pw / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            svg,
            r##"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{:.2}" stroke="#e0e0e0"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{xv:.0}</text>"##,
            TOP + ph,
            TOP + ph + 18.0
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#e0e0e0"/><text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.3}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">evaluations</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(y_label)
    );

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let band: Vec<String> = s
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", sx(p.0 as f64), sy(p.3)))
            .chain(s.points.iter().rev().map(|p| format!("{:.2},{:.2}", sx(p.0 as f64), sy(p.2))))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polygon class="band" points="{}" fill="{color}" fill-opacity="0.15" stroke="none"/>"#,
            band.join(" ")
        );
        let line: Vec<String> = s
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", sx(p.0 as f64), sy(p.1)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="median" data-algorithm="{}" points="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#,
            escape(&s.algorithm),
            line.join(" ")
        );
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="3"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&s.algorithm)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn sidecar_csv(series: &[PlotSeries]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SIDECAR_HEADER)?;
    for s in series {
        for p in &s.points {
            w.write_record([
                s.algorithm.clone(),
                p.0.to_string(),
                p.1.to_string(),
                p.2.to_string(),
                p.3.to_string(),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_sidecar(text: &str) -> Result<Vec<PlotSeries>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut out: Vec<PlotSeries> = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let num = |i: usize| {
            rec[i]
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad sidecar value {:?}", &rec[i])))
        };
        let e: u64 = rec[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad sidecar evaluations {:?}", &rec[1])))?;
        let point = (e, num(2)?, num(3)?, num(4)?);
        match out.last_mut() {
            Some(s) if s.algorithm == rec[0] => s.points.push(point),
            _ => out.push(PlotSeries {
                algorithm: rec[0].to_string(),
                points: vec![point],
            }),
        }
    }
    Ok(out)
}

pub fn plot_title(function: &str, dimension: usize) -> String {
    format!("{function}, {dimension}-D")
}

/// Write `<function>_d<dimension>.svg` and its `.csv` sidecar into `dir`.
/// Returns `None` (with a warning) when there is nothing to plot.
pub fn emit_convergence_plot(
    curves: &[ConvergenceCurve],
    function: &str,
    dimension: usize,
    bias: Option<f64>,
    dir: &Path,
) -> Result<Option<(PathBuf, PathBuf)>> {
    let curves: Vec<ConvergenceCurve> = curves.iter().filter(|c| !c.points.is_empty()).cloned().collect();
    if curves.is_empty() {
        warn!("no history for {function} at dimension {dimension}; plot skipped");
        return Ok(None);
    }
    let (label, series) = plot_series(&curves, bias);
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let stem = format!("{}_d{dimension}", file_label(function));
    let svg_path = dir.join(format!("{stem}.svg"));
    let csv_path = dir.join(format!("{stem}.csv"));
    fs::write(&svg_path, render_svg(&plot_title(function, dimension), &label, &series))
        .map_err(|e| Error::io(&svg_path, e))?;
    fs::write(&csv_path, sidecar_csv(&series)?).map_err(|e| Error::io(&csv_path, e))?;
    Ok(Some((svg_path, csv_path)))
}

/// Aggregate the stored histories of one cell of a results directory.
/// Algorithms keep their `results.csv` order.
pub fn load_curves(results: &Path, function: &str, dimension: usize) -> Result<Vec<ConvergenceCurve>> {
    let dir = results
        .join(HISTORY_DIR)
        .join(format!("d{dimension}"))
        .join(function);
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
        .map_err(|e| Error::io(&dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv") && !p.to_string_lossy().ends_with(".estimates.csv"))
        .collect();
    paths.sort();
    let mut by_alg: BTreeMap<String, Vec<Vec<HistoryPoint>>> = BTreeMap::new();
    for p in paths {
        let (label, points) = read_history(&p)?;
        if !label.is_empty() {
            by_alg.entry(label).or_default().push(points);
        }
    }
    let mut order: Vec<String> = Vec::new();
    if let Ok(rows) = read_results_dir(results) {
        for r in rows {
            if !order.contains(&r.algorithm) {
                order.push(r.algorithm);
            }
        }
    }
    for k in by_alg.keys() {
        if !order.contains(k) {
            order.push(k.clone());
        }
    }
    Ok(order
        .iter()
        .filter_map(|a| by_alg.get(a).and_then(|runs| aggregate(a, runs)))
        .collect())
}

/// Plot one cell of a results directory into `out`, using the stored suite
/// manifest for the optimum value.
pub fn plot_cell(results: &Path, function: &str, dimension: usize, out: &Path) -> Result<Option<(PathBuf, PathBuf)>> {
    let curves = load_curves(results, function, dimension)?;
    let manifest_path = results.join(MANIFEST_FILE);
    let bias = match fs::read_to_string(&manifest_path) {
        Ok(text) => SuiteManifest::from_toml(&text)?.bias(function, dimension),
        Err(_) => None,
    };
    emit_convergence_plot(&curves, function, dimension, bias, out)
}
