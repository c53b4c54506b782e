#![allow(dead_code)]

use std::path::PathBuf;

use serde::Deserialize;

#[derive(Debug, Deserialize)]
pub struct StatsCase {
    pub groups: Vec<Vec<f64>>,
    pub kruskal_h: f64,
    pub kruskal_p: f64,
    pub mwu_u: f64,
    pub mwu_p: f64,
}

#[derive(Debug, Deserialize)]
pub struct BenchCase {
    pub base: String,
    pub x: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Deserialize)]
struct Cases<T> {
    cases: Vec<T>,
}

fn oracle_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("oracle").join(name)
}

fn load<T: for<'de> Deserialize<'de>>(name: &str) -> Vec<T> {
    let text = std::fs::read_to_string(oracle_path(name)).expect("oracle file present");
    serde_json::from_str::<Cases<T>>(&text).expect("oracle file parses").cases
}

pub fn stats_cases() -> Vec<StatsCase> {
    load("stats_golden.json")
}

pub fn bench_cases() -> Vec<BenchCase> {
    load("bench_golden.json")
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}
