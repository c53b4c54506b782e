//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gsde::accelerated::{run_accelerated_de, AcceleratedConfig, Variant};
use gsde::benchmarks::{suite_entries, FUNCTIONS};
use gsde::estimation::{
    analytical_estimate, average_strategy, gaussian_sample, line_distance_objective, weighted_average_strategy,
    MovingVector, WeightMode,
};
use gsde::harness::report::compare_cell;
use gsde::harness::{build_report, read_results_dir, run_cells, run_experiment, ExperimentConfig, RunOptions};
use gsde::optimizers::run_de;
use gsde::problem::{Budget, Individual, Population, Problem};
use gsde::rng::RngStream;
use gsde::stats::{holm_adjust, kruskal_wallis, mann_whitney_u, SampleGroup, Symbol};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// P1 and P2 against plain DE on f1–f5 at 10-D, 30 paired trials.
fn acceleration() -> Outcome {
    let config = ExperimentConfig::from_toml_str(
        r#"
        trials = 30
        dimensions = [10]
        functions = ["f1", "f2", "f3", "f4", "f5"]
        [[algorithms]]
        name = "DE"
        population_size = 500
        [[algorithms]]
        name = "P1"
        population_size = 500
        [[algorithms]]
        name = "P2"
        population_size = 500
        "#,
    )
    .map_err(|e| e.to_string())?;
    if config.budget(10) != 10_000 {
        return Err(format!("budget is {}", config.budget(10)));
    }
    let results = run_cells(&config, &RunOptions::default()).map_err(|e| e.to_string())?;
    if !results.failures.is_empty() {
        return Err(format!("{} runs failed", results.failures.len()));
    }
    let mut detail = Vec::new();
    let mut ok = true;
    for variant in ["P1", "P2"] {
        let mut not_worse = 0;
        let mut significant = 0;
        for f in &config.functions {
            let id = FUNCTIONS[*f].id;
            let groups: Vec<SampleGroup> = ["DE", "P1", "P2"]
                .iter()
                .map(|alg| {
                    let v = results
                        .runs
                        .iter()
                        .filter(|r| r.function == id && r.algorithm == *alg)
                        .map(|r| r.record.best_fitness)
                        .collect();
                    SampleGroup::new(*alg, v).unwrap()
                })
                .collect();
            let cell = compare_cell(id.to_string(), 10, &groups).map_err(|e| e.to_string())?;
            let de = cell.summary("DE").unwrap().mean;
            let ours = cell.summary(variant).unwrap().mean;
            if ours <= de {
                not_worse += 1;
            }
            let pair = cell.pair(variant, "DE").unwrap();
            if pair.p_adjusted < 0.05 && pair.better.as_deref() == Some(variant) {
                significant += 1;
            }
        }
        ok &= not_worse >= 4 && significant >= 2;
        detail.push(format!("{variant}: mean <= DE on {not_worse}/5, significant on {significant}/5"));
    }
    check(ok, detail.join("; "))
}

/// k = 0 reproduces plain DE bit for bit.
fn reduction_identity() -> Outcome {
    let entries = suite_entries(5, 99);
    let mut checked = 0;
    for idx in [0usize, 7, 10] {
        let problem = entries[idx].problem().map_err(|e| e.to_string())?;
        for seed in [1u64, 2, 3] {
            for variant in [Variant::P1, Variant::P2] {
                let mut c = AcceleratedConfig::for_dimension(variant, 5);
                c.k = Some(0);
                let a = run_accelerated_de(&problem, &c, Budget::new(5000), &mut RngStream::new(seed))
                    .map_err(|e| e.to_string())?;
                let b = run_de(&problem, &c.de, Budget::new(5000), &mut RngStream::new(seed)).map_err(|e| e.to_string())?;
                if !a.bitwise_eq(&b) {
                    return Err(format!("{variant} differs from DE on {} seed {seed}", problem.name()));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} runs bitwise equal (3 functions x 3 seeds x P1/P2)"))
}

/// Lines through a common point, and residual optimality on noisy lines.
fn analytical_estimator() -> Outcome {
    let mut rng = RngStream::new(2024);
    let mut worst = 0.0f64;
    for instance in 0..100 {
        let dim = [2, 5, 10][instance % 3];
        let q: Vec<f64> = (0..dim).map(|_| rng.uniform(-50.0, 50.0)).collect();
        let vectors: Vec<MovingVector> = (0..dim + 3)
            .map(|_| {
                let d: Vec<f64> = (0..dim).map(|_| rng.gaussian()).collect();
                let t = rng.uniform(-20.0, -1.0);
                let p: Vec<f64> = q.iter().zip(&d).map(|(qi, di)| qi + t * di).collect();
                let o: Vec<f64> = p.iter().zip(&d).map(|(pi, di)| pi + 0.3 * di).collect();
                MovingVector::new(p, o).unwrap()
            })
            .collect();
        let x = analytical_estimate(&vectors).map_err(|e| format!("instance {instance}: {e}"))?;
        let err = x.coordinates.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(err);
    }
    if worst >= 1e-8 {
        return Err(format!("max |x - q| = {worst:e}"));
    }
    for instance in 0..100 {
        let dim = [2, 5, 10][instance % 3];
        let vectors: Vec<MovingVector> = (0..dim + 5)
            .map(|_| {
                let p: Vec<f64> = (0..dim).map(|_| rng.uniform(-50.0, 50.0)).collect();
                let o: Vec<f64> = p.iter().map(|v| v + rng.uniform(-5.0, 5.0)).collect();
                MovingVector::new(p, o).unwrap()
            })
            .collect();
        let x = analytical_estimate(&vectors).map_err(|e| format!("noisy instance {instance}: {e}"))?;
        let base = line_distance_objective(&vectors, &x.coordinates);
        for i in 0..dim {
            for delta in [1e-4, -1e-4] {
                let mut y = x.coordinates.clone();
                y[i] += delta;
                if line_distance_objective(&vectors, &y) < base {
                    return Err(format!("noisy instance {instance}: perturbing coordinate {i} lowers the objective"));
                }
            }
        }
    }
    Ok(format!("max |x - q| = {worst:.2e} over 100 instances; 100 noisy instances locally optimal"))
}

/// Elite averaging recomputed with explicit loops.
fn brute_force_estimate(genomes: &[Vec<f64>], fitness: &[f64], rate: f64, weighted: Option<WeightMode>) -> Vec<f64> {
    let n = genomes.len();
    let mut s = (rate * n as f64).round() as usize;
    if s < 1 {
        s = 1;
    }
    if s > n {
        s = n;
    }
    let mut chosen: Vec<usize> = Vec::new();
    while chosen.len() < s {
        let mut best: Option<usize> = None;
        for i in 0..n {
            if chosen.contains(&i) {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(b) if fitness[i] < fitness[b] => best = Some(i),
                _ => {}
            }
        }
        chosen.push(best.unwrap());
    }
    let dim = genomes[0].len();
    let mut w = vec![1.0 / s as f64; s];
    let all_equal = chosen.iter().all(|&j| fitness[j] == fitness[chosen[0]]);
    if let (Some(mode), false) = (weighted, all_equal) {
        let mut raw = vec![0.0; s];
        let mut worst = f64::NEG_INFINITY;
        for &j in &chosen {
            if fitness[j] > worst {
                worst = fitness[j];
            }
        }
        for (k, &j) in chosen.iter().enumerate() {
            raw[k] = match mode {
                WeightMode::Literal => fitness[j],
                WeightMode::Consistent => worst - fitness[j] + 1e-12 * (1.0 + worst.abs()),
            };
        }
        let mut total = 0.0;
        for r in &raw {
            total += r;
        }
        for k in 0..s {
            w[k] = raw[k] / total;
        }
    }
    let mut c = vec![0.0; dim];
    for i in 0..dim {
        for (k, &j) in chosen.iter().enumerate() {
            c[i] += if weighted.is_some() && !all_equal { w[k] * genomes[j][i] } else { genomes[j][i] };
        }
        if weighted.is_none() || all_equal {
            c[i] /= s as f64;
        }
    }
    c
}

fn estimator_oracle() -> Outcome {
    let mut rng = RngStream::new(77);
    let mut worst = 0.0f64;
    for trial in 0..1000 {
        let n = 2 + rng.index(60);
        let dim = 1 + rng.index(10);
        let rate = [0.05, 0.1, 0.3, 1.0][trial % 4];
        let positive = trial % 2 == 0;
        let genomes: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.uniform(-100.0, 100.0)).collect()).collect();
        let fitness: Vec<f64> = (0..n)
            .map(|_| {
                let v = (rng.uniform(0.0, 50.0) * 4.0).round() / 4.0;
                if positive {
                    v + 0.25
                } else {
                    v - 1400.0
                }
            })
            .collect();
        let pop = Population::new(genomes.iter().zip(&fitness).map(|(g, f)| Individual::new(g.clone(), *f)).collect());
        let mut cases = vec![
            (average_strategy(&pop, rate), brute_force_estimate(&genomes, &fitness, rate, None)),
            (
                weighted_average_strategy(&pop, rate, WeightMode::Consistent),
                brute_force_estimate(&genomes, &fitness, rate, Some(WeightMode::Consistent)),
            ),
        ];
        if positive {
            cases.push((
                weighted_average_strategy(&pop, rate, WeightMode::Literal),
                brute_force_estimate(&genomes, &fitness, rate, Some(WeightMode::Literal)),
            ));
        }
        for (got, want) in cases {
            let got = got.map_err(|e| e.to_string())?.coordinates;
            for (a, b) in got.iter().zip(&want) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    check(worst <= 1e-12, format!("max deviation {worst:.2e} over 1000 populations"))
}

fn statistics_golden() -> Outcome {
    let mut worst_stat = 0.0f64;
    let mut worst_p = 0.0f64;
    for c in common::stats_cases() {
        let groups: Vec<SampleGroup> = c
            .groups
            .iter()
            .enumerate()
            .map(|(i, v)| SampleGroup::new(format!("{i}"), v.clone()).unwrap())
            .collect();
        let kw = kruskal_wallis(&groups).map_err(|e| e.to_string())?;
        let mw = mann_whitney_u(&groups[0], &groups[1]).map_err(|e| e.to_string())?;
        worst_stat = worst_stat.max((kw.statistic - c.kruskal_h).abs()).max((mw.statistic - c.mwu_u).abs());
        worst_p = worst_p.max((kw.p_value - c.kruskal_p).abs()).max((mw.p_value - c.mwu_p).abs());
    }
    let holm = holm_adjust(&[0.01, 0.04, 0.03]);
    let holm_ok = holm == [3.0 * 0.01, 2.0 * 0.03, 2.0 * 0.03] && (holm[0] - 0.03).abs() < 1e-15 && (holm[1] - 0.06).abs() < 1e-15;
    check(
        worst_stat < 1e-9 && worst_p < 1e-6 && holm_ok,
        format!("max statistic error {worst_stat:.1e}, max p error {worst_p:.1e}, holm {holm:?}"),
    )
}

fn gaussian_moments() -> Outcome {
    let problem = Problem::with_uniform_bounds("box", 3, -100.0, 100.0, std::sync::Arc::new(|_: &[f64]| 0.0), 0.0)
        .map_err(|e| e.to_string())?;
    let center = [12.5, -30.0, 0.0];
    let k = 100_000;
    let sigma = 5.0;
    let samples = gaussian_sample(&center, sigma, k, &problem, &mut RngStream::new(5));
    let mut detail = Vec::new();
    let mut ok = samples.len() == k;
    for (i, c) in center.iter().enumerate() {
        let m = samples.iter().map(|s| s[i]).sum::<f64>() / k as f64;
        let sd = (samples.iter().map(|s| (s[i] - m).powi(2)).sum::<f64>() / (k - 1) as f64).sqrt();
        ok &= (m - c).abs() <= 3.0 * sigma / (k as f64).sqrt() && (sd - sigma).abs() <= 0.02 * sigma;
        detail.push(format!("dim {i}: mean offset {:.4}, std {:.4}", m - c, sd));
    }
    check(ok, detail.join("; "))
}

fn benchmark_sanity() -> Outcome {
    let mut rng = RngStream::new(31);
    let mut exact = 0;
    let mut worst_orth = 0.0f64;
    for dim in [2, 10, 30] {
        for entry in suite_entries(dim, 20_240_611) {
            let p = entry.problem().map_err(|e| e.to_string())?;
            let shift = entry.spec.shift.clone().unwrap();
            if entry.info.base.exact_at_minimizer() {
                let v = p.value(&shift);
                if v != p.bias() {
                    return Err(format!("{} at {dim}-D: f(shift) = {v:?}, optimum {}", p.name(), p.bias()));
                }
                exact += 1;
            }
            for _ in 0..10_000 {
                let x = p.random_genome(&mut rng);
                let v = p.value(&x);
                if v < p.bias() - 1e-9 {
                    return Err(format!("{} at {dim}-D: {v} below optimum {}", p.name(), p.bias()));
                }
            }
            if let Some(r) = &entry.spec.rotation {
                worst_orth = worst_orth.max(r.orthogonality_error());
            }
        }
    }
    check(
        worst_orth < 1e-9,
        format!("{exact} shift points exact, 600000 probes above optimum, max |RᵀR - I| = {worst_orth:.1e}"),
    )
}

fn two_dimensional_config() -> ExperimentConfig {
    ExperimentConfig::from_toml_str("dimensions = [2]\ntrials = 30\n").expect("valid configuration")
}

fn determinism_and_budget() -> Outcome {
    let mut config = two_dimensional_config();
    config.trials = 5;
    config.dimensions = vec![2, 5];
    let a = run_cells(&config, &RunOptions::default()).map_err(|e| e.to_string())?;
    let b = run_cells(&config, &RunOptions { threads: Some(3), ..RunOptions::default() }).map_err(|e| e.to_string())?;
    if !a.failures.is_empty() || a.runs.len() != b.runs.len() {
        return Err(format!("{} failures", a.failures.len()));
    }
    let mut bad = 0;
    for (x, y) in a.runs.iter().zip(&b.runs) {
        let budget = 1000 * x.key.dimension as u64;
        if x.record.evaluations_used > budget || !x.record.is_monotone() || !x.record.bitwise_eq(&y.record) || x.key != y.key {
            bad += 1;
        }
    }
    check(bad == 0, format!("{} runs, {bad} violating budget, monotonicity or replay", a.runs.len()))
}

fn end_to_end(limit: Duration) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("results");
    let config = two_dimensional_config();
    let start = Instant::now();
    let results = run_experiment(&config, &out, &RunOptions::default()).map_err(|e| e.to_string())?;
    let report = build_report(&read_results_dir(&out).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let expected_runs = 20 * 8 * 30;
    let n = report.algorithms.len();
    let well_formed = results.runs.len() == expected_runs
        && results.failures.is_empty()
        && report.cells.len() == 20
        && report.cells.iter().all(|c| c.pairs.len() == n * (n - 1) / 2 && c.kruskal.is_some())
        && report
            .cells
            .iter()
            .flat_map(|c| &c.pairs)
            .all(|p| Symbol::ALL.contains(&p.symbol) && ["≫", ">", "≈"].contains(&p.symbol.as_str()));
    check(
        well_formed && elapsed < limit,
        format!("{} runs, {} cells, {:.1}s", results.runs.len(), report.cells.len(), elapsed.as_secs_f64()),
    )
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("acceleration of DE on f1-f5 at 10-D", Box::new(acceleration)),
        ("k = 0 reduction identity", Box::new(reduction_identity)),
        ("analytical estimator", Box::new(analytical_estimator)),
        ("estimator oracle equivalence", Box::new(estimator_oracle)),
        ("statistics golden values", Box::new(statistics_golden)),
        ("Gaussian sampler moments", Box::new(gaussian_moments)),
        ("benchmark sanity", Box::new(benchmark_sanity)),
        ("determinism and budget", Box::new(determinism_and_budget)),
        ("end-to-end 2-D experiment", Box::new(|| end_to_end(Duration::from_secs(600)))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name} ({detail}) [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
