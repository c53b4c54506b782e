use gsde::benchmarks::{make_problem, random_rotation, Base, BenchmarkSpec};
use gsde::estimation::{
    analytical_estimate, average_strategy, elite_weights, inject, line_distance_objective,
    select_elite, weighted_average_strategy, MovingVector, WeightMode,
};
use gsde::error::Error;
use gsde::problem::{Individual, Population};
use gsde::rng::RngStream;
use gsde::stats::{holm_adjust, kruskal_wallis, mann_whitney_u, rank_with_ties, SampleGroup};
use proptest::collection::vec;
use proptest::prelude::*;

fn population(dim: usize) -> impl Strategy<Value = Population> {
    (2usize..30).prop_flat_map(move |n| {
        vec((vec(-100.0f64..100.0, dim), -1e3f64..1e3), n).prop_map(|members| {
            Population::new(members.into_iter().map(|(g, f)| Individual::new(g, f)).collect())
        })
    })
}

proptest! {
    #[test]
    fn average_lies_in_elite_hull(pop in population(3), rate in 0.01f64..1.0) {
        let elite = select_elite(&pop, rate).unwrap();
        let c = average_strategy(&pop, rate).unwrap().coordinates;
        for (i, ci) in c.iter().enumerate() {
            let lo = elite.iter().map(|m| m.genome[i]).fold(f64::INFINITY, f64::min);
            let hi = elite.iter().map(|m| m.genome[i]).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(*ci >= lo - 1e-12 && *ci <= hi + 1e-12);
        }
    }

    #[test]
    fn consistent_weights_are_a_distribution(f in vec(-1e4f64..1e4, 1..40)) {
        let w = elite_weights(&f, WeightMode::Consistent).unwrap();
        prop_assert!(w.iter().all(|x| *x >= 0.0));
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn weighted_with_uniform_fitness_is_average(pop in population(4), rate in 0.01f64..1.0, f in 0.5f64..10.0) {
        let pop = Population::new(pop.members.into_iter().map(|m| Individual::new(m.genome, f)).collect());
        let avg = average_strategy(&pop, rate).unwrap().coordinates;
        for mode in [WeightMode::Consistent, WeightMode::Literal] {
            prop_assert_eq!(&weighted_average_strategy(&pop, rate, mode).unwrap().coordinates, &avg);
        }
    }

    #[test]
    fn analytical_recovers_common_point(
        dim in 2usize..8,
        q in vec(-50.0f64..50.0, 8),
        seed in any::<u64>(),
    ) {
        let q = &q[..dim];
        let mut rng = RngStream::new(seed);
        let vectors: Vec<MovingVector> = (0..dim + 3)
            .map(|_| {
                let d: Vec<f64> = (0..dim).map(|_| rng.gaussian()).collect();
                let t = rng.uniform(-30.0, -1.0);
                let parent: Vec<f64> = q.iter().zip(&d).map(|(qi, di)| qi + t * di).collect();
                let offspring: Vec<f64> = parent.iter().zip(&d).map(|(p, di)| p + 0.5 * di).collect();
                MovingVector::new(parent, offspring).unwrap()
            })
            .collect();
        match analytical_estimate(&vectors) {
            Ok(x) => {
                for (xi, qi) in x.coordinates.iter().zip(q) {
                    prop_assert!((xi - qi).abs() < 1e-8, "{:?} vs {:?}", x.coordinates, q);
                }
            }
            Err(Error::DegenerateDirections(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn analytical_is_a_local_minimum(
        dim in 2usize..6,
        n in 3usize..12,
        seed in any::<u64>(),
    ) {
        let mut rng = RngStream::new(seed);
        let vectors: Vec<MovingVector> = (0..n)
            .map(|_| {
                let p: Vec<f64> = (0..dim).map(|_| rng.uniform(-50.0, 50.0)).collect();
                let o: Vec<f64> = p.iter().map(|x| x + rng.uniform(-5.0, 5.0)).collect();
                MovingVector::new(p, o).unwrap()
            })
            .collect();
        if let Ok(x) = analytical_estimate(&vectors) {
            let base = line_distance_objective(&vectors, &x.coordinates);
            for i in 0..dim {
                for delta in [1e-4, -1e-4] {
                    let mut y = x.coordinates.clone();
                    y[i] += delta;
                    prop_assert!(line_distance_objective(&vectors, &y) >= base - 1e-12 * (1.0 + base));
                }
            }
        }
    }

    #[test]
    fn inject_never_worsens(
        pop in population(2),
        center_f in -1e3f64..1e3,
        sample_f in vec(-1e3f64..1e3, 1..10),
    ) {
        let k = sample_f.len();
        prop_assume!(k < pop.len());
        let mut after = pop.clone();
        let samples = sample_f.iter().map(|&f| Individual::new(vec![0.0, 0.0], f)).collect();
        inject(&mut after, Individual::new(vec![1.0, 1.0], center_f), samples, k).unwrap();
        prop_assert_eq!(after.len(), pop.len());
        let mut old: Vec<f64> = pop.fitness().collect();
        let mut new: Vec<f64> = after.fitness().collect();
        old.sort_by(f64::total_cmp);
        new.sort_by(f64::total_cmp);
        prop_assert!(new.iter().zip(&old).all(|(n, o)| n <= o));
        let untouched = pop.members.iter().zip(&after.members).filter(|(a, b)| a == b).count();
        prop_assert!(untouched >= pop.len() - k);
    }

    #[test]
    fn rank_sum_is_triangular(v in vec(0u8..20, 1..80)) {
        let v: Vec<f64> = v.into_iter().map(f64::from).collect();
        let n = v.len() as f64;
        prop_assert_eq!(rank_with_ties(&v).iter().sum::<f64>(), n * (n + 1.0) / 2.0);
    }

    #[test]
    fn kruskal_invariant_under_monotone_transform(groups in vec(vec(0u8..40, 1..15), 2..5)) {
        let make = |f: &dyn Fn(f64) -> f64| -> Vec<SampleGroup> {
            groups
                .iter()
                .enumerate()
                .map(|(i, g)| SampleGroup::new(format!("{i}"), g.iter().map(|&x| f(f64::from(x))).collect()).unwrap())
                .collect()
        };
        let a = kruskal_wallis(&make(&|x| x)).unwrap();
        let b = kruskal_wallis(&make(&|x| (x / 7.0).exp() + 3.0 * x - 1e3)).unwrap();
        prop_assert!((a.statistic - b.statistic).abs() <= 1e-12);
    }

    #[test]
    fn holm_is_equivariant_and_conservative(p in vec(0.0f64..=1.0, 1..12), rot in 0usize..12) {
        let adj = holm_adjust(&p);
        prop_assert!(adj.iter().zip(&p).all(|(a, r)| a >= r && *a <= 1.0));
        let r = rot % p.len();
        let mut q = p.clone();
        q.rotate_left(r);
        let mut expected = adj.clone();
        expected.rotate_left(r);
        prop_assert_eq!(holm_adjust(&q), expected);
    }

    #[test]
    fn mann_whitney_statistics_complement(a in vec(0u8..30, 1..20), b in vec(0u8..30, 1..20)) {
        let ga = SampleGroup::new("a", a.iter().map(|&x| f64::from(x)).collect()).unwrap();
        let gb = SampleGroup::new("b", b.iter().map(|&x| f64::from(x)).collect()).unwrap();
        let u = mann_whitney_u(&ga, &gb).unwrap();
        let u2 = mann_whitney_u(&gb, &ga).unwrap();
        prop_assert_eq!(u.statistic + u2.statistic, (a.len() * b.len()) as f64);
        prop_assert!((u.p_value - u2.p_value).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&u.p_value));
    }
}

#[test]
fn rotated_sphere_matches_plain_sphere() {
    let mut rng = RngStream::new(3);
    for dim in [2, 5, 10, 30] {
        let rot = random_rotation(dim, &mut rng);
        let plain = make_problem(&BenchmarkSpec::new("s", Base::Sphere, dim, 0.0)).unwrap();
        let rotated = make_problem(&BenchmarkSpec::new("s", Base::Sphere, dim, 0.0).with_rotation(rot)).unwrap();
        for _ in 0..200 {
            let x = plain.random_genome(&mut rng);
            let (a, b) = (plain.value(&x), rotated.value(&x));
            assert!((a - b).abs() <= 1e-9 * (1.0 + a), "{a} vs {b}");
        }
    }
}

#[test]
fn grid_search_finds_shift() {
    let shift = vec![37.3, -61.9];
    for (base, scale) in [(Base::Sphere, 1.0), (Base::Rastrigin, 5.12 / 100.0)] {
        let p = make_problem(
            &BenchmarkSpec::new("g", base, 2, 0.0)
                .with_shift(shift.clone())
                .with_scale(scale),
        )
        .unwrap();
        let step = 0.5;
        let mut best = (f64::INFINITY, [0.0, 0.0]);
        for i in 0..=400 {
            for j in 0..=400 {
                let x = [-100.0 + step * i as f64, -100.0 + step * j as f64];
                let v = p.value(&x);
                if v < best.0 {
                    best = (v, x);
                }
            }
        }
        for (b, s) in best.1.iter().zip(&shift) {
            assert!((b - s).abs() <= step, "{base}: {:?} vs {shift:?}", best.1);
        }
    }
}
