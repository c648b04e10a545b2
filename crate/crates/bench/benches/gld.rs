use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gld::baselines::{ars_run, ArsConfig};
use gld::geometry::{intersection_fraction_mc, regularized_incomplete_beta, BallPair};
use gld::sampling::{build_ladder_fast, build_ladder_search, sample_uniform_ball};
use gld::{gld_fast_run, gld_step, GldFastConfig, ObjectiveOracle, SamplerKind, SamplerSpec, SeededRng};
use gld_bench::quadratic_fixture;

fn bench_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("gld_step");
    for n in [10usize, 100, 1000] {
        let (f, x) = quadratic_fixture(n, 8.0);
        let ladder = build_ladder_fast(8f64.sqrt(), 8.0).unwrap();
        let spec = SamplerSpec::new(SamplerKind::UniformBall, n);
        let mut rng = SeededRng::new(1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let mut oracle = ObjectiveOracle::new(&f);
            let fx = oracle.evaluate(&x).unwrap();
            b.iter(|| gld_step(&mut oracle, black_box(&x), fx, &ladder, &spec, n, &mut rng).unwrap())
        });
    }
    group.finish();
}

fn bench_runs(c: &mut Criterion) {
    let n = 50;
    let (f, x) = quadratic_fixture(n, 8.0);
    c.bench_function("gld_fast_1000_iters_n50", |b| {
        b.iter(|| {
            let mut oracle = ObjectiveOracle::new(&f);
            let cfg = GldFastConfig::new(1000, 8f64.sqrt(), 8.0);
            gld_fast_run(&mut oracle, &cfg, &x, &mut SeededRng::new(3)).unwrap()
        })
    });
    c.bench_function("ars_5000_iters_n50", |b| {
        b.iter(|| {
            let mut oracle = ObjectiveOracle::new(&f);
            let cfg = ArsConfig::new(1.0, 8.0, 8f64.sqrt(), n, 5000);
            ars_run(&mut oracle, &cfg, &x, &mut SeededRng::new(3)).unwrap()
        })
    });
}

fn bench_primitives(c: &mut Criterion) {
    c.bench_function("incomplete_beta_a50", |b| {
        b.iter(|| regularized_incomplete_beta(black_box(0.93), 50.5, 0.5).unwrap())
    });
    c.bench_function("ladder_search_build", |b| {
        b.iter(|| build_ladder_search(black_box(10.0), black_box(1e-6)).unwrap())
    });
    let mut rng = SeededRng::new(2);
    let center = vec![0.0; 100];
    c.bench_function("uniform_ball_n100", |b| {
        b.iter(|| sample_uniform_ball(&mut rng, &center, 1.0).unwrap())
    });
    let pair = BallPair::new(0.1, 0.99, 1.0, 50).unwrap();
    c.bench_function("intersection_mc_n50_1e4", |b| {
        b.iter(|| intersection_fraction_mc(&pair, 10_000, &mut SeededRng::new(4)).unwrap())
    });
}

criterion_group!(benches, bench_step, bench_runs, bench_primitives);
criterion_main!(benches);
