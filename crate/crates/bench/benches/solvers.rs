use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use picard_bench::standard;
use picard_core::picard::resolve_interval;
use picard_core::{rk4_solve, solve_ivp, OracleConfig, PicardConfig};

fn picard_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_ivp");
    group.sample_size(20);
    for w in standard() {
        for n in [128usize, 512] {
            let cfg = PicardConfig {
                grid_points_per_half: n,
                ..PicardConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(w.entry.name.clone(), n), &cfg, |b, cfg| {
                b.iter(|| solve_ivp(&w.entry.field, &w.tube, cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn oracle_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("rk4_solve");
    group.sample_size(20);
    let cfg = OracleConfig::new(1e-3).unwrap();
    for w in standard() {
        let (_, l, _) = resolve_interval(&w.entry.field, &w.tube, &PicardConfig::default()).unwrap();
        group.bench_function(w.entry.name.clone(), |b| {
            b.iter(|| rk4_solve(&w.entry.field, &w.tube.y0, &w.tube.eta, 0.0, l, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, picard_solve, oracle_solve);
criterion_main!(benches);
