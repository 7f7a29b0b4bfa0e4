use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use resp_dde::scan::{
    bifurcation_diagram, max_real_part_table, stability_surface, Axis, BifurcationConfig,
};
use resp_dde::spectrum::{characteristic_roots_with, coefficients_for, RootSearch};
use resp_dde::Execution;

const MODES: [(&str, Execution); 2] = [
    ("parallel", Execution::Parallel),
    ("sequential", Execution::Sequential),
];

fn bifurcation(c: &mut Criterion) {
    let mut group = c.benchmark_group("bifurcation_diagram");
    group.sample_size(10);
    for (name, exec) in MODES {
        let mut cfg = BifurcationConfig::new(0.5, 0.8, 28.0, 34.0, 0.5, 2000.0);
        cfg.execution = exec;
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| bifurcation_diagram(cfg).unwrap())
        });
    }
    group.finish();
}

fn table(c: &mut Criterion) {
    let mut group = c.benchmark_group("max_real_part_table");
    group.sample_size(10);
    let taus: Vec<f64> = (25..=35).map(f64::from).collect();
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| max_real_part_table(&[0.3, 0.6], &[0.6, 0.9], &taus, exec).unwrap())
        });
    }
    group.finish();
}

fn surface(c: &mut Criterion) {
    let mut group = c.benchmark_group("stability_surface");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                stability_surface(Axis::new(0.1, 1.0, 40), Axis::new(0.1, 1.0, 40), exec).unwrap()
            })
        });
    }
    group.finish();
}

fn root_seeds(c: &mut Criterion) {
    let mut group = c.benchmark_group("root_search");
    let (_, k) = coefficients_for(0.5, 0.8).unwrap();
    for (name, exec) in MODES {
        let cfg = RootSearch {
            execution: exec,
            ..RootSearch::default()
        };
        group.bench_function(name, |b| {
            b.iter(|| characteristic_roots_with(&k, 31.0, 8, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bifurcation, table, surface, root_seeds);
criterion_main!(benches);
