use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use eit_prism::experiment::{detuning_sweep_with, run_point};
use eit_prism::parallel::Execution;
use eit_prism::wave::{make_gaussian_probe, propagate_free};
use eit_prism::{default_scene, parse_config, Detuning};

fn small_scene() -> eit_prism::Scene {
    parse_config("grid_points: 1024\ngrid_span_mm: 16\nn_slices: 100\nray_steps: 2000\n")
        .unwrap()
        .scene()
        .unwrap()
}

fn bench_sweep(c: &mut Criterion) {
    let scene = small_scene();
    let mut group = c.benchmark_group("detuning_sweep");
    group.sample_size(10);
    for points in [8usize, 32] {
        for (name, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(name, points), &points, |b, &n| {
                b.iter(|| {
                    detuning_sweep_with(
                        &scene,
                        Detuning::from_hz(-200e3),
                        Detuning::from_hz(200e3),
                        n,
                        exec,
                    )
                    .unwrap()
                })
            });
        }
    }
    group.finish();
}

fn bench_point(c: &mut Criterion) {
    let scene = default_scene();
    let mut group = c.benchmark_group("single_point");
    group.sample_size(10);
    group.bench_function("run_point_default_grid", |b| {
        b.iter(|| run_point(&scene, black_box(Detuning::from_hz(20e3))).unwrap())
    });
    let probe = make_gaussian_probe(&scene.probe, &scene.grid, scene.medium.lambda_ab).unwrap();
    group.bench_function("propagate_free_4096", |b| {
        b.iter(|| propagate_free(black_box(&probe), 230.0).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_sweep, bench_point);
criterion_main!(benches);
