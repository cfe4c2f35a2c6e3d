use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use growth_lab::transforms::DEFAULT_QUAD_TOL;
use growth_lab::{
    azema_yor, build_scale_pair, linear_drawdown_scale, merton_wealth, running_max, CoefficientSchedule, DrawdownSpec,
    NoiseBlock, TimeGrid,
};

fn schedule() -> CoefficientSchedule {
    CoefficientSchedule::constant(&[0.06], &[0.2], 10.0).unwrap()
}

fn transforms(c: &mut Criterion) {
    let s = schedule();
    let pair = linear_drawdown_scale(0.3, 1.0).unwrap();
    let mut group = c.benchmark_group("azema_yor");
    for steps in [1_000usize, 10_000] {
        let grid = TimeGrid::uniform(10.0, steps).unwrap();
        let x = merton_wealth(&s, 0.5, &grid, &NoiseBlock::generate(1, 0, &grid, 1), 1.0).unwrap();
        let m = running_max(&x);
        group.bench_with_input(BenchmarkId::from_parameter(steps), &m, |b, m| {
            b.iter(|| azema_yor(pair.f(), black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn simulation(c: &mut Criterion) {
    let s = schedule();
    let grid = TimeGrid::uniform(10.0, 1_000).unwrap();
    c.bench_function("noise_1000_steps", |b| b.iter(|| NoiseBlock::generate(black_box(7), 3, &grid, 1)));
    let noise = NoiseBlock::generate(7, 3, &grid, 1);
    c.bench_function("merton_1000_steps", |b| {
        b.iter(|| merton_wealth(&s, 0.5, &grid, black_box(&noise), 1.0).unwrap())
    });
}

fn scale_pair(c: &mut Criterion) {
    c.bench_function("build_scale_pair_linear", |b| {
        b.iter(|| {
            let spec = DrawdownSpec::linear(black_box(0.3), 1.0).unwrap();
            build_scale_pair(spec, DEFAULT_QUAD_TOL).unwrap()
        })
    });
    let spec = DrawdownSpec::linear(0.3, 1.0).unwrap();
    let pair = build_scale_pair(spec, DEFAULT_QUAD_TOL).unwrap();
    c.bench_function("quadrature_inverse_eval", |b| b.iter(|| pair.f().eval(black_box(3.7))));
}

criterion_group!(benches, transforms, simulation, scale_pair);
criterion_main!(benches);
