//! Parallel kernels against the same kernels on a one-thread pool.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ridge_core::direction::enumerate_primitive;
use ridge_core::par;
use ridge_core::radon::radon_profile;
use ridge_core::shannon::hat_direct;
use ridge_core::spectrum::{analyze_grid, synthesize_grid, GridFunction};

fn grid(n: usize) -> GridFunction {
    GridFunction::from_real_fn(vec![n, n], |x| (3.0 * x[0]).sin() * (1.0 + x[1] * x[1]) + x[0] * x[1]).unwrap()
}

fn bench_kernel<R: Send>(c: &mut Criterion, name: &str, f: impl Fn() -> R + Sync) {
    let mut g = c.benchmark_group(name);
    g.sample_size(20);
    g.bench_function(BenchmarkId::new("parallel", ""), |b| b.iter(|| black_box(f())));
    g.bench_function(BenchmarkId::new("sequential", ""), |b| {
        // The one-thread pool is built once per measurement, outside the timed loop.
        par::single_threaded(|| b.iter(|| black_box(f())))
    });
    g.finish();
}

fn kernels(c: &mut Criterion) {
    let f = grid(256);
    let s = analyze_grid(&f, 16).unwrap();
    bench_kernel(c, "analyze_256x256_band16", || analyze_grid(&f, 16).unwrap());
    bench_kernel(c, "synthesize_band16_to_256x256", || synthesize_grid(&s, &[256, 256]).unwrap());
    bench_kernel(c, "radon_256x256_diag", || radon_profile(&f, &[1.0, 1.0], 31).unwrap());
    bench_kernel(c, "hat_direct_256x256", || hat_direct(&f, &[1.3, -2.1]));
    bench_kernel(c, "enumerate_primitive_m3_n12", || enumerate_primitive(3, 12).unwrap());
}

criterion_group!(benches, kernels);
criterion_main!(benches);
