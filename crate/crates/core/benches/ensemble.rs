//! Sequential vs parallel ensemble throughput.
//!
//! `gap_batch/seq` runs the per-instance gap pipeline on one worker;
//! `gap_batch/par` uses the full rayon pool (identical outputs — see the
//! determinism tests). Build with `--no-default-features` to bench the
//! compiled-sequential fallback under the same harness.

use criterion::{criterion_group, criterion_main, Criterion};
use q2sat_core::experiments::{run_scaling, ScalingConfig};
use q2sat_core::parallel::Parallelism;

fn gap_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("gap_batch");
    group.sample_size(10);

    let base = ScalingConfig::new(vec![9], 0.1, Some(24), 12345);

    group.bench_function("seq", |b| {
        let mut cfg = base.clone();
        cfg.workers = Parallelism::Fixed(1);
        b.iter(|| run_scaling(&cfg).unwrap())
    });
    group.bench_function("par", |b| {
        let mut cfg = base.clone();
        cfg.workers = Parallelism::Auto;
        b.iter(|| run_scaling(&cfg).unwrap())
    });
    group.finish();
}

fn matvec(c: &mut Criterion) {
    use q2sat_core::hamiltonian::build_h0;
    use q2sat_core::instance::{generate_instance, ClauseParams};
    use q2sat_core::C64;

    let inst = generate_instance(12, 0.1, ClauseParams::symmetric(), 7).unwrap();
    let h = build_h0(&inst);
    let psi: Vec<C64> = (0..h.dim)
        .map(|k| C64::new((k as f64 * 0.01).sin(), (k as f64 * 0.02).cos()))
        .collect();
    let mut out = vec![C64::new(0.0, 0.0); h.dim];
    c.bench_function("h0_apply_4096", |b| {
        b.iter(|| h.apply_into(&psi, &mut out))
    });
}

criterion_group!(benches, gap_batch, matvec);
criterion_main!(benches);
