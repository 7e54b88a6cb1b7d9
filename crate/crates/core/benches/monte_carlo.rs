//! Parallel vs sequential Monte Carlo throughput.
//!
//! The chunked drivers produce bit-identical results either way; these
//! benches measure what the rayon pool buys on this machine. Build with
//! `--no-default-features` to benchmark the pure sequential binary instead.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use paygfund::credit_variant_b::CreditSchedule;
use paygfund::fund_model::{simulate_path_with_max, FundParams};
use paygfund::mc;
use paygfund::numerics::RngStream;

fn variant_b_kernel(schedule: &CreditSchedule, params: &FundParams, range: std::ops::Range<usize>) -> (u64, f64, f64) {
    let c_total = schedule.total_credit();
    let mut shortfalls = 0u64;
    let mut short_mass = 0.0;
    let mut surplus_mass = 0.0;
    for i in range {
        let mut src = RngStream::new(42, i as u64).normals();
        let mut fund = 0.0f64;
        for deficit in schedule.deficits() {
            let z = src.sample_standard_normal();
            fund = (fund + deficit) * (params.mu() + params.sigma() * z).exp();
        }
        let diff = fund - c_total;
        if diff <= 0.0 {
            shortfalls += 1;
        }
        short_mass += (-diff).max(0.0);
        surplus_mass += diff.max(0.0);
    }
    (shortfalls, short_mass, surplus_mass)
}

fn bench_variant_b(c: &mut Criterion) {
    let params = FundParams::new(0.04, 0.2).unwrap();
    let schedule = CreditSchedule::constant(1.0, 1.1, 10).unwrap();
    let mut group = c.benchmark_group("variant_b_mc");
    for &n in &[10_000usize, 100_000] {
        group.bench_with_input(BenchmarkId::new("seq", n), &n, |bench, &n| {
            bench.iter(|| mc::map_chunks_seq(n, |r| variant_b_kernel(&schedule, &params, r)));
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("par", n), &n, |bench, &n| {
            bench.iter(|| mc::map_chunks_par(n, |r| variant_b_kernel(&schedule, &params, r)));
        });
    }
    group.finish();
}

fn path_kernel(params: &FundParams, range: std::ops::Range<usize>) -> f64 {
    let mut acc = 0.0;
    for i in range {
        let path = simulate_path_with_max(params, 1.0, 1000, RngStream::new(7, i as u64)).unwrap();
        acc += path.running_max;
    }
    acc
}

fn bench_paths(c: &mut Criterion) {
    let params = FundParams::new(0.04, 0.2).unwrap();
    let mut group = c.benchmark_group("path_running_max");
    group.sample_size(10);
    for &n in &[10_000usize] {
        group.bench_with_input(BenchmarkId::new("seq", n), &n, |bench, &n| {
            bench.iter(|| mc::map_chunks_seq(n, |r| path_kernel(&params, r)));
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("par", n), &n, |bench, &n| {
            bench.iter(|| mc::map_chunks_par(n, |r| path_kernel(&params, r)));
        });
    }
    group.finish();
}

criterion_group!(benches, bench_variant_b, bench_paths);
criterion_main!(benches);
