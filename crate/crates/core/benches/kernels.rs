//! Kernel timings. Run once with default features and once with
//! `--no-default-features`; each group is labelled with the mode so the two
//! runs sit side by side in criterion's report.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ksieve::arith::weil_sweep;
use ksieve::bilinear::{dispersion_profile, DispersionSequence, SPIKE_EPS};
use ksieve::gpf::scan;
use ksieve::harman::{g4, thresholds, GammaRule, IntegralConfig, THETA_KIM_SARNAK};
use ksieve::hyperbola::bound_sweep;
use ksieve::par::MODE;
use ksieve::sieve::build_table;
use ksieve::verify::{duality_gap, poisson_gap};

fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group(format!("kernels/{MODE}"));
    g.sample_size(10);

    g.bench_function(BenchmarkId::new("weil_sweep", 150), |b| b.iter(|| weil_sweep(black_box(150))));
    g.bench_function(BenchmarkId::new("bound_sweep", 120), |b| b.iter(|| bound_sweep(black_box(120), 1, 1)));
    g.bench_function(BenchmarkId::new("duality", 40), |b| b.iter(|| duality_gap(black_box(40), 1)));
    g.bench_function(BenchmarkId::new("poisson", 20), |b| b.iter(|| poisson_gap(black_box(20), 1)));
    g.bench_function(BenchmarkId::new("gpf_scan", 50_000), |b| b.iter(|| scan(1, black_box(50_000), false)));

    let d = DispersionSequence::standard(64.0, 64, 0.3141, 0.2718).unwrap();
    g.bench_function(BenchmarkId::new("dispersion_profile", 64), |b| {
        b.iter(|| dispersion_profile(black_box(&d), None, SPIKE_EPS))
    });

    let table = build_table(1e-4, 20.0).unwrap();
    let th = thresholds(THETA_KIM_SARNAK).unwrap();
    let cfg = IntegralConfig {
        theta: THETA_KIM_SARNAK,
        tol: 1e-6,
        samples: 1_000_000,
        seed: 1,
        gamma_rule: GammaRule::Width,
    };
    g.bench_function(BenchmarkId::new("g4_monte_carlo", cfg.samples), |b| {
        b.iter(|| g4(black_box(&table), &cfg, &th))
    });
    g.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
