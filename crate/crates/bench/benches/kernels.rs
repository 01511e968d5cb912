use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use cyclogon_core::cyclotomic::{dft, fourier_vector, idft};
use cyclogon_core::diagonal::lemma3_scan;
use cyclogon_core::polytope::{
    build_q, gram_report, recover_frequencies, FrequencySet, DEFAULT_TOL,
};
use cyclogon_core::recurrence::{admissible_ratios, theorem2_sweep_range, SweepScope, Tolerances};
use cyclogon_core::RecurrenceSpec;

fn spectra(c: &mut Criterion) {
    let mut group = c.benchmark_group("dft");
    for n in [30usize, 256, 1024] {
        let p = fourier_vector(n, 7).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| idft(&dft(black_box(p))).unwrap())
        });
    }
    group.finish();

    let spec = RecurrenceSpec::new(30, 7, 2, 6).unwrap();
    c.bench_function("admissible_ratios/30", |b| {
        b.iter(|| admissible_ratios(black_box(&spec)))
    });
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for n in [12usize, 16] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                theorem2_sweep_range(n, n, SweepScope::Hypotheses, &Tolerances::default()).unwrap()
            })
        });
    }
    group.finish();
}

fn diagonals(c: &mut Criterion) {
    let mut group = c.benchmark_group("lemma3_scan");
    group.sample_size(10);
    for n in [24usize, 42] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| lemma3_scan(n).unwrap())
        });
    }
    group.finish();
}

fn polytopes(c: &mut Criterion) {
    let q = build_q(12, 6, &FrequencySet::new(vec![1, 2, 5], 12).unwrap()).unwrap();
    c.bench_function("gram_report/12x6", |b| {
        b.iter(|| gram_report(black_box(&q), DEFAULT_TOL))
    });
    c.bench_function("recover_frequencies/12x6", |b| {
        b.iter(|| recover_frequencies(black_box(&q), DEFAULT_TOL).unwrap())
    });
}

criterion_group!(benches, spectra, sweeps, diagonals, polytopes);
criterion_main!(benches);
