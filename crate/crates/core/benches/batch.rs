use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use uindex_core::batch::{detect_profiles, evaluate_profiles, leave_one_out_sweep};
use uindex_core::{AnomalyConfig, AuthorProfile, Execution, Publication, DEFAULT_EPSILON};

fn random_profile(rng: &mut ChaCha8Rng, id: usize, n: usize) -> AuthorProfile {
    let pubs = (0..n)
        .map(|i| {
            Publication::new(
                format!("p{i}"),
                rng.random_range(0..20_000),
                rng.random_range(0.2..40.0),
            )
            .unwrap()
        })
        .collect();
    AuthorProfile::new(format!("a{id}"), pubs).unwrap()
}

fn corpus(count: usize, n: usize) -> Vec<AuthorProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..count).map(|i| random_profile(&mut rng, i, n)).collect()
}

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn bench_evaluate(c: &mut Criterion) {
    let mut group = c.benchmark_group("evaluate_profiles");
    for &count in &[100usize, 2_000] {
        let profiles = corpus(count, 80);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, count), &profiles, |b, ps| {
                b.iter(|| evaluate_profiles(black_box(ps), None, DEFAULT_EPSILON, exec))
            });
        }
    }
    group.finish();
}

fn bench_detect(c: &mut Criterion) {
    let mut group = c.benchmark_group("detect_profiles");
    let profiles = corpus(1_000, 80);
    let config = AnomalyConfig::default();
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| detect_profiles(black_box(&profiles), &config, exec))
        });
    }
    group.finish();
}

fn bench_leave_one_out(c: &mut Criterion) {
    let mut group = c.benchmark_group("leave_one_out_sweep");
    for &n in &[200usize, 1_000] {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let profile = random_profile(&mut rng, 0, n);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &profile, |b, p| {
                b.iter(|| leave_one_out_sweep(black_box(p), exec))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_evaluate, bench_detect, bench_leave_one_out);
criterion_main!(benches);
