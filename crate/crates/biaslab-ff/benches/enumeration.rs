//! Throughput of the irreducible sieve and the factorization walk,
//! parallel pool vs a single-thread pool (identical results either way).

use std::hint::black_box;

use biaslab_ff::irreducible::build_irreducibles;
use biaslab_ff::poly::Poly;
use biaslab_ff::summatory::monic_weights;
use criterion::{criterion_group, criterion_main, Criterion};

fn bench_irreducible_sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("irreducible_sieve");
    g.sample_size(10);
    g.bench_function("f3_degree_10", |b| {
        b.iter(|| build_irreducibles(black_box(3), 10).unwrap().max_degree)
    });
    g.finish();
}

fn bench_weights(c: &mut Criterion) {
    let irr = build_irreducibles(3, 11).unwrap();
    let m: Poly = "0,0,1@3".parse().unwrap();
    let mut g = c.benchmark_group("monic_weights_f3_deg11");
    g.sample_size(10);
    g.bench_function("default_pool", |b| {
        b.iter(|| monic_weights(black_box(&m), 11, &[2, 3], &irr).unwrap().len())
    });
    #[cfg(feature = "parallel")]
    {
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        g.bench_function("single_thread_pool", |b| {
            b.iter(|| {
                single.install(|| monic_weights(black_box(&m), 11, &[2, 3], &irr).unwrap().len())
            })
        });
    }
    g.finish();
}

criterion_group!(benches, bench_irreducible_sieve, bench_weights);
criterion_main!(benches);
