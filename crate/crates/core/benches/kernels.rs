use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use subarr::arrangement::{generate_k_equal, good_prime_with, projectivize, KEqualFamily, DEFAULT_SUBSET_CAP};
use subarr::enumerative::truncation_betti_with;
use subarr::exec::Strategy;
use subarr::lattice::build_lattice_with;
use subarr::oracle::{count_points_with, CountMode, DEFAULT_POINT_CAP};
use subarr::topology::is_rationally_cm_with;

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn point_counts(c: &mut Criterion) {
    let a63 = generate_k_equal(KEqualFamily::A, 6, 3).unwrap();
    let mut group = c.benchmark_group("count_points");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(name, "A(6,3) q=9"), &a63, |b, a| {
            b.iter(|| {
                count_points_with(black_box(a), 3, 2, CountMode::Complement, DEFAULT_POINT_CAP, strategy).unwrap()
            })
        });
    }
    group.finish();
}

fn lattices(c: &mut Criterion) {
    let a62 = generate_k_equal(KEqualFamily::A, 6, 2).unwrap();
    let mut group = c.benchmark_group("build_lattice");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(name, "A(6,2)"), &a62, |b, a| {
            b.iter(|| build_lattice_with(black_box(a), strategy))
        });
    }
    group.finish();
}

fn homology(c: &mut Criterion) {
    let a63 = projectivize(&generate_k_equal(KEqualFamily::A, 6, 3).unwrap()).unwrap();
    let l = build_lattice_with(&a63, Strategy::Sequential);
    let mut group = c.benchmark_group("homology");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(format!("truncations/{name}"), "A(6,3) proj"), &l, |b, l| {
            b.iter(|| truncation_betti_with(black_box(l), strategy).unwrap())
        });
        group.bench_with_input(BenchmarkId::new(format!("cohen_macaulay/{name}"), "A(6,3) proj"), &l, |b, l| {
            b.iter(|| is_rationally_cm_with(black_box(l), strategy))
        });
    }
    group.finish();
}

fn primes(c: &mut Criterion) {
    let a63 = generate_k_equal(KEqualFamily::A, 6, 3).unwrap();
    let mut group = c.benchmark_group("good_prime");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(name, "A(6,3) p=2"), &a63, |b, a| {
            b.iter(|| good_prime_with(black_box(a), 2, DEFAULT_SUBSET_CAP, strategy).unwrap())
        });
    }
    group.finish();
}

criterion_group!(kernels, point_counts, lattices, homology, primes);
criterion_main!(kernels);
