//! End-to-end benchmarks over the pipeline stages: enumeration, axiom
//! checking, groupoid extraction, the Weyl transform, projector synthesis
//! and the full equivalence sweep.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use epistrict::epistricted::enumerate_pure_states;
use epistrict::fplinalg::{enumerate_lagrangians, PrimeField};
use epistrict::groupoids::{endomorphism_monoid, groupoid_from_frobenius};
use epistrict::quantize::{
    operational_equivalence_report, quantize_state, weyl_symbol, weyl_transform, PhaseFn,
};
use epistrict::relcat::{build_spek_algebra, verify_compact, verify_frobenius};

fn field(d: u64) -> PrimeField {
    PrimeField::new(d).unwrap()
}

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_lagrangians");
    for d in [3u64, 5, 7] {
        group.bench_with_input(BenchmarkId::new("n1", d), &d, |b, &d| {
            b.iter(|| enumerate_lagrangians(field(d), 1).unwrap())
        });
    }
    group.bench_function("n2_d3", |b| {
        b.iter(|| enumerate_lagrangians(field(3), 2).unwrap())
    });
    group.finish();

    c.bench_function("enumerate_pure_states_d3_n2", |b| {
        b.iter(|| enumerate_pure_states(field(3), 2).unwrap())
    });
}

fn bench_frobenius(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_frobenius");
    for d in [3u64, 5, 7] {
        let alg = build_spek_algebra(field(d));
        group.bench_with_input(BenchmarkId::from_parameter(d), &alg, |b, alg| {
            b.iter(|| {
                let rep = verify_frobenius(black_box(alg));
                assert!(rep.all() && verify_compact(alg));
            })
        });
    }
    group.finish();
}

fn bench_groupoids(c: &mut Criterion) {
    let alg = build_spek_algebra(field(3));
    c.bench_function("groupoid_from_frobenius_d3", |b| {
        b.iter(|| groupoid_from_frobenius(black_box(&alg)).unwrap())
    });
    c.bench_function("endomorphism_monoid_d3", |b| {
        b.iter(|| endomorphism_monoid(black_box(&alg)).unwrap())
    });
}

fn bench_quantize(c: &mut Criterion) {
    let fd = field(5);
    let values = (0..25)
        .map(|k| num::complex::Complex64::new((k as f64).sin(), (k as f64).cos()))
        .collect();
    let f = PhaseFn::new(fd, 1, values).unwrap();
    c.bench_function("weyl_roundtrip_d5", |b| {
        b.iter(|| {
            let m = weyl_transform(black_box(&f));
            weyl_symbol(&m, fd, 1).unwrap()
        })
    });

    let fd3 = field(3);
    let states = enumerate_pure_states(fd3, 1).unwrap();
    c.bench_function("stabilizer_projectors_d3_all", |b| {
        b.iter(|| {
            for s in &states {
                black_box(quantize_state(s).unwrap());
            }
        })
    });

    c.bench_function("equivalence_report_d3", |b| {
        b.iter(|| operational_equivalence_report(fd3, 1, 1e-9).unwrap())
    });
}

criterion_group!(
    benches,
    bench_enumeration,
    bench_frobenius,
    bench_groupoids,
    bench_quantize
);
criterion_main!(benches);
