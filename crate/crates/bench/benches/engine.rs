use coverdist::bounds::sweep::Sweep;
use coverdist::{BoundConfig, BoundEngine, DeltaPolicy, FieldSpec, Limits, RingElement};
use coverdist_bench::{classic, wide};
use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use num_bigint::BigInt;
use std::hint::black_box;

fn distortion(c: &mut Criterion) {
    for (name, inst) in [("classic", classic()), ("wide", wide())] {
        let problem = inst.distortion_problem().unwrap();
        let deltas = DeltaPolicy::Threshold(BigInt::from(8)).resolve(&inst.prime_norms()).unwrap();
        c.bench_function(&format!("distortion run {name}"), |b| b.iter(|| problem.run(black_box(&deltas), false).unwrap()));
        c.bench_function(&format!("build problem {name}"), |b| b.iter(|| inst.distortion_problem().unwrap()));
    }
}

fn ideals(c: &mut Criterion) {
    let f = FieldSpec::quadratic(-5).unwrap();
    let i = f.ideal_from_generators(&[RingElement::new(3, 1), RingElement::new(7, -2)]).unwrap();
    let j = f.principal(&RingElement::new(11, 4)).unwrap();
    let big = f.ideal_of_integer(BigInt::from(2 * 3 * 7 * 29 * 41 * 61 * 101u64)).unwrap();
    c.bench_function("ideal mul", |b| b.iter(|| f.ideal_mul(black_box(&i), black_box(&j))));
    c.bench_function("ideal intersect", |b| b.iter(|| black_box(&i).intersect(black_box(&j))));
    c.bench_function("ideal factor", |b| b.iter(|| f.factor_ideal(black_box(&big), &Limits::default()).unwrap()));
}

fn bounds(c: &mut Criterion) {
    let q = FieldSpec::rational();
    let mut g = c.benchmark_group("bounds");
    g.sample_size(10);
    g.bench_function("prime sweep to 2^22", |b| {
        b.iter_batched(|| Sweep::new(&q), |mut s| s.extend(&[1 << 22]), BatchSize::LargeInput)
    });
    g.bench_function("effective bound s=1", |b| {
        b.iter(|| BoundEngine::new(&q, BoundConfig::default()).effective_bound(1).unwrap())
    });
    g.finish();
}

criterion_group!(benches, distortion, ideals, bounds);
criterion_main!(benches);
