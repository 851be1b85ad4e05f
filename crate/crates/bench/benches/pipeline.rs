use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use bsato_core::bsato::{Analysis, Problem};
use bsato_core::ideals::IdealHandle;
use bsato_core::primdec::{factor_univariate, primary_decompose};
use bsato_core::{parse_polynomial, VarUniverse};

fn example1() -> Problem {
    Problem::parse(&["x", "y"], &["x", "y", "1-x-y"]).unwrap()
}

fn example2() -> Problem {
    Problem::parse(&["x", "y"], &["y", "y-2*x+1", "y-x^2"]).unwrap()
}

fn annihilator(c: &mut Criterion) {
    c.bench_function("annihilator x^2", |b| {
        let prob = Problem::parse(&["x"], &["x^2"]).unwrap();
        b.iter(|| Analysis::new(black_box(prob.clone())).annihilator().unwrap().i1.len())
    });
    c.bench_function("annihilator example 1", |b| {
        let prob = example1();
        b.iter(|| Analysis::new(black_box(prob.clone())).annihilator().unwrap().i1.len())
    });
}

fn global(c: &mut Criterion) {
    c.bench_function("global example 1", |b| {
        let prob = example1();
        b.iter(|| Analysis::new(black_box(prob.clone())).global().unwrap().generators().len())
    });
}

fn decomposition(c: &mut Criterion) {
    let mut an = Analysis::new(example2());
    let i2 = an.i2().unwrap().clone();
    c.bench_function("primary decomposition example 2", |b| {
        b.iter(|| primary_decompose(black_box(&i2)).unwrap().len())
    });
    let u = VarUniverse::polynomial_ring(["x", "y"].map(String::from)).unwrap();
    let ideal = IdealHandle::new(&u, vec![parse_polynomial("x^2*y-y^3", &u).unwrap(), parse_polynomial("x*y^2-x", &u).unwrap()]);
    c.bench_function("primary decomposition of a small curve arrangement", |b| {
        b.iter(|| primary_decompose(black_box(&ideal)).unwrap().len())
    });
}

fn factorization(c: &mut Criterion) {
    let u = VarUniverse::polynomial_ring(["s"].map(String::from)).unwrap();
    let p = parse_polynomial("(s+1)^3*(2*s+3)*(4*s+5)*(s^2+s+1)*(s^4-2)", &u).unwrap();
    c.bench_function("univariate factorization", |b| b.iter(|| factor_univariate(black_box(&p)).unwrap().factors.len()));
}

fn stratify(c: &mut Criterion) {
    let mut group = c.benchmark_group("stratify");
    group.sample_size(10);
    group.bench_function("example 1", |b| {
        let prob = example1();
        b.iter(|| Analysis::new(black_box(prob.clone())).strata().unwrap().len())
    });
    group.finish();
}

criterion_group!(benches, annihilator, global, decomposition, factorization, stratify);
criterion_main!(benches);
