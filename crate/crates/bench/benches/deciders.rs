use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;
use num_rational::BigRational;
use pfister_bench::{field, form, tower_algebra, triple};
use pfister_core::certifier::{self, enumerate_quotient};
use pfister_core::quadform::{self, hilbert};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn hilbert_symbols(c: &mut Criterion) {
    let (a, b) = (rat(-1234567), rat(98765));
    let places = hilbert::relevant_places(&[a.clone(), b.clone()]).unwrap();
    c.bench_function("hilbert/all places", |bn| {
        bn.iter(|| {
            places
                .iter()
                .map(|v| quadform::hilbert_symbol(black_box(&a), black_box(&b), v).unwrap())
                .product::<i8>()
        })
    });
}

fn isotropy(c: &mut Criterion) {
    let mut g = c.benchmark_group("isotropy");
    for (name, spec, lits) in [
        ("Q ternary", "Q", &["3", "5", "-17"][..]),
        ("Q dim 5", "Q", &["1", "2", "-3", "5", "-7"][..]),
        (
            "Q(t) <<5,2,t>>",
            "Q(t)",
            &["1", "-5", "-2", "10", "-t", "5*t", "2*t", "-10*t"][..],
        ),
        (
            "F3 tower dim 5",
            "Fq-tower:q=3,vars=s,t",
            &["1", "s", "t", "s*t", "-1"][..],
        ),
    ] {
        let q = form(spec, lits);
        g.bench_function(name, |bn| {
            bn.iter(|| quadform::isotropy(black_box(&q)).unwrap())
        });
    }
    g.finish();
}

fn certification(c: &mut Criterion) {
    let mut g = c.benchmark_group("certify");
    g.sample_size(20);
    let f = field("Q(t)");
    let (a, b, t) = triple(&f, "5", "2", "t");
    g.bench_function("(5,2,t) over Q(t)", |bn| {
        bn.iter(|| certifier::certify_witness(&a, &b, &t, &f).unwrap())
    });
    g.bench_function("example p = 3", |bn| {
        bn.iter(|| certifier::reproduce_example_qpt(3).unwrap())
    });
    let alg = tower_algebra();
    g.bench_function("enumerate F3((s))((t))", |bn| {
        bn.iter(|| enumerate_quotient(&alg).unwrap())
    });
    let cert = certifier::reproduce_example_qpt(3).unwrap();
    g.bench_function("audit example p = 3", |bn| {
        bn.iter(|| certifier::audit_certificate(black_box(&cert)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, hilbert_symbols, isotropy, certification);
criterion_main!(benches);
