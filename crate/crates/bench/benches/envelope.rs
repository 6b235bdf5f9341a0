use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use tenv_bench::{rational_sets, sets, symbolic_sets};
use tenv_core::backend::RegularCategory;
use tenv_core::envelope::partition_oracle_compose;
use tenv_core::scalar::Rational;

fn subobjects(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_subobjects");
    for n in [4usize, 6, 8] {
        group.bench_with_input(BenchmarkId::new("setop", n), &n, |b, &n| {
            b.iter(|| sets().enumerate_subobjects(black_box(n)).unwrap().len())
        });
    }
    let f2 = tenv_bench::f2();
    for d in [2usize, 3, 4] {
        group.bench_with_input(BenchmarkId::new("vect_f2", d), &d, |b, &d| {
            b.iter(|| f2.enumerate_subobjects(black_box(d)).unwrap().len())
        });
    }
    group.finish();
}

fn composition(c: &mut Criterion) {
    let env = rational_sets(Rational::from_integer(3));
    let basis = env.hom_basis(2, 2).unwrap();
    c.bench_function("weighted_compose_end2_all_pairs", |b| {
        b.iter(|| {
            let mut hits = 0;
            for r in basis.relations() {
                for s in basis.relations() {
                    hits += env.weighted(&r, &s).unwrap().is_some() as usize;
                }
            }
            hits
        })
    });
    let parts = tenv_core::backend::Partition::all(4);
    c.bench_function("partition_oracle_end2_all_pairs", |b| {
        b.iter(|| {
            let mut total = 0;
            for p in &parts {
                for q in &parts {
                    total += partition_oracle_compose(p, 2, 2, q, 2).unwrap().1;
                }
            }
            total
        })
    });
}

fn end_algebra(c: &mut Criterion) {
    let mut group = c.benchmark_group("end_algebra");
    group.sample_size(10);
    for n in [1usize, 2] {
        group.bench_with_input(BenchmarkId::new("symbolic", n), &n, |b, &n| {
            b.iter(|| symbolic_sets().end_algebra(black_box(n)).unwrap().dim)
        });
    }
    group.finish();
}

criterion_group!(benches, subobjects, composition, end_algebra);
criterion_main!(benches);
