use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quasimoment_core::invariants::{hom_expr, invariant_dimension_with};
use quasimoment_core::liealg::{LieAlgebra, ModuleExpr};
use quasimoment_core::{ExecMode, GeneratorTable, Parity, SuperPoly};

fn dense_poly(table: &std::sync::Arc<GeneratorTable>, names: &[&str], shift: usize) -> SuperPoly {
    let mut src = Vec::new();
    for (i, a) in names.iter().enumerate() {
        for (j, b) in names.iter().enumerate().skip(i) {
            src.push(format!("{}*{a}*{b}", (i + 2 * j + shift) % 7 + 1));
        }
    }
    SuperPoly::parse(table, &src.join(" + ")).unwrap()
}

fn poly_product(c: &mut Criterion) {
    let names: Vec<String> = (0..10).map(|i| format!("x{i}")).collect();
    let table = GeneratorTable::new(
        names.iter().map(|n| (n.clone(), Parity::Even)).collect::<Vec<_>>(),
    )
    .unwrap();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let one = SuperPoly::one(&table);
    let a = dense_poly(&table, &refs, 0).add(&one);
    let b = dense_poly(&table, &refs, 3).add(&one);
    let a = a.mul(&a);
    let mut group = c.benchmark_group("poly_product");
    group.sample_size(10);
    group.bench_function("parallel", |bn| bn.iter(|| black_box(a.mul(&b))));
    group.bench_function("sequential", |bn| bn.iter(|| black_box(a.mul_sequential(&b))));
    group.finish();
}

fn invariants(c: &mut Criterion) {
    let g = LieAlgebra::parse("sp(4)").unwrap();
    let e = hom_expr(
        &ModuleExpr::parse("wedge3(v1)").unwrap(),
        &ModuleExpr::parse("sym3(v1)").unwrap(),
    );
    let mut group = c.benchmark_group("invariants_sp4");
    group.sample_size(10);
    for mode in [ExecMode::Parallel, ExecMode::Sequential] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{mode:?}")), &mode, |bn, &m| {
            bn.iter(|| black_box(invariant_dimension_with(&g, &e, m).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, poly_product, invariants);
criterion_main!(benches);
