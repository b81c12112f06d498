use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use medial_core::enumerate::{all_quasigroups, count_quasigroups, EnumerationSpec, Mode};
use medial_core::linearize::{classification_mismatches, pair_theorem_sweep};
use medial_core::{pair_catalog, AbelianGroup, Exec, Limits};

fn strategies() -> Vec<(&'static str, Exec)> {
    vec![
        ("sequential", Exec::Sequential),
        #[cfg(feature = "parallel")]
        ("parallel", Exec::Parallel),
    ]
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_order_5");
    group.sample_size(10);
    let spec = EnumerationSpec::new(5, Mode::Count);
    for (name, exec) in strategies() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| count_quasigroups(&spec, &Limits::default(), exec).unwrap())
        });
    }
    group.finish();
}

fn classification(c: &mut Criterion) {
    let mut tables = all_quasigroups(3);
    tables.extend(all_quasigroups(4));
    let mut group = c.benchmark_group("classification_orders_3_4");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| classification_mismatches(&tables, exec))
        });
    }
    group.finish();
}

fn pair_sweep(c: &mut Criterion) {
    let tables = all_quasigroups(3);
    let entries = pair_catalog();
    let mut group = c.benchmark_group("pair_sweep_order_3");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pair_theorem_sweep(&tables, &entries, exec))
        });
    }
    group.finish();
}

fn automorphisms(c: &mut Criterion) {
    let g = AbelianGroup::product(&[2, 2, 2, 2]);
    let mut group = c.benchmark_group("automorphisms_z2_4");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| g.automorphisms_with(&Limits::default(), exec).unwrap().len())
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, classification, pair_sweep, automorphisms);
criterion_main!(benches);
