use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use genuslab::asymptotics::predict_leading_constant;
use genuslab::characters::unit_group_structure;
use genuslab::enumerate::{enumerate, local_character_table, quarter_decade_checkpoints};
use genuslab::frobenian::{frobenian_mean_empirical, DualElement, SubgroupOfQStar};
use genuslab::{FiniteAbelianGroup, LocalConditionSet};

fn group(s: &str) -> FiniteAbelianGroup {
    s.parse().unwrap()
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    for name in ["2", "3", "2,2"] {
        let grp = group(name);
        let cps = quarter_decade_checkpoints(100_000);
        g.bench_with_input(BenchmarkId::from_parameter(name), &grp, |b, grp| {
            b.iter(|| enumerate(grp, 100_000, &LocalConditionSet::new(), &cps).unwrap())
        });
    }
    g.finish();
}

fn local_tables(c: &mut Criterion) {
    let g4 = group("2,4");
    c.bench_function("local_table 2^5 (2,4)", |b| {
        b.iter(|| local_character_table(2, 5, black_box(&g4)).unwrap())
    });
    c.bench_function("local_table 17^2 (2,4)", |b| {
        b.iter(|| local_character_table(17, 2, black_box(&g4)).unwrap())
    });
}

fn discrete_log(c: &mut Criterion) {
    let s = unit_group_structure(1_000_003, 1).unwrap();
    c.bench_function("discrete_log p=1000003", |b| {
        b.iter(|| s.discrete_log(black_box(123_457)).unwrap())
    });
    let s = unit_group_structure(2, 20).unwrap();
    c.bench_function("discrete_log 2^20", |b| {
        b.iter(|| s.discrete_log(black_box(987_651)).unwrap())
    });
}

fn frobenian(c: &mut Criterion) {
    let h = group("3");
    let a = SubgroupOfQStar::minus_one();
    let x = DualElement::one(&h);
    let mut g = c.benchmark_group("frobenian");
    g.sample_size(10);
    g.bench_function("mean Z/3 q<=10^5", |b| {
        b.iter(|| frobenian_mean_empirical(&h, &a, &x, 100_000).unwrap())
    });
    g.finish();
}

fn constants(c: &mut Criterion) {
    let mut g = c.benchmark_group("predict");
    g.sample_size(10);
    for name in ["2", "3", "2,2"] {
        let grp = group(name);
        g.bench_with_input(BenchmarkId::from_parameter(name), &grp, |b, grp| {
            b.iter(|| predict_leading_constant(grp, &LocalConditionSet::new(), 100_000).unwrap())
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    enumeration,
    local_tables,
    discrete_log,
    frobenian,
    constants
);
criterion_main!(benches);
