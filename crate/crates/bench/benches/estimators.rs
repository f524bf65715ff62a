use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use lidkit::estimators::{geomle_lid, mle_lid_batch, twonn_global, GeomleConfig};
use lidkit::synthetic::generate;
use lidkit::truthful::{auroc, rouge_l};
use lidkit::{knn_all, EmbeddingSet, ManifoldKind, ManifoldSpec};

fn sphere(n: usize, d: usize) -> EmbeddingSet {
    generate(&ManifoldSpec::new(ManifoldKind::Sphere, 10, d, n).with_seed(7)).unwrap()
}

fn neighbors(c: &mut Criterion) {
    let mut group = c.benchmark_group("knn_all");
    group.sample_size(10);
    for &(n, d) in &[(500, 512), (1000, 4096)] {
        let set = sphere(n, d);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{n}x{d}")),
            &set,
            |b, s| b.iter(|| knn_all(black_box(s), s, 100, true).unwrap()),
        );
    }
    group.finish();
}

fn estimators(c: &mut Criterion) {
    let set = sphere(1000, 512);
    let mut group = c.benchmark_group("estimators");
    group.sample_size(10);
    group.bench_function("mle_T100", |b| {
        b.iter(|| mle_lid_batch(black_box(&set), &set, 100, true).unwrap())
    });
    let cfg = GeomleConfig::for_neighbors(100).with_seed(1);
    group.bench_function("geomle_T100", |b| {
        b.iter(|| geomle_lid(black_box(&set), &set, &cfg, true).unwrap())
    });
    group.bench_function("twonn", |b| {
        b.iter(|| twonn_global(black_box(&set), 0.1).unwrap())
    });
    group.finish();
}

fn scoring(c: &mut Criterion) {
    let n = 2000;
    // a fixed, heavily tied score pattern
    let scores: Vec<f64> = (0..n).map(|i| ((i * 7919) % 97) as f64).collect();
    let labels: Vec<u8> = (0..n).map(|i| ((i * 31) % 3 == 0) as u8).collect();
    c.bench_function("auroc_2000", |b| {
        b.iter(|| auroc(black_box(&scores), &labels).unwrap())
    });

    let a = "the quick brown fox jumps over the lazy dog ".repeat(20);
    let r = "a quick brown dog jumps over the lazy fox again ".repeat(20);
    c.bench_function("rouge_l_180_tokens", |b| {
        b.iter(|| rouge_l(black_box(&a), &r))
    });
}

criterion_group!(benches, neighbors, estimators, scoring);
criterion_main!(benches);
