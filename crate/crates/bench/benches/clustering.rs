use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fgb_core::{
    accuracy, ari, auto_min_split_size, cluster, connect_overlap, fcm_fit, granulate, make_blobs,
    nmi, BallGenConfig, FcmConfig, Method, MethodParams,
};
use std::hint::black_box;

fn ball_generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("granulate");
    for per_cluster in [100, 500, 2000] {
        let data = make_blobs(per_cluster, 5, 2, 0.5, 1).unwrap();
        let config = BallGenConfig {
            min_split_size: auto_min_split_size(data.n()),
            ..BallGenConfig::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(data.n()), &data, |b, data| {
            b.iter(|| granulate(black_box(data), &config).unwrap())
        });
    }
    group.finish();
}

fn fcm(c: &mut Criterion) {
    let mut group = c.benchmark_group("fcm_fit");
    for (per_cluster, k) in [(200, 3), (200, 10), (1000, 10)] {
        let data = make_blobs(per_cluster, k, 2, 0.5, 2).unwrap();
        let config = FcmConfig::default();
        group.bench_function(format!("n{}_c{k}", data.n()), |b| {
            b.iter(|| fcm_fit(black_box(&data), k, &config, None).unwrap())
        });
    }
    group.finish();
}

fn overlap(c: &mut Criterion) {
    let data = make_blobs(1000, 5, 2, 0.5, 3).unwrap();
    let config = BallGenConfig {
        min_split_size: 3,
        ..BallGenConfig::default()
    };
    let balls = granulate(&data, &config).unwrap().balls;
    c.bench_function(&format!("connect_overlap_{}_balls", balls.len()), |b| {
        b.iter(|| connect_overlap(black_box(&data), balls.clone()).unwrap())
    });
}

fn methods(c: &mut Criterion) {
    let data = make_blobs(400, 5, 2, 0.5, 4).unwrap();
    let mut group = c.benchmark_group("cluster");
    for (method, k) in [
        (Method::FgbOverlap, None),
        (Method::FgbKmeans, Some(5)),
        (Method::Fcm, Some(5)),
        (Method::Kmeans, Some(5)),
    ] {
        let params = MethodParams::new(method, k, 0);
        group.bench_function(method.to_string(), |b| {
            b.iter(|| cluster(black_box(&data), &params).unwrap())
        });
    }
    group.finish();
}

fn metrics(c: &mut Criterion) {
    let n = 10_000;
    let truth: Vec<usize> = (0..n).map(|i| i % 6).collect();
    let pred: Vec<usize> = (0..n).map(|i| (i * 7 + i / 13) % 6).collect();
    c.bench_function("accuracy_10k_k6", |b| {
        b.iter(|| accuracy(black_box(&truth), &pred).unwrap())
    });
    c.bench_function("nmi_10k_k6", |b| {
        b.iter(|| nmi(black_box(&truth), &pred).unwrap())
    });
    c.bench_function("ari_10k_k6", |b| {
        b.iter(|| ari(black_box(&truth), &pred).unwrap())
    });
}

criterion_group!(benches, ball_generation, fcm, overlap, methods, metrics);
criterion_main!(benches);
