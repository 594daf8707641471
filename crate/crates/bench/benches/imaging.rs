use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use osinfo::imaging::{denoise, denoise_salt_pepper, quality, CoeffRule, Padding};
use osinfo::measures::LogBase;
use osinfo::{LEstimator, NamedFilter};
use osinfo_bench::{cauchy_weighting_comparison, noisy_pair};

fn filtering(c: &mut Criterion) {
    let (clean, noisy) = noisy_pair(256, 0.7, 0.3, 7);
    let median = LEstimator::named(NamedFilter::Median, 25).unwrap();
    c.bench_function("denoise_median_256_w5", |b| {
        b.iter(|| denoise(black_box(&noisy), &median, 5, Padding::Reflect).unwrap())
    });
    c.bench_function("pipeline_entropy_256_w5", |b| {
        b.iter(|| {
            denoise_salt_pepper(black_box(&noisy), 5, CoeffRule::Entropy, None, LogBase::Two, Padding::Reflect).unwrap()
        })
    });
    c.bench_function("quality_256", |b| b.iter(|| quality(black_box(&noisy), &clean).unwrap()));
}

fn cauchy_report(c: &mut Criterion) {
    // Informational: r3-proportional versus inverse-r3 weights under Cauchy noise.
    let (direct, inverse, median) = cauchy_weighting_comparison(128, 5, 8.0, 3).unwrap();
    eprintln!("cauchy noise mse: r3-weighted {direct:.5e}, inverse {inverse:.5e}, median {median:.5e}");
    c.bench_function("cauchy_weighting_comparison_64", |b| {
        b.iter(|| cauchy_weighting_comparison(64, 5, 8.0, 3).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = filtering, cauchy_report
}
criterion_main!(benches);
