use std::hint::black_box;

use bayescfar::detectors::{bayes_os_threshold, bayes_os_threshold_by_root};
use bayescfar::predictive::cell_averaging_pfa;
use bayescfar::{DetectorFamily, DetectorSpec, OsPredictive, PredictiveModel, RootSettings};
use bayescfar_bench::{OS_CASES, TAU_RATIOS};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn os_pfa(c: &mut Criterion) {
    let mut group = c.benchmark_group("os_pfa");
    for (n, k) in OS_CASES {
        let os = OsPredictive::new(n, k, 1.0).unwrap();
        for r in TAU_RATIOS {
            let id = format!("N{n}_k{k}_tau{r}");
            group.bench_with_input(BenchmarkId::new("closed_form", &id), &r, |b, &r| {
                b.iter(|| os.pfa(black_box(r)).unwrap())
            });
            group.bench_with_input(BenchmarkId::new("quadrature", &id), &r, |b, &r| {
                b.iter(|| os.pfa_quadrature(black_box(r)).unwrap())
            });
        }
    }
    group.finish();
}

fn thresholds(c: &mut Criterion) {
    let mut group = c.benchmark_group("threshold");
    for (n, k) in OS_CASES {
        let spec = DetectorSpec::new(DetectorFamily::BayesOs, n, k, 1e-4).unwrap();
        group.bench_function(format!("bayes_os_N{n}_k{k}"), |b| {
            b.iter(|| bayes_os_threshold(&spec, black_box(1.0)).unwrap())
        });
    }
    let spec = DetectorSpec::new(DetectorFamily::BayesOs, 16, 1, 1e-4).unwrap();
    group.bench_function("k1_by_root", |b| {
        b.iter(|| {
            bayes_os_threshold_by_root(&spec, black_box(1.0), &RootSettings::default()).unwrap()
        })
    });
    group.finish();
}

fn generic(c: &mut Criterion) {
    let mut group = c.benchmark_group("generic_pfa");
    let model = PredictiveModel::cell_averaging(16, 16.0).unwrap();
    group.bench_function("cell_averaging_quadrature", |b| {
        b.iter(|| model.pfa(black_box(5.0)).unwrap())
    });
    group.bench_function("cell_averaging_closed_form", |b| {
        b.iter(|| cell_averaging_pfa(16, 16.0, black_box(5.0)))
    });
    group.finish();
}

criterion_group!(benches, os_pfa, thresholds, generic);
criterion_main!(benches);
