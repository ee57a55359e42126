use bayescfar::rng::StreamSeed;
use bayescfar::simulate::{scan_profile, WindowLayout};
use bayescfar::{ClutterModel, DetectorFamily, DetectorSpec, Runner};
use bayescfar_bench::scenario;
use criterion::{criterion_group, criterion_main, Criterion, Throughput};

fn estimate_pfa(c: &mut Criterion) {
    let trials = 20_000;
    let mut group = c.benchmark_group("estimate_pfa");
    group.throughput(Throughput::Elements(trials));
    group.sample_size(20);
    for workers in [1, 4] {
        let runner = Runner::new(workers).unwrap();
        for (family, k) in [(DetectorFamily::BayesOs, 12), (DetectorFamily::CaCfar, 1)] {
            let s = scenario(family, 16, k, trials);
            group.bench_function(format!("{family}_workers{workers}"), |b| {
                b.iter(|| runner.estimate_pfa(&s).unwrap())
            });
        }
    }
    group.finish();
}

fn scan(c: &mut Criterion) {
    let profile = ClutterModel::exponential(1.0)
        .unwrap()
        .sample(4096, &mut StreamSeed(5).block(0))
        .unwrap();
    let layout = WindowLayout {
        leading: 8,
        trailing: 8,
    };
    let mut group = c.benchmark_group("scan_profile");
    group.throughput(Throughput::Elements(profile.len() as u64));
    for (family, k) in [
        (DetectorFamily::BayesOs, 12),
        (DetectorFamily::MinCfar, 1),
        (DetectorFamily::CaCfar, 1),
    ] {
        let spec = DetectorSpec::new(family, 16, k, 1e-4).unwrap();
        group.bench_function(family.as_str(), |b| {
            b.iter(|| scan_profile(&profile, &spec, layout).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, estimate_pfa, scan);
criterion_main!(benches);
