use criterion::{criterion_group, criterion_main, Criterion};
use mixedic::figure2;
use mixedic::sim::{estimate_error_rate, run_trial, trial_seed, CodebookSet, SimParams};

fn trials(c: &mut Criterion) {
    let cfg = figure2::config();
    let asg = figure2::assignment();
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);

    for (n, m) in [(8, 19), (12, 88)] {
        let books = CodebookSet::generate(&cfg, [m; 3], n, 1);
        group.bench_function(format!("trial-n{n}-m{m}"), |b| {
            b.iter(|| run_trial(&cfg, &asg, &books, trial_seed(1, 0)).unwrap())
        });
    }

    let params = SimParams {
        n: 8,
        rates: [0.54; 3],
        trials: 200,
        master_seed: 3,
    };
    group.bench_function("estimate-200", |b| {
        b.iter(|| estimate_error_rate(&cfg, &asg, &params).unwrap())
    });
    group.finish();
}

criterion_group!(benches, trials);
criterion_main!(benches);
