use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use robust_auction::estimation::{estimate_interval, EstimationParams};
use robust_auction::mechanism::{compute_n_star, tune_threshold};
use robust_auction::rng::{stream, Purpose};
use robust_auction::simulation::{generate_world, kde_intervals, sweep, DSweep, ScenarioConfig};
use robust_auction::theory::count_allocations_leq2;
use robust_auction::winnow;

fn estimation(c: &mut Criterion) {
    let cfg = ScenarioConfig::new(10, 5, 1);
    let world = generate_world(&cfg).unwrap();
    let bids = world.history.bids(0, 0).to_vec();
    let bounds = world.history.bounds(0);
    c.bench_function("estimate_interval/50 bids", |b| {
        b.iter_batched(
            || stream(1, Purpose::IntervalSampling, 0, 0),
            |mut rng| estimate_interval(black_box(&bids), bounds, EstimationParams::default(), &mut rng).unwrap(),
            BatchSize::SmallInput,
        )
    });
    c.bench_function("kde_intervals/10x5", |b| {
        b.iter(|| kde_intervals(black_box(&world), &cfg).unwrap())
    });
}

fn mechanism(c: &mut Criterion) {
    let cfg = ScenarioConfig::new(30, 10, 2);
    let world = generate_world(&cfg).unwrap();
    let ivs = kde_intervals(&world, &cfg).unwrap();
    c.bench_function("winnow/30x10", |b| b.iter(|| winnow(black_box(&ivs)).unwrap()));
    let wr = winnow(&ivs).unwrap();
    let zeroed = wr.zero_neglected(&ivs);
    let m_star = wr.neglected_count();
    let n_star = compute_n_star(0.01, 0.9, 300 - m_star).unwrap();
    c.bench_function("tune_threshold/30x10", |b| {
        b.iter(|| tune_threshold(black_box(&zeroed), n_star, m_star, 2.0).unwrap())
    });
    let mut swept = cfg.clone();
    swept.d_sweep = DSweep::Values((0..=20).map(|k| k as f64 * 0.5).collect());
    c.bench_function("sweep/30x10/21 thresholds", |b| {
        b.iter(|| sweep(black_box(&world), &swept).unwrap())
    });
}

fn theory(c: &mut Criterion) {
    c.bench_function("count_allocations_leq2/60", |b| {
        b.iter(|| count_allocations_leq2(black_box(60)).unwrap())
    });
}

criterion_group!(benches, estimation, mechanism, theory);
criterion_main!(benches);
