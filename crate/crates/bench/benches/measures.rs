use chrono::NaiveDate;
use criterion::{black_box, criterion_group, criterion_main, Criterion};
use lix_core::{
    basket_lix, lix_daily, lixi, lixi_decomposed, AdvContext, BasketPosition, BasketSpec, BookLevel,
    DailyBar, LiquidityIndex, LiquidityKind, OrderBookSnapshot, ScalingParams,
};

fn ladder(mid: f64, levels: usize) -> OrderBookSnapshot {
    let bids = (0..levels)
        .map(|i| BookLevel::new(mid - 0.01 * (i + 1) as f64, 100.0 + i as f64).unwrap())
        .collect();
    let asks = (0..levels)
        .map(|i| BookLevel::new(mid + 0.01 * (i + 1) as f64, 120.0 + i as f64).unwrap())
        .collect();
    OrderBookSnapshot::new(0.0, bids, asks).unwrap()
}

fn bench_measures(c: &mut Criterion) {
    let bar = DailyBar::new(
        "X",
        NaiveDate::from_ymd_opt(2013, 11, 20).unwrap(),
        50.0,
        51.0,
        50.0,
        50.0,
        1e7,
    )
    .unwrap();
    c.bench_function("lix_daily", |b| b.iter(|| lix_daily(black_box(&bar))));

    let ctx = AdvContext::new(1e6, 20, 30_600.0).unwrap();
    for levels in [1, 10, 50] {
        let book = ladder(100.0, levels);
        c.bench_function(&format!("lixi/{levels}_levels"), |b| {
            b.iter(|| lixi(black_box(&book), &ctx, ScalingParams::RANDOM_WALK))
        });
        c.bench_function(&format!("lixi_decomposed/{levels}_levels"), |b| {
            b.iter(|| lixi_decomposed(black_box(&book), &ctx))
        });
    }

    let positions: Vec<_> = (0..500)
        .map(|i| {
            let lix = LiquidityIndex::new(5.0 + (i % 50) as f64 / 10.0, LiquidityKind::Daily).unwrap();
            BasketPosition::new(format!("P{i}"), 1.0, lix).unwrap()
        })
        .collect();
    let spec = BasketSpec::normalized(positions, None).unwrap();
    c.bench_function("basket_lix/500", |b| b.iter(|| basket_lix(black_box(&spec))));
}

criterion_group!(benches, bench_measures);
criterion_main!(benches);
