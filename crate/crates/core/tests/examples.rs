//! Worked examples for every public operation, checked against values
//! computed by hand.

use chrono::NaiveDate;
use lix_core::comparative::amihud_contributions;
use lix_core::costmodel::cost_per_unit_for;
use lix_core::io::{compute_adv, parse_book_snapshots, parse_daily_bars};
use lix_core::simlab::{
    decile_grid, estimate_alpha, generate_universe, lixi_vs_lix_study, ols, synth_session, BookParams, PathKind,
    PathModel, SessionParams, StudyConfig, UniverseParams,
};
use lix_core::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn day(d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(2013, 11, d).unwrap()
}

fn bar(v: f64, c: f64, h: f64, l: f64) -> DailyBar {
    DailyBar::new("XYZ", day(20), c, h, l, c, v).unwrap()
}

fn lvl(p: f64, v: f64) -> BookLevel {
    BookLevel::new(p, v).unwrap()
}

fn book(bids: &[(f64, f64)], asks: &[(f64, f64)]) -> Result<OrderBookSnapshot> {
    OrderBookSnapshot::new(
        0.0,
        bids.iter().map(|&(p, v)| lvl(p, v)).collect(),
        asks.iter().map(|&(p, v)| lvl(p, v)).collect(),
    )
}

fn ix(v: f64) -> LiquidityIndex {
    LiquidityIndex::new(v, LiquidityKind::Daily).unwrap()
}

fn half() -> ScalingParams {
    ScalingParams::new(0.5).unwrap()
}

const T: f64 = 23_400.0;

#[test]
fn daily_lix() {
    let v = lix_daily(&bar(1e7, 50.0, 51.0, 50.0)).unwrap().value();
    assert!(close(v, (1e7_f64 * 50.0 / 1.0).log10(), 1e-12));
    assert!(close(v, 8.69897, 5e-6));
    assert_eq!(lix_daily(&bar(1.0, 1.0, 2.0, 1.0)).unwrap().value(), 0.0);
    assert!(matches!(lix_daily(&bar(1e7, 50.0, 50.0, 50.0)), Err(Error::ZeroRange { .. })));
}

#[test]
fn intraday_raw() {
    let w = IntradayWindow::new(T / 4.0, T, 2.5e6, 50.5, 50.0, 50.0).unwrap();
    let v = lix_intraday_raw(&w).unwrap().value();
    assert!(close(v, (2.5e6_f64 * 50.0 / 0.5).log10(), 1e-12));
    assert!(close(v, 8.39794, 5e-6));
    let w = IntradayWindow::new(T, T, 1.0, 2.0, 1.0, 1.0).unwrap();
    assert_eq!(lix_intraday_raw(&w).unwrap().value(), 0.0);
    let w = IntradayWindow::new(T, T, 0.0, 2.0, 1.0, 1.0).unwrap();
    assert!(matches!(lix_intraday_raw(&w), Err(Error::ZeroVolume { .. })));
}

#[test]
fn time_scaling() {
    let raw = LiquidityIndex::new((2.5e8_f64).log10(), LiquidityKind::IntradayRaw).unwrap();
    let daily = time_scale_to_daily(raw, T / 4.0, T, half()).unwrap();
    assert!(close(daily.value(), 8.69897, 5e-6));
    assert!(close(daily.value(), (5e8_f64).log10(), 1e-12));
    assert_eq!(daily.kind(), LiquidityKind::IntradayScaled);

    for alpha in [0.3, 0.5, 0.6, 1.0] {
        let p = ScalingParams::new(alpha).unwrap();
        assert_eq!(time_scale_to_daily(ix(6.25), T, T, p).unwrap().value(), 6.25);
    }
    let v = time_scale_to_daily(ix(5.0), T / 2.0, T, half()).unwrap().value();
    assert!(close(v, 5.0 + 0.5 * 2f64.log10(), 1e-12));
    assert!(close(v, 5.150515, 5e-7));
}

#[test]
fn vwap() {
    assert_eq!(side_vwap(&[lvl(101.0, 1000.0)]).unwrap(), 101.0);
    assert_eq!(side_vwap(&[lvl(101.0, 1000.0), lvl(102.0, 3000.0)]).unwrap(), 101.75);
    assert!(side_vwap(&[]).is_err());
}

#[test]
fn instantaneous_lixi() {
    let b = book(&[(99.0, 1000.0)], &[(101.0, 1000.0)]).unwrap();
    assert!(close(lixi_tau(&b).unwrap().value(), 5.0, 1e-12));
    let b2 = book(&[(99.5, 1.0)], &[(100.5, 1.0)]).unwrap();
    assert!(close(lixi_tau(&b2).unwrap().value(), 200f64.log10(), 1e-12));
    assert!(close(lixi_tau(&b2).unwrap().value(), 2.30103, 5e-6));
    assert!(matches!(book(&[(100.0, 10.0)], &[(100.0, 10.0)]), Err(Error::CrossedBook { .. })));

    let ctx = AdvContext::new(4000.0, 20, T).unwrap();
    let v = lixi(&b, &ctx, half()).unwrap().value();
    assert!(close(v, 5.0 + 0.5 * 2f64.log10(), 1e-12));
    assert!(close(v, 5.150515, 5e-7));
    let d = lixi_decomposed(&b, &ctx).unwrap();
    assert!(close(d.total, v, 1e-12));

    let ctx_eq = AdvContext::new(2000.0, 20, T).unwrap();
    let p = ScalingParams::new(0.7).unwrap();
    assert!(close(lixi(&b, &ctx_eq, p).unwrap().value(), lixi_tau(&b).unwrap().value(), 1e-12));
}

#[test]
fn spread_and_decomposition() {
    let b = book(&[(99.0, 1000.0)], &[(101.0, 1000.0)]).unwrap();
    assert!(close(relative_spread(&b).unwrap(), 0.02, 1e-15));
    let tight = book(&[(99.99, 1.0)], &[(100.01, 1.0)]).unwrap();
    assert!(close(relative_spread(&tight).unwrap(), 0.0002, 1e-12));

    let ctx = AdvContext::new(4000.0, 20, T).unwrap();
    let d = lixi_decomposed(&b, &ctx).unwrap();
    assert!(close(d.spread_term, 50f64.log10(), 1e-12));
    assert!(close(d.depth_term, 0.5 * 2000f64.log10(), 1e-12));
    assert!(close(d.adv_term, 0.5 * 4000f64.log10(), 1e-12));
    for (got, want) in [
        (d.spread_term, 1.69897),
        (d.depth_term, 1.650515),
        (d.adv_term, 1.80103),
        (d.total, 5.150515),
    ] {
        assert!(close(got, want, 5e-6), "{got} vs {want}");
    }

    let unit = book(&[(0.5, 10.0)], &[(1.5, 10.0)]).unwrap();
    let d = lixi_decomposed(&unit, &AdvContext::new(20.0, 20, T).unwrap()).unwrap();
    assert!(close(d.spread_term, 0.0, 1e-15));
    assert!(close(d.depth_term, 0.5 * 20f64.log10(), 1e-15));
    assert!(close(d.adv_term, d.depth_term, 1e-15));
}

fn plan(n: f64, p: f64, lix: f64, t: f64) -> ExecutionPlan {
    ExecutionPlan::new(n, p, ix(lix), t, T, half()).unwrap()
}

#[test]
fn costs() {
    let l = (5e8_f64).log10();
    assert!(close(price_impact(&plan(1e7, 50.0, l, T)), 1.0, 1e-12));
    assert!(close(price_impact(&plan(1e7, 50.0, 8.69897, T)), 1.0, 1e-5));
    assert_eq!(price_impact(&plan(1.0, 1.0, 0.0, T)), 1.0);
    assert!(close(price_impact(&plan(1e7, 50.0, l, T / 4.0)), 2.0, 1e-12));

    assert_eq!(cost_single_shot(&plan(2.0, 1.0, 0.0, T)), 2.0);
    assert_eq!(cost_single_shot(&plan(1.0, 1.0, 0.0, T)), 0.5);
    assert_eq!(cost_sliced(&plan(2.0, 1.0, 0.0, T)), 1.0);
    let one = plan(1.0, 37.0, 4.2, 600.0);
    assert!(close(cost_sliced(&one), cost_single_shot(&one), 1e-15));
    assert!(close(cost_sliced(&plan(100.0, 50.0, l, T)), 5e-6, 1e-18));

    assert_eq!(cost_per_unit(&plan(1.0, 1.0, 0.0, T)), 0.5);
    assert!(close(cost_per_unit(&plan(1.0, 1.0, 6.0, T)), 5e-7, 1e-20));
    assert!(close(cost_per_unit(&plan(1.0, 1.0, 6.0, T / 4.0)), 1e-6, 1e-20));
    assert!(close(cost_per_unit_for(6.0, T / 4.0, T, half()), 1e-6, 1e-20));
}

fn pos(id: &str, beta: f64, lix: f64) -> BasketPosition {
    BasketPosition::new(id, beta, ix(lix)).unwrap()
}

#[test]
fn baskets() {
    let single = BasketSpec::strict(vec![pos("A", 1.0, 7.0)], None).unwrap();
    assert_eq!(basket_lix(&single).unwrap().value(), 7.0);

    let same = BasketSpec::strict(vec![pos("A", 0.3, 8.0), pos("B", 0.7, 8.0)], None).unwrap();
    assert!(close(basket_lix(&same).unwrap().value(), 8.0, 1e-12));

    let mixed = BasketSpec::strict(vec![pos("A", 0.5, 6.0), pos("B", 0.5, 9.0)], None).unwrap();
    let v = basket_lix(&mixed).unwrap().value();
    assert!(close(v, -(5e-7_f64 + 5e-10).log10(), 1e-12));
    assert!(close(v, 6.30060, 5e-6));
    assert!(v >= 6.0 + 0.3);
}

#[test]
fn etf_and_venues() {
    let eight = BasketSpec::strict(vec![pos("A", 0.5, 8.0), pos("B", 0.5, 8.0)], Some(ix(5.0))).unwrap();
    let v = basket_with_etf_lix(&eight).unwrap().value();
    assert!(close(v, (1e8_f64 + 1e5).log10(), 1e-12));
    assert!(close(v, 8.000434, 5e-7));

    let ford = BasketSpec::strict(vec![pos("F", 1.0, 9.0)], Some(ix(4.0))).unwrap();
    let v = basket_with_etf_lix(&ford).unwrap().value();
    assert!(close(v, (1e9_f64 + 1e4).log10(), 1e-12));
    assert!(close(v, 9.0000043, 5e-8));

    let equal = BasketSpec::strict(vec![pos("A", 1.0, 7.0)], Some(ix(7.0))).unwrap();
    assert!(close(basket_with_etf_lix(&equal).unwrap().value(), 7.30103, 5e-6));
    let no_etf = BasketSpec::strict(vec![pos("A", 1.0, 7.0)], None).unwrap();
    assert!(matches!(basket_with_etf_lix(&no_etf), Err(Error::MissingEtfLeg)));

    assert_eq!(venue_combine(&[ix(6.5)]).unwrap().value(), 6.5);
    assert!(close(venue_combine(&[ix(7.0), ix(7.0)]).unwrap().value(), 7.0 + 2f64.log10(), 1e-12));
    assert!(close(venue_combine(&[ix(8.0), ix(5.0)]).unwrap().value(), 8.000434, 5e-7));
    assert!(matches!(venue_combine(&[]), Err(Error::EmptyList)));
}

fn ohlcv(d: u32, o: f64, h: f64, l: f64, c: f64, v: f64) -> DailyBar {
    DailyBar::new("XYZ", day(d), o, h, l, c, v).unwrap()
}

#[test]
fn hui_heubel_examples() {
    let bars: Vec<_> = (0..5).map(|i| ohlcv(18 + i, 100.0, 101.0, 99.0, 100.0, 1e6)).collect();
    let w = MultiDayWindow::new(bars.clone(), 1e8).unwrap();
    let expected = (2.0 / 99.0) / (5e8 / (1e8 * 100.0));
    assert!(close(hui_heubel(&w).unwrap(), expected, 1e-15));
    assert!(close(expected, 0.40404, 5e-6));

    let short = MultiDayWindow::new(bars[..4].to_vec(), 1e8).unwrap();
    assert!(matches!(
        hui_heubel(&short),
        Err(Error::InsufficientData { needed: 5, got: 4 })
    ));
}

#[test]
fn amihud_examples() {
    let w = MultiDayWindow::new(
        vec![ohlcv(20, 100.0, 100.0, 100.0, 100.0, 1e6), ohlcv(21, 101.0, 101.0, 101.0, 101.0, 1e6)],
        1e8,
    )
    .unwrap();
    let v = amihud_illiq(&w).unwrap();
    assert!(close(v, 0.01 / (101.0 * 1e6), 1e-22));
    assert!(close(v, 9.90099e-11, 5e-16));

    let flat: Vec<_> = [1e6, 3e5, 7e6]
        .iter()
        .enumerate()
        .map(|(i, &vol)| ohlcv(20 + i as u32, 100.0, 100.0, 100.0, 100.0, vol))
        .collect();
    assert_eq!(amihud_illiq(&MultiDayWindow::new(flat, 1e8).unwrap()).unwrap(), 0.0);

    // volatile session that ends where it started
    let round_trip = vec![
        ohlcv(20, 100.0, 100.0, 100.0, 100.0, 1e6),
        ohlcv(21, 100.0, 108.0, 92.0, 100.0, 1e6),
    ];
    assert_eq!(amihud_contributions(&MultiDayWindow::new(round_trip.clone(), 1e8).unwrap()).unwrap(), vec![0.0]);
    let lix = lix_daily(&round_trip[1]).unwrap().value();
    assert!(lix.is_finite());
    assert!(close(lix, (1e6_f64 * 100.0 / 16.0).log10(), 1e-12));
}

#[test]
fn alpha_estimates() {
    let drift = PathModel::new(PathKind::LinearDrift, 1000, 0.01, 0).unwrap();
    let est = estimate_alpha(&drift, 1000, &decile_grid()).unwrap();
    assert!(close(est.alpha_hat, 1.0, 1e-9));

    let t3 = PathModel::new(PathKind::StudentTReturns { dof: 3.0 }, 1000, 0.001, 11).unwrap();
    let est = estimate_alpha(&t3, 20_000, &decile_grid()).unwrap();
    assert!(est.alpha_hat - 3.0 * est.stderr > 0.5, "{est:?}");
}

fn session_params() -> SessionParams {
    SessionParams {
        instrument_id: "SYN".into(),
        date: day(20),
        initial_price: 40.0,
        daily_volume: 2e6,
        session_length: T,
        book: BookParams::default(),
    }
}

#[test]
fn synthetic_sessions() {
    let model = PathModel::new(PathKind::GaussianReturns, 500, 0.001, 0).unwrap();
    let a = synth_session(&model, &session_params(), 42).unwrap();
    let b = synth_session(&model, &session_params(), 42).unwrap();
    assert_eq!(a, b);

    let flat = PathModel::new(PathKind::Constant, 500, 0.0, 0).unwrap();
    let s = synth_session(&flat, &session_params(), 1).unwrap();
    assert_eq!(s.bar.high(), s.bar.low());
    assert!(matches!(lix_daily(&s.bar), Err(Error::ZeroRange { .. })));

    let mid = s.windows.iter().find(|w| w.elapsed() == T / 2.0).unwrap();
    assert_eq!(mid.cum_volume(), 1e6);
}

#[test]
fn regression_examples() {
    let x = [5.0, 6.2, 7.1, 8.4, 9.9];
    let r = ols(&x, &x).unwrap();
    assert!(close(r.slope, 1.0, 1e-12));
    assert!(close(r.intercept, 0.0, 1e-12));
    assert!(close(r.r_squared, 1.0, 1e-12));

    let one = generate_universe(
        &UniverseParams {
            instruments: 1,
            ..UniverseParams::default()
        },
        7,
    )
    .unwrap();
    assert!(matches!(
        lixi_vs_lix_study(&one, &StudyConfig::new(21), 7),
        Err(Error::DegenerateRegression(_))
    ));
}

#[test]
fn default_study_fit() {
    let universe = generate_universe(&UniverseParams::default(), 7).unwrap();
    let out = lixi_vs_lix_study(&universe, &StudyConfig::new(21), 7).unwrap();
    assert!(out.report.r_squared >= 0.9, "{:?}", out.report);
}

#[test]
fn bar_files() {
    let bad = "date,open,high,low,close,volume\n2013-11-20,49.5,51,50,50,10000000\n";
    match parse_daily_bars(bad.as_bytes(), "XYZ") {
        Err(Error::AtLine { line: 2, .. }) => {}
        other => panic!("expected a line-2 invariant error, got {other:?}"),
    }

    let good = "date,open,high,low,close,volume\n2013-11-20,50,51,50,50,10000000\n";
    let bars = parse_daily_bars(good.as_bytes(), "XYZ").unwrap();
    assert_eq!(bars.len(), 1);
    assert!(close(lix_daily(&bars[0]).unwrap().value(), 8.69897, 5e-6));

    let empty = parse_daily_bars("date,open,high,low,close,volume\n".as_bytes(), "XYZ").unwrap();
    assert!(empty.is_empty());
    assert!(matches!(compute_adv(&empty, 20, T), Err(Error::EmptyDataset)));
}

#[test]
fn snapshot_files() {
    let text = "timestamp,side,level,price,volume\n0,B,1,99,1000\n0,A,1,101,1000\n";
    let snaps = parse_book_snapshots(text.as_bytes()).unwrap();
    assert_eq!(snaps.len(), 1);
    assert!(close(lixi_tau(&snaps[0]).unwrap().value(), 5.0, 1e-12));

    let gap = "timestamp,side,level,price,volume\n0,B,1,99,1000\n0,B,3,98,1000\n0,A,1,101,1000\n";
    assert!(matches!(
        parse_book_snapshots(gap.as_bytes()).map_err(|e| e.root().to_string()),
        Err(m) if m.contains("missing level 2")
    ));

    let crossed = "timestamp,side,level,price,volume\n0,B,1,101,1000\n0,A,1,100,1000\n";
    let err = parse_book_snapshots(crossed.as_bytes()).unwrap_err();
    assert!(matches!(err.root(), Error::CrossedBook { .. }));
}

#[test]
fn adv_examples() {
    let bars = |vols: &[f64]| -> Vec<DailyBar> {
        vols.iter()
            .enumerate()
            .map(|(i, &v)| ohlcv(18 + i as u32, 10.0, 11.0, 9.0, 10.0, v))
            .collect()
    };
    assert_eq!(compute_adv(&bars(&[10.0, 20.0, 30.0]), 3, T).unwrap().adv(), 20.0);
    assert_eq!(compute_adv(&bars(&[10.0, 0.0, 30.0]), 3, T).unwrap().adv(), 20.0);
    assert!(matches!(compute_adv(&bars(&[0.0, 0.0, 0.0]), 3, T), Err(Error::AllZeroVolume)));
}
