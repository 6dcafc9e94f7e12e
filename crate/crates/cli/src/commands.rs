//! One function per subcommand.

use std::path::Path;

use rayon::prelude::*;
use serde_json::{Map, Value};

use lix_core::comparative::amihud_contributions;
use lix_core::io::{compute_adv, read_book_snapshots, read_daily_bars, read_positions};
use lix_core::portfolio::{basket_lix, basket_with_etf_lix, BasketSpec};
use lix_core::simlab::{
    decile_grid, estimate_alpha, generate_universe, lixi_vs_lix_study, PathKind, PathModel, StudyConfig,
    UniverseParams,
};
use lix_core::{
    cost_per_unit, cost_single_shot, cost_sliced, hui_heubel, lix_daily, lix_intraday_raw, lixi_decomposed,
    lixi_reading, price_impact, time_scale_to_daily, ExecutionPlan, IntradayWindow, LiquidityIndex,
    LiquidityKind, MultiDayWindow, ScalingParams,
};

use crate::render::{round_json, Cell, Format, Table};
use crate::{
    BasketArgs, CalibrateArgs, CompareArgs, CostArgs, Ctx, Failure, IntradayArgs, LixArgs, LixiArgs, StudyArgs,
};

type CmdResult = Result<(), Failure>;

/// Names the offending flag in a validation error.
fn param<T>(flag: &str, r: lix_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::input(format!("--{flag}: {e}")))
}

fn finite_flag(flag: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::input(format!("--{flag}: value must be finite, got {v}")))
    }
}

fn alpha_flag(alpha: f64) -> Result<ScalingParams, Failure> {
    param("alpha", ScalingParams::new(alpha))
}

fn emit(ctx: &mut Ctx<'_>, table: &Table, default: Format) -> CmdResult {
    if table.has_non_finite() {
        return Err(Failure::internal("computation produced a non-finite value"));
    }
    let format = ctx.format.unwrap_or(default);
    table
        .render(ctx.out, format, ctx.precision)
        .map_err(|e| Failure::internal(format!("cannot write output: {e}")))
}

fn emit_json(ctx: &mut Ctx<'_>, value: &Value) -> CmdResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::internal(e.to_string()))?;
    writeln!(ctx.out, "{text}").map_err(|e| Failure::internal(format!("cannot write output: {e}")))
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

pub(crate) fn lix(ctx: &mut Ctx<'_>, a: LixArgs) -> CmdResult {
    let bars = read_daily_bars(&a.bars)?;
    let file = path_str(&a.bars);
    let mut table = Table::new(vec!["instrument", "date", "lix"]);

    if let Some(date) = a.date {
        let bar = bars
            .iter()
            .find(|b| b.date() == date)
            .ok_or_else(|| Failure::input(format!("{file}: no bar dated {date}")))?;
        let v = lix_daily(bar).map_err(|e| Failure::input(format!("{file}: {date}: {e}")))?;
        table.push(vec![bar.instrument_id().into(), date.to_string().into(), v.value().into()]);
        return emit(ctx, &table, Format::Table);
    }

    if bars.is_empty() {
        return Err(Failure::input(format!("{file}: no bars")));
    }
    let results: Vec<_> = ctx
        .pool
        .install(|| bars.par_iter().map(lix_daily).collect());
    let mut skipped = 0;
    for (bar, r) in bars.iter().zip(results) {
        match r {
            Ok(v) => table.push(vec![
                bar.instrument_id().into(),
                bar.date().to_string().into(),
                v.value().into(),
            ]),
            Err(e) => {
                skipped += 1;
                ctx.warn(format!("{file}: {}: {e}", bar.date()));
            }
        }
    }
    if skipped > 0 {
        ctx.warn(format!("skipped {skipped} of {} day(s)", bars.len()));
    }
    if table.rows.is_empty() {
        return Err(Failure::input(format!("{file}: no day has a computable LIX")));
    }
    emit(ctx, &table, Format::Table)
}

pub(crate) fn lix_intraday(ctx: &mut Ctx<'_>, a: IntradayArgs) -> CmdResult {
    let params = alpha_flag(a.alpha)?;
    for (flag, v) in [
        ("volume", a.volume),
        ("price", a.price),
        ("high", a.high),
        ("low", a.low),
        ("elapsed", a.elapsed),
        ("session", a.session),
    ] {
        finite_flag(flag, v)?;
    }
    let window = IntradayWindow::new(a.elapsed, a.session, a.volume, a.high, a.low, a.price)
        .map_err(|e| Failure::input(format!("intraday window: {e}")))?;
    let raw = lix_intraday_raw(&window).map_err(|e| Failure::input(format!("intraday window: {e}")))?;
    let scaled = param("elapsed", time_scale_to_daily(raw, a.elapsed, a.session, params))?;
    let table = Table::single(
        vec!["lix_raw", "lix", "alpha"],
        vec![raw.value().into(), scaled.value().into(), params.alpha().into()],
    );
    emit(ctx, &table, Format::Table)
}

pub(crate) fn lixi(ctx: &mut Ctx<'_>, a: LixiArgs) -> CmdResult {
    let params = alpha_flag(a.alpha)?;
    finite_flag("session", a.session)?;
    if a.decompose && params.alpha() != 0.5 {
        return Err(Failure::input("--decompose: the three-term split holds only for --alpha 0.5"));
    }
    let bars = read_daily_bars(&a.adv_from)?;
    let adv_file = path_str(&a.adv_from);
    let adv = compute_adv(&bars, a.adv_window, a.session)
        .map_err(|e| Failure::input(format!("{adv_file}: {e}")))?;
    let snapshots = read_book_snapshots(&a.snapshots)?;
    let file = path_str(&a.snapshots);
    if snapshots.is_empty() {
        return Err(Failure::input(format!("{file}: no snapshots")));
    }

    let mut table = if a.decompose {
        Table::new(vec!["timestamp", "spread_term", "depth_term", "adv_term", "lixi"])
    } else {
        Table::new(vec!["timestamp", "lixi", "lixi_tau", "relative_spread", "depth", "equivalent_time"])
    };
    let rows: Vec<lix_core::Result<Vec<Cell>>> = ctx.pool.install(|| {
        snapshots
            .par_iter()
            .map(|book| {
                let ts = Cell::Num(book.timestamp());
                if a.decompose {
                    let d = lixi_decomposed(book, &adv)?;
                    Ok(vec![ts, d.spread_term.into(), d.depth_term.into(), d.adv_term.into(), d.total.into()])
                } else {
                    let r = lixi_reading(book, &adv, params)?;
                    let depth = r.bid_volume + r.ask_volume;
                    Ok(vec![
                        ts,
                        r.lixi.value().into(),
                        r.lixi_tau.value().into(),
                        r.relative_spread.into(),
                        depth.into(),
                        adv.equivalent_time(depth).into(),
                    ])
                }
            })
            .collect()
    });
    let mut skipped = 0;
    for (book, r) in snapshots.iter().zip(rows) {
        match r {
            Ok(row) => table.push(row),
            Err(e) => {
                skipped += 1;
                ctx.warn(format!("{file}: timestamp {}: {e}", book.timestamp()));
            }
        }
    }
    if skipped > 0 {
        ctx.warn(format!("skipped {skipped} of {} snapshot(s)", snapshots.len()));
    }
    if table.rows.is_empty() {
        return Err(Failure::input(format!("{file}: no snapshot has a computable LIXI")));
    }
    emit(ctx, &table, Format::Table)
}

pub(crate) fn cost(ctx: &mut Ctx<'_>, a: CostArgs) -> CmdResult {
    let params = alpha_flag(a.alpha)?;
    let lix = param("lix", LiquidityIndex::new(a.lix, LiquidityKind::Daily))?;
    let plan = ExecutionPlan::new(a.shares, a.price, lix, a.slice_t, a.session, params)
        .map_err(|e| Failure::input(format!("execution plan (--shares/--price/--slice-t/--session): {e}")))?;
    let table = Table::single(
        vec!["impact", "cost_max", "cost_sliced", "cost_per_unit"],
        vec![
            price_impact(&plan).into(),
            cost_single_shot(&plan).into(),
            cost_sliced(&plan).into(),
            cost_per_unit(&plan).into(),
        ],
    );
    emit(ctx, &table, Format::Table)
}

pub(crate) fn basket(ctx: &mut Ctx<'_>, a: BasketArgs) -> CmdResult {
    let etf = a
        .etf_lix
        .map(|x| param("etf-lix", LiquidityIndex::new(x, LiquidityKind::Daily)))
        .transpose()?;
    let positions = read_positions(&a.positions)?;
    let file = path_str(&a.positions);
    let located = |e: lix_core::Error| Failure::input(format!("{file}: {e}"));
    let spec = if a.strict {
        BasketSpec::strict(positions, etf).map_err(located)?
    } else {
        BasketSpec::normalized(positions, etf).map_err(located)?
    };
    if (spec.raw_weight_sum() - 1.0).abs() > lix_core::portfolio::WEIGHT_TOLERANCE {
        ctx.warn(format!(
            "{file}: weights sum to {}; rescaled to 1",
            spec.raw_weight_sum()
        ));
    }
    let basket = basket_lix(&spec)?;
    let combined = if spec.etf_lix().is_some() {
        basket_with_etf_lix(&spec)?
    } else {
        basket
    };
    let table = Table::single(
        vec!["positions", "weight_sum", "basket_lix", "etf_lix", "lix"],
        vec![
            spec.positions().len().into(),
            spec.raw_weight_sum().into(),
            basket.value().into(),
            spec.etf_lix().map(|l| l.value()).into(),
            combined.value().into(),
        ],
    );
    emit(ctx, &table, Format::Table)
}

pub(crate) fn compare(ctx: &mut Ctx<'_>, a: CompareArgs) -> CmdResult {
    finite_flag("shares-outstanding", a.shares_outstanding)?;
    let bars = read_daily_bars(&a.bars)?;
    let file = path_str(&a.bars);
    if bars.is_empty() {
        return Err(Failure::input(format!("{file}: no bars")));
    }
    let instrument = bars[0].instrument_id().to_string();
    let days = bars.len();
    let lix_values: Vec<Option<f64>> = bars
        .iter()
        .map(|b| match lix_daily(b) {
            Ok(v) => Some(v.value()),
            Err(e) => {
                ctx.warn(format!("{file}: {}: lix: {e}", b.date()));
                None
            }
        })
        .collect();
    let window = param("shares-outstanding", MultiDayWindow::new(bars, a.shares_outstanding))?;
    let contributions = match amihud_contributions(&window) {
        Ok(c) => Some(c),
        Err(e) => {
            ctx.warn(format!("{file}: amihud: {e}"));
            None
        }
    };

    if a.per_day {
        let mut table = Table::new(vec!["date", "close", "volume", "lix", "amihud"]);
        for (i, bar) in window.bars().iter().enumerate() {
            let amihud = match (&contributions, i) {
                (Some(c), i) if i > 0 => Cell::Num(c[i - 1]),
                _ => Cell::Missing,
            };
            table.push(vec![
                bar.date().to_string().into(),
                bar.close().into(),
                bar.volume().into(),
                lix_values[i].into(),
                amihud,
            ]);
        }
        return emit(ctx, &table, Format::Table);
    }

    let hh = match hui_heubel(&window) {
        Ok(v) => Some(v),
        Err(e) => {
            ctx.warn(format!("{file}: hui_heubel: {e}"));
            None
        }
    };
    let illiq = contributions.map(|c| c.iter().sum::<f64>() / c.len() as f64);
    let valid: Vec<f64> = lix_values.iter().flatten().copied().collect();
    let mean_lix = (!valid.is_empty()).then(|| valid.iter().sum::<f64>() / valid.len() as f64);
    let table = Table::single(
        vec!["instrument", "days", "lix", "hui_heubel", "amihud"],
        vec![instrument.into(), days.into(), mean_lix.into(), hh.into(), illiq.into()],
    );
    emit(ctx, &table, Format::Table)
}

fn parse_model(spec: &str) -> Result<PathKind, Failure> {
    match spec {
        "rw" => Ok(PathKind::ArithmeticRandomWalk),
        "gauss" => Ok(PathKind::GaussianReturns),
        _ => spec
            .strip_prefix("t:")
            .and_then(|d| d.parse::<f64>().ok())
            .map(|dof| PathKind::StudentTReturns { dof })
            .ok_or_else(|| Failure::input(format!("--model: expected rw, gauss or t:<dof>, got `{spec}`"))),
    }
}

pub(crate) fn calibrate_alpha(ctx: &mut Ctx<'_>, a: CalibrateArgs) -> CmdResult {
    let kind = parse_model(&a.model)?;
    let rw = matches!(kind, PathKind::ArithmeticRandomWalk);
    let steps = a.steps.unwrap_or(if rw { 10_000 } else { 2_000 });
    let volatility = a.volatility.unwrap_or(if rw { 1.0 } else { 0.001 });
    let model = PathModel::new(kind, steps, volatility, a.seed)
        .map_err(|e| Failure::input(format!("--model/--steps/--volatility: {e}")))?;
    let grid = a.grid.unwrap_or_else(decile_grid);
    let est = ctx
        .pool
        .install(|| estimate_alpha(&model, a.paths, &grid))
        .map_err(|e| Failure::input(format!("--paths/--grid: {e}")))?;
    if !(est.alpha_hat.is_finite() && est.stderr.is_finite()) {
        return Err(Failure::internal("estimate is not finite"));
    }

    let p = ctx.precision;
    match ctx.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut m = Map::new();
            m.insert("model".into(), a.model.clone().into());
            m.insert("steps_per_day".into(), steps.into());
            m.insert("volatility_per_step".into(), round_json(volatility, p));
            m.insert("seed".into(), a.seed.into());
            m.insert("n_paths".into(), est.n_paths.into());
            m.insert("alpha_hat".into(), round_json(est.alpha_hat, p));
            m.insert("stderr".into(), round_json(est.stderr, p));
            m.insert(
                "time_grid".into(),
                est.time_grid.iter().map(|&f| round_json(f, p)).collect(),
            );
            m.insert(
                "mean_ranges".into(),
                est.mean_ranges.iter().map(|&r| round_json(r, p)).collect(),
            );
            emit_json(ctx, &Value::Object(m))
        }
        format => {
            let table = Table::single(
                vec!["model", "steps_per_day", "n_paths", "alpha_hat", "stderr"],
                vec![
                    a.model.as_str().into(),
                    steps.into(),
                    est.n_paths.into(),
                    est.alpha_hat.into(),
                    est.stderr.into(),
                ],
            );
            emit(ctx, &table, format)
        }
    }
}

pub(crate) fn study(ctx: &mut Ctx<'_>, a: StudyArgs) -> CmdResult {
    let mut params = UniverseParams {
        instruments: a.instruments,
        ..UniverseParams::default()
    };
    if let Some(s) = a.samples {
        params.samples_per_day = s;
    }
    if a.days == 0 {
        return Err(Failure::input("--days: need at least one day"));
    }
    let universe = generate_universe(&params, a.seed).map_err(|e| Failure::input(format!("--instruments: {e}")))?;
    let outcome = ctx
        .pool
        .install(|| lixi_vs_lix_study(&universe, &StudyConfig::new(a.days), a.seed))
        .map_err(|e| Failure::input(format!("study: {e}")))?;
    if outcome.dropped > 0 {
        ctx.warn(format!("dropped {} instrument(s) with no usable data", outcome.dropped));
    }

    let mut points = Table::new(vec!["instrument", "mean_lix", "mean_lixi", "lix_days", "lixi_samples"]);
    for pt in &outcome.points {
        points.push(vec![
            pt.instrument.as_str().into(),
            pt.mean_lix.into(),
            pt.mean_lixi.into(),
            pt.lix_days.into(),
            pt.lixi_samples.into(),
        ]);
    }
    if points.has_non_finite() {
        return Err(Failure::internal("study produced a non-finite value"));
    }
    if let Some(path) = &a.points {
        let file = std::fs::File::create(path)
            .map_err(|e| Failure::input(format!("--points {}: {e}", path.display())))?;
        let mut w = std::io::BufWriter::new(file);
        points
            .render(&mut w, Format::Csv, ctx.precision)
            .map_err(|e| Failure::input(format!("--points {}: {e}", path.display())))?;
    }

    let lix_span = outcome
        .points
        .iter()
        .map(|p| p.mean_lix)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let r = outcome.report;
    let summary = Table::single(
        vec![
            "slope",
            "intercept",
            "r_squared",
            "n_points",
            "dropped",
            "lix_min",
            "lix_max",
            "days",
            "seed",
        ],
        vec![
            r.slope.into(),
            r.intercept.into(),
            r.r_squared.into(),
            r.n_points.into(),
            outcome.dropped.into(),
            lix_span.0.into(),
            lix_span.1.into(),
            a.days.into(),
            Cell::Int(a.seed),
        ],
    );
    match ctx.format.unwrap_or(Format::Json) {
        Format::Csv => emit(ctx, &points, Format::Csv),
        format => emit(ctx, &summary, format),
    }
}
