//! Model-scale comparison of averaged LIXI against averaged daily LIX across a
//! synthetic universe of instruments.
//!
//! Each instrument trades for `days` sessions. Its LIX is the arithmetic mean
//! of the daily LIX values (log scale); its LIXI is the arithmetic mean of the
//! LIXI values sampled uniformly through the last session, with ADV taken
//! from the trailing bars. Averaged LIXI is then regressed on averaged LIX.

use chrono::{Days, NaiveDate};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{compute_adv, DEFAULT_ADV_WINDOW};
use crate::measures::{lix_daily, ScalingParams};
use crate::orderbook::lixi_reading;
use crate::simlab::paths::{mix_seed, stream_rng, PathKind, PathModel};
use crate::simlab::regression::{ols, RegressionReport};
use crate::simlab::session::{synth_session, BookParams, SessionParams};

/// `sqrt(8 / pi)`: expected range of a unit-variance random walk over unit
/// time, in units of its standard deviation.
const EXPECTED_RANGE_FACTOR: f64 = 1.595_769_121_605_730_7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstrumentSpec {
    pub id: String,
    pub initial_price: f64,
    pub mean_daily_volume: f64,
    /// Standard deviation of log daily volume.
    pub volume_dispersion: f64,
    pub model: PathModel,
    pub book: BookParams,
}

/// Settings for [`generate_universe`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniverseParams {
    pub instruments: usize,
    /// Target LIX values are spread evenly over `[lix_min, lix_max]`.
    pub lix_min: f64,
    pub lix_max: f64,
    pub price_range: (f64, f64),
    /// Expected daily high-low range relative to price.
    pub daily_range: (f64, f64),
    /// Displayed book depth as a fraction of daily volume (log-uniform).
    pub depth_fraction: (f64, f64),
    /// Per-instrument standard deviation, in log10 units, of the book spread
    /// around the level consistent with the daily range.
    pub book_mismatch: f64,
    pub steps_per_day: usize,
    pub samples_per_day: usize,
    pub volume_dispersion: f64,
}

impl Default for UniverseParams {
    fn default() -> Self {
        Self {
            instruments: 50,
            lix_min: 5.0,
            lix_max: 10.0,
            price_range: (5.0, 500.0),
            daily_range: (0.01, 0.04),
            depth_fraction: (0.002, 0.05),
            book_mismatch: 0.2,
            steps_per_day: 1000,
            samples_per_day: 100,
            volume_dispersion: 0.3,
        }
    }
}

fn log_uniform<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        (rng.gen_range(lo.ln()..hi.ln())).exp()
    }
}

/// Builds a universe whose daily LIX targets span `[lix_min, lix_max]`.
///
/// Volume is set from the target, `V = 10^LIX * daily_range`. The book is
/// generated so that sweeping it costs what the same volume would move the
/// price over its ADV-equivalent time: relative spread
/// `daily_range * sqrt(depth / ADV)`, perturbed by `book_mismatch`.
pub fn generate_universe(p: &UniverseParams, seed: u64) -> Result<Vec<InstrumentSpec>> {
    if p.instruments == 0 {
        return Err(Error::InvalidParams("universe needs at least one instrument".into()));
    }
    if !(p.lix_min.is_finite() && p.lix_max.is_finite() && p.lix_min <= p.lix_max) {
        return Err(Error::InvalidParams(format!(
            "bad LIX span [{}, {}]",
            p.lix_min, p.lix_max
        )));
    }
    for (name, (lo, hi)) in [
        ("price range", p.price_range),
        ("daily range", p.daily_range),
        ("depth fraction", p.depth_fraction),
    ] {
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return Err(Error::InvalidParams(format!("bad {name} [{lo}, {hi}]")));
        }
    }
    let mut rng = stream_rng(seed, u64::MAX);
    let n = p.instruments;
    (0..n)
        .map(|i| {
            let target = if n == 1 {
                p.lix_min
            } else {
                p.lix_min + (p.lix_max - p.lix_min) * i as f64 / (n - 1) as f64
            };
            let price = log_uniform(&mut rng, p.price_range);
            let range = rng.gen_range(p.daily_range.0..=p.daily_range.1);
            let depth_fraction = log_uniform(&mut rng, p.depth_fraction);
            let mismatch: f64 = StandardNormal.sample(&mut rng);
            let volume = 10f64.powf(target) * range;
            let vol_per_step = range / (EXPECTED_RANGE_FACTOR * (p.steps_per_day as f64).sqrt());
            let spread = range * depth_fraction.sqrt() * 10f64.powf(p.book_mismatch * mismatch);
            let model = PathModel::new(
                PathKind::GaussianReturns,
                p.steps_per_day,
                vol_per_step,
                mix_seed(seed, i as u64),
            )?;
            Ok(InstrumentSpec {
                id: format!("SYN{i:03}"),
                initial_price: price,
                mean_daily_volume: volume,
                volume_dispersion: p.volume_dispersion,
                model,
                book: BookParams {
                    levels_per_side: 5,
                    mean_depth: depth_fraction * volume,
                    depth_dispersion: 0.3,
                    mean_relative_spread: spread.min(0.5),
                    spread_dispersion: 0.3,
                    samples_per_day: p.samples_per_day,
                },
            })
        })
        .collect()
}

/// Fixed conventions of the study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub days: usize,
    pub adv_window: u32,
    pub session_length: f64,
    pub alpha: f64,
}

impl StudyConfig {
    pub fn new(days: usize) -> Self {
        Self {
            days,
            adv_window: DEFAULT_ADV_WINDOW,
            session_length: 30_600.0,
            alpha: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyPoint {
    pub instrument: String,
    pub mean_lix: f64,
    pub mean_lixi: f64,
    pub lix_days: usize,
    pub lixi_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyOutcome {
    pub report: RegressionReport,
    pub points: Vec<StudyPoint>,
    /// Instruments with no usable day or snapshot.
    pub dropped: usize,
}

const FIRST_DAY: NaiveDate = match NaiveDate::from_ymd_opt(2013, 1, 2) {
    Some(d) => d,
    None => panic!("valid date"),
};

fn study_instrument(
    spec: &InstrumentSpec,
    index: usize,
    cfg: &StudyConfig,
    seed: u64,
) -> Result<Option<StudyPoint>> {
    let inst_seed = mix_seed(seed, index as u64);
    let mut volume_rng = stream_rng(inst_seed, u64::MAX);
    let mut price = spec.initial_price;
    let mut bars = Vec::with_capacity(cfg.days);
    let mut last_snapshots = Vec::new();
    for day in 0..cfg.days {
        let z: f64 = StandardNormal.sample(&mut volume_rng);
        let params = SessionParams {
            instrument_id: spec.id.clone(),
            date: FIRST_DAY + Days::new(day as u64),
            initial_price: price,
            daily_volume: spec.mean_daily_volume * (spec.volume_dispersion * z).exp(),
            session_length: cfg.session_length,
            book: spec.book.clone(),
        };
        let session = synth_session(&spec.model, &params, mix_seed(inst_seed, day as u64))?;
        price = session.bar.close();
        bars.push(session.bar);
        if day + 1 == cfg.days {
            last_snapshots = session.snapshots;
        }
    }

    let lix: Vec<f64> = bars
        .iter()
        .filter_map(|b| lix_daily(b).ok())
        .map(|l| l.value())
        .collect();
    let Ok(ctx) = compute_adv(&bars, cfg.adv_window, cfg.session_length) else {
        return Ok(None);
    };
    let scaling = ScalingParams::new(cfg.alpha)?;
    let lixi: Vec<f64> = last_snapshots
        .iter()
        .filter_map(|s| lixi_reading(s, &ctx, scaling).ok())
        .map(|r| r.lixi.value())
        .collect();
    if lix.is_empty() || lixi.is_empty() {
        return Ok(None);
    }
    Ok(Some(StudyPoint {
        instrument: spec.id.clone(),
        mean_lix: lix.iter().sum::<f64>() / lix.len() as f64,
        mean_lixi: lixi.iter().sum::<f64>() / lixi.len() as f64,
        lix_days: lix.len(),
        lixi_samples: lixi.len(),
    }))
}

/// Runs the study over `universe`. Instruments are simulated in parallel;
/// each draws from streams derived from `(seed, index)`, so the outcome does
/// not depend on scheduling.
pub fn lixi_vs_lix_study(universe: &[InstrumentSpec], cfg: &StudyConfig, seed: u64) -> Result<StudyOutcome> {
    if cfg.days == 0 {
        return Err(Error::InvalidParams("study needs at least one day".into()));
    }
    if universe.len() < 2 {
        return Err(Error::DegenerateRegression(format!(
            "need at least 2 instruments, got {}",
            universe.len()
        )));
    }
    let results: Vec<Option<StudyPoint>> = universe
        .par_iter()
        .enumerate()
        .map(|(i, spec)| study_instrument(spec, i, cfg, seed))
        .collect::<Result<_>>()?;
    let dropped = results.iter().filter(|r| r.is_none()).count();
    let points: Vec<StudyPoint> = results.into_iter().flatten().collect();
    let x: Vec<f64> = points.iter().map(|p| p.mean_lix).collect();
    let y: Vec<f64> = points.iter().map(|p| p.mean_lixi).collect();
    let report = ols(&x, &y)?;
    Ok(StudyOutcome {
        report,
        points,
        dropped,
    })
}
