//! Synthetic trading sessions: a price path, linear cumulative volume, and
//! order-book snapshots whose weighted spread and depth scatter around
//! configured means.

use chrono::NaiveDate;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{DailyBar, IntradayWindow};
use crate::orderbook::{BookLevel, OrderBookSnapshot};
use crate::simlab::paths::{stream_rng, PathModel};

/// Upper clamp on a drawn relative spread; keeps every bid price positive.
const MAX_RELATIVE_SPREAD: f64 = 0.5;
const MIN_RELATIVE_SPREAD: f64 = 1e-8;

/// Book generator settings.
///
/// Depth and relative spread are log-normal around their means with the
/// given dispersions (standard deviation of the natural log).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BookParams {
    pub levels_per_side: usize,
    /// Total displayed shares, both sides.
    pub mean_depth: f64,
    pub depth_dispersion: f64,
    /// `(vwap_ask - vwap_bid) / mid`.
    pub mean_relative_spread: f64,
    pub spread_dispersion: f64,
    /// Snapshots per session, taken at uniformly spaced times.
    pub samples_per_day: usize,
}

impl Default for BookParams {
    fn default() -> Self {
        Self {
            levels_per_side: 5,
            mean_depth: 10_000.0,
            depth_dispersion: 0.3,
            mean_relative_spread: 0.002,
            spread_dispersion: 0.3,
            samples_per_day: 100,
        }
    }
}

impl BookParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.levels_per_side == 0 {
            return bad("book needs at least one level per side".into());
        }
        if !(self.mean_depth.is_finite() && self.mean_depth > 0.0) {
            return bad(format!("mean depth must be positive, got {}", self.mean_depth));
        }
        if !(self.mean_relative_spread.is_finite()
            && (MIN_RELATIVE_SPREAD..=MAX_RELATIVE_SPREAD).contains(&self.mean_relative_spread))
        {
            return bad(format!(
                "mean relative spread must lie in [{MIN_RELATIVE_SPREAD}, {MAX_RELATIVE_SPREAD}], got {}",
                self.mean_relative_spread
            ));
        }
        for (name, v) in [
            ("depth dispersion", self.depth_dispersion),
            ("spread dispersion", self.spread_dispersion),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("{name} must be non-negative, got {v}"));
            }
        }
        if self.samples_per_day == 0 {
            return bad("need at least one snapshot per day".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionParams {
    pub instrument_id: String,
    pub date: NaiveDate,
    pub initial_price: f64,
    pub daily_volume: f64,
    pub session_length: f64,
    pub book: BookParams,
}

impl SessionParams {
    fn validate(&self) -> Result<()> {
        if !(self.initial_price.is_finite() && self.initial_price > 0.0) {
            return Err(Error::InvalidParams(format!(
                "initial price must be positive, got {}",
                self.initial_price
            )));
        }
        if !(self.daily_volume.is_finite() && self.daily_volume >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "daily volume must be non-negative, got {}",
                self.daily_volume
            )));
        }
        if !(self.session_length.is_finite() && self.session_length > 0.0) {
            return Err(Error::InvalidParams(format!(
                "session length must be positive, got {}",
                self.session_length
            )));
        }
        self.book.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSession {
    pub bar: DailyBar,
    pub snapshots: Vec<OrderBookSnapshot>,
    pub windows: Vec<IntradayWindow>,
    pub prices: Vec<f64>,
}

/// Simulates one session. Path and books use separate streams of `seed`, so
/// changing book settings leaves the price path untouched.
pub fn synth_session(model: &PathModel, params: &SessionParams, seed: u64) -> Result<SyntheticSession> {
    params.validate()?;
    let n = model.steps_per_day();
    let prices = model.simulate_day(params.initial_price, &mut stream_rng(seed, 0));
    if let Some(p) = prices.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
        return Err(Error::InvalidParams(format!(
            "simulated price {p} is not positive; lower the volatility"
        )));
    }

    let (high, low) = extremes(&prices);
    let bar = DailyBar::new(
        params.instrument_id.clone(),
        params.date,
        prices[0],
        high,
        low,
        prices[n],
        params.daily_volume,
    )?;

    let mut book_rng = stream_rng(seed, 1);
    let samples = params.book.samples_per_day;
    let mut snapshots = Vec::with_capacity(samples);
    let mut windows = Vec::with_capacity(samples);
    let (mut hi, mut lo) = (prices[0], prices[0]);
    let mut scanned = 0;
    for k in 1..=samples {
        let idx = ((2 * k * n + samples) / (2 * samples)).max(1);
        for &p in &prices[scanned..=idx] {
            hi = hi.max(p);
            lo = lo.min(p);
        }
        scanned = idx;
        let frac = idx as f64 / n as f64;
        let elapsed = params.session_length * frac;
        windows.push(IntradayWindow::new(
            elapsed,
            params.session_length,
            params.daily_volume * frac,
            hi,
            lo,
            prices[idx],
        )?);
        snapshots.push(synth_book(elapsed, prices[idx], &params.book, &mut book_rng)?);
    }

    Ok(SyntheticSession {
        bar,
        snapshots,
        windows,
        prices,
    })
}

fn extremes(prices: &[f64]) -> (f64, f64) {
    prices
        .iter()
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(h, l), &p| (h.max(p), l.min(p)))
}

fn lognormal<R: Rng>(rng: &mut R, dispersion: f64) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    (dispersion * z).exp()
}

/// Builds a book around `mid` whose VWAP spread is exactly the drawn
/// relative spread times `mid`.
fn synth_book<R: Rng>(timestamp: f64, mid: f64, p: &BookParams, rng: &mut R) -> Result<OrderBookSnapshot> {
    let depth = p.mean_depth * lognormal(rng, p.depth_dispersion);
    let spread = (p.mean_relative_spread * lognormal(rng, p.spread_dispersion))
        .clamp(MIN_RELATIVE_SPREAD, MAX_RELATIVE_SPREAD);
    let bid_share = rng.gen_range(0.4..0.6);
    let levels = p.levels_per_side;

    // Distance from mid in arbitrary units: touch at 0.25, deepest level at 0.75.
    let offsets: Vec<f64> = (0..levels)
        .map(|i| {
            if levels == 1 {
                0.5
            } else {
                0.25 + 0.5 * i as f64 / (levels - 1) as f64
            }
        })
        .collect();
    let mut side = |total: f64| -> (Vec<f64>, f64) {
        let w: Vec<f64> = (0..levels).map(|_| rng.gen_range(0.5..1.5)).collect();
        let sum: f64 = w.iter().sum();
        let vols: Vec<f64> = w.iter().map(|x| total * x / sum).collect();
        let avg_offset = w.iter().zip(&offsets).map(|(x, o)| x * o).sum::<f64>() / sum;
        (vols, avg_offset)
    };
    let (bid_vols, bid_off) = side(depth * bid_share);
    let (ask_vols, ask_off) = side(depth * (1.0 - bid_share));
    let scale = spread * mid / (bid_off + ask_off);

    let bids = offsets
        .iter()
        .zip(&bid_vols)
        .map(|(o, &v)| BookLevel::new(mid - scale * o, v))
        .collect::<Result<Vec<_>>>()?;
    let asks = offsets
        .iter()
        .zip(&ask_vols)
        .map(|(o, &v)| BookLevel::new(mid + scale * o, v))
        .collect::<Result<Vec<_>>>()?;
    OrderBookSnapshot::new(timestamp, bids, asks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::lix_daily;
    use crate::orderbook::relative_spread;
    use crate::simlab::paths::PathKind;

    fn params() -> SessionParams {
        SessionParams {
            instrument_id: "SYN".into(),
            date: NaiveDate::from_ymd_opt(2013, 1, 28).unwrap(),
            initial_price: 100.0,
            daily_volume: 1e6,
            session_length: 30_600.0,
            book: BookParams::default(),
        }
    }

    fn gauss() -> PathModel {
        PathModel::new(PathKind::GaussianReturns, 1000, 0.0005, 0).unwrap()
    }

    #[test]
    fn same_seed_same_session() {
        let a = synth_session(&gauss(), &params(), 42).unwrap();
        let b = synth_session(&gauss(), &params(), 42).unwrap();
        assert_eq!(a, b);
        let c = synth_session(&gauss(), &params(), 43).unwrap();
        assert_ne!(a.prices, c.prices);
    }

    #[test]
    fn flat_path_surfaces_zero_range() {
        let flat = PathModel::new(PathKind::Constant, 100, 0.0, 0).unwrap();
        let s = synth_session(&flat, &params(), 1).unwrap();
        assert_eq!(s.bar.high(), s.bar.low());
        assert!(matches!(lix_daily(&s.bar), Err(Error::ZeroRange { .. })));
    }

    #[test]
    fn volume_is_linear_in_time() {
        let s = synth_session(&gauss(), &params(), 3).unwrap();
        let half = &s.windows[49];
        assert_eq!(half.elapsed(), 30_600.0 / 2.0);
        assert_eq!(half.cum_volume(), 1e6 / 2.0);
        let last = s.windows.last().unwrap();
        assert_eq!(last.cum_volume(), 1e6);
        assert_eq!(last.high(), s.bar.high());
        assert_eq!(last.low(), s.bar.low());
        assert_eq!(last.last_price(), s.bar.close());
    }

    #[test]
    fn book_spread_matches_draw_structure() {
        let mut p = params();
        p.book.spread_dispersion = 0.0;
        p.book.depth_dispersion = 0.0;
        let s = synth_session(&gauss(), &p, 8).unwrap();
        for snap in &s.snapshots {
            let rs = relative_spread(snap).unwrap();
            // mid is recomputed from the touch, which sits symmetrically around the path price
            assert!((rs - 0.002).abs() < 1e-12, "{rs}");
            let depth = snap.bid_volume() + snap.ask_volume();
            assert!((depth - 10_000.0).abs() < 1e-8);
            assert_eq!(snap.bids().len(), 5);
        }
    }

    #[test]
    fn invalid_params() {
        let mut p = params();
        p.book.mean_relative_spread = 0.9;
        assert!(matches!(synth_session(&gauss(), &p, 0), Err(Error::InvalidParams(_))));
        let mut p = params();
        p.initial_price = 0.0;
        assert!(synth_session(&gauss(), &p, 0).is_err());
        let mut p = params();
        p.book.levels_per_side = 0;
        assert!(synth_session(&gauss(), &p, 0).is_err());
        // additive walk that crosses zero
        let rw = PathModel::new(PathKind::ArithmeticRandomWalk, 1000, 50.0, 0).unwrap();
        assert!(synth_session(&rw, &params(), 0).is_err());
    }
}
