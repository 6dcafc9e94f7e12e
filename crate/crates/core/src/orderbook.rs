//! Order-book snapshots and the instantaneous liquidity measure LIXI.
//!
//! LIXI prices the whole displayed book as if a single order swept it:
//! the gap between the volume-weighted ask and bid prices stands in for the
//! range, total displayed volume for the traded volume. The time-equivalence
//! correction `(1 - alpha) * log10(ADV / (V_bid + V_ask))` puts the value on
//! the daily LIX scale.

use serde::Serialize;

use crate::error::{finite, Error, Result, Side};
use crate::measures::{LiquidityIndex, LiquidityKind, ScalingParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BookLevel {
    price: f64,
    volume: f64,
}

impl BookLevel {
    pub fn new(price: f64, volume: f64) -> Result<Self> {
        finite("price", price)?;
        finite("volume", volume)?;
        if price <= 0.0 {
            return Err(Error::NonPositivePrice {
                field: "price",
                value: price,
            });
        }
        if volume <= 0.0 {
            return Err(Error::ZeroVolume { field: "volume" });
        }
        Ok(Self { price, volume })
    }

    pub fn price(&self) -> f64 {
        self.price
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }
}

/// Bid/ask ladder at one instant.
///
/// Bids are stored best (highest) first, asks best (lowest) first. Either side
/// may be empty; LIXI computations then fail with [`Error::EmptySide`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderBookSnapshot {
    timestamp: f64,
    bids: Vec<BookLevel>,
    asks: Vec<BookLevel>,
}

impl OrderBookSnapshot {
    pub fn new(timestamp: f64, bids: Vec<BookLevel>, asks: Vec<BookLevel>) -> Result<Self> {
        finite("timestamp", timestamp)?;
        for pair in bids.windows(2) {
            if pair[1].price >= pair[0].price {
                return Err(Error::InvariantViolation(format!(
                    "bid prices must be strictly descending ({} then {})",
                    pair[0].price, pair[1].price
                )));
            }
        }
        for pair in asks.windows(2) {
            if pair[1].price <= pair[0].price {
                return Err(Error::InvariantViolation(format!(
                    "ask prices must be strictly ascending ({} then {})",
                    pair[0].price, pair[1].price
                )));
            }
        }
        if let (Some(b), Some(a)) = (bids.first(), asks.first()) {
            if a.price <= b.price {
                return Err(Error::CrossedBook {
                    bid: b.price,
                    ask: a.price,
                });
            }
        }
        Ok(Self {
            timestamp,
            bids,
            asks,
        })
    }

    pub fn timestamp(&self) -> f64 {
        self.timestamp
    }
    pub fn bids(&self) -> &[BookLevel] {
        &self.bids
    }
    pub fn asks(&self) -> &[BookLevel] {
        &self.asks
    }

    pub fn bid_volume(&self) -> f64 {
        self.bids.iter().map(|l| l.volume).sum()
    }

    pub fn ask_volume(&self) -> f64 {
        self.asks.iter().map(|l| l.volume).sum()
    }

    pub fn best_bid(&self) -> Result<f64> {
        self.bids
            .first()
            .map(|l| l.price)
            .ok_or(Error::EmptySide(Side::Bid))
    }

    pub fn best_ask(&self) -> Result<f64> {
        self.asks
            .first()
            .map(|l| l.price)
            .ok_or(Error::EmptySide(Side::Ask))
    }

    /// Midpoint of the best bid and best ask.
    pub fn mid(&self) -> Result<f64> {
        Ok((self.best_ask()? + self.best_bid()?) / 2.0)
    }
}

/// Average daily volume used to turn displayed depth into an equivalent
/// trading time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdvContext {
    adv: f64,
    window_days: u32,
    session_length: f64,
}

impl AdvContext {
    pub fn new(adv: f64, window_days: u32, session_length: f64) -> Result<Self> {
        if !(adv.is_finite() && adv > 0.0) {
            return Err(Error::InvalidAdv(adv));
        }
        if window_days == 0 {
            return Err(Error::InvalidParams("ADV window must be at least one day".into()));
        }
        if !(session_length.is_finite() && session_length > 0.0) {
            return Err(Error::InvalidParams(format!(
                "session length must be positive, got {session_length}"
            )));
        }
        Ok(Self {
            adv,
            window_days,
            session_length,
        })
    }

    pub fn adv(&self) -> f64 {
        self.adv
    }
    pub fn window_days(&self) -> u32 {
        self.window_days
    }
    pub fn session_length(&self) -> f64 {
        self.session_length
    }

    /// Time the market needs, on average, to trade `volume` shares.
    pub fn equivalent_time(&self, volume: f64) -> f64 {
        self.session_length * volume / self.adv
    }
}

/// Volume-weighted average price of one side.
pub fn side_vwap(levels: &[BookLevel]) -> Result<f64> {
    side_vwap_of(levels, Side::Bid)
}

fn side_vwap_of(levels: &[BookLevel], side: Side) -> Result<f64> {
    if levels.is_empty() {
        return Err(Error::EmptySide(side));
    }
    let (pv, v) = levels
        .iter()
        .fold((0.0, 0.0), |(pv, v), l| (pv + l.price * l.volume, v + l.volume));
    // rounding can push the quotient just outside the quoted prices
    let (lo, hi) = levels
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), l| (lo.min(l.price), hi.max(l.price)));
    Ok((pv / v).clamp(lo, hi))
}

/// Quantities shared by every LIXI variant.
struct BookSummary {
    volume: f64,
    mid: f64,
    vwap_spread: f64,
}

fn summarize(book: &OrderBookSnapshot) -> Result<BookSummary> {
    let vwap_bid = side_vwap_of(&book.bids, Side::Bid)?;
    let vwap_ask = side_vwap_of(&book.asks, Side::Ask)?;
    if vwap_ask <= vwap_bid {
        return Err(Error::CrossedBook {
            bid: vwap_bid,
            ask: vwap_ask,
        });
    }
    Ok(BookSummary {
        volume: book.bid_volume() + book.ask_volume(),
        mid: book.mid()?,
        vwap_spread: vwap_ask - vwap_bid,
    })
}

/// Unscaled instantaneous liquidity `log10((V_bid + V_ask) * P_mid / (vwap_ask - vwap_bid))`.
pub fn lixi_tau(book: &OrderBookSnapshot) -> Result<LiquidityIndex> {
    let s = summarize(book)?;
    LiquidityIndex::new(
        (s.volume * s.mid / s.vwap_spread).log10(),
        LiquidityKind::Instantaneous,
    )
}

/// Instantaneous liquidity on the daily scale.
///
/// Displayed volume larger than ADV makes the correction negative; that is
/// not clamped.
pub fn lixi(
    book: &OrderBookSnapshot,
    ctx: &AdvContext,
    params: ScalingParams,
) -> Result<LiquidityIndex> {
    Ok(lixi_reading(book, ctx, params)?.lixi)
}

/// `(vwap_ask - vwap_bid) / P_mid`.
pub fn relative_spread(book: &OrderBookSnapshot) -> Result<f64> {
    let s = summarize(book)?;
    Ok(s.vwap_spread / s.mid)
}

/// LIXI together with the diagnostics that went into it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LixiReading {
    pub lixi: LiquidityIndex,
    pub lixi_tau: LiquidityIndex,
    pub relative_spread: f64,
    pub bid_volume: f64,
    pub ask_volume: f64,
    pub n_bid: usize,
    pub n_ask: usize,
}

/// Computes LIXI over each side's full ladder; `n_bid`/`n_ask` record how many
/// levels were used.
pub fn lixi_reading(
    book: &OrderBookSnapshot,
    ctx: &AdvContext,
    params: ScalingParams,
) -> Result<LixiReading> {
    let s = summarize(book)?;
    let tau = (s.volume * s.mid / s.vwap_spread).log10();
    let correction = (1.0 - params.alpha()) * (ctx.adv / s.volume).log10();
    Ok(LixiReading {
        lixi: LiquidityIndex::new(tau + correction, LiquidityKind::Instantaneous)?,
        lixi_tau: LiquidityIndex::new(tau, LiquidityKind::Instantaneous)?,
        relative_spread: s.vwap_spread / s.mid,
        bid_volume: book.bid_volume(),
        ask_volume: book.ask_volume(),
        n_bid: book.bids.len(),
        n_ask: book.asks.len(),
    })
}

/// LIXI at `alpha = 1/2` split into tightness, depth and ADV contributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LixiDecomposition {
    /// `-log10(relative_spread)`
    pub spread_term: f64,
    /// `log10(V_bid + V_ask) / 2`
    pub depth_term: f64,
    /// `log10(ADV) / 2`
    pub adv_term: f64,
    pub total: f64,
}

pub fn lixi_decomposed(book: &OrderBookSnapshot, ctx: &AdvContext) -> Result<LixiDecomposition> {
    let s = summarize(book)?;
    let spread_term = -(s.vwap_spread / s.mid).log10();
    let depth_term = 0.5 * s.volume.log10();
    let adv_term = 0.5 * ctx.adv.log10();
    let total = spread_term + depth_term + adv_term;
    finite("lixi", total)?;
    Ok(LixiDecomposition {
        spread_term,
        depth_term,
        adv_term,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn levels(raw: &[(f64, f64)]) -> Vec<BookLevel> {
        raw.iter().map(|&(p, v)| BookLevel::new(p, v).unwrap()).collect()
    }

    fn book(bids: &[(f64, f64)], asks: &[(f64, f64)]) -> OrderBookSnapshot {
        OrderBookSnapshot::new(0.0, levels(bids), levels(asks)).unwrap()
    }

    #[test]
    fn vwap_examples() {
        assert_eq!(side_vwap(&levels(&[(101.0, 1000.0)])).unwrap(), 101.0);
        assert_eq!(
            side_vwap(&levels(&[(101.0, 1000.0), (102.0, 3000.0)])).unwrap(),
            101.75
        );
        assert!(matches!(side_vwap(&[]), Err(Error::EmptySide(_))));
    }

    #[test]
    fn bid_vwap_divides_by_bid_volume() {
        // unequal sides: the bid average must not depend on ask volume
        let b = book(&[(99.0, 100.0), (98.0, 300.0)], &[(101.0, 5000.0)]);
        assert_eq!(side_vwap(b.bids()).unwrap(), 98.25);
        assert!((relative_spread(&b).unwrap() - 2.75 / 100.0).abs() < 1e-15);
    }

    #[test]
    fn lixi_tau_examples() {
        let b = book(&[(99.0, 1000.0)], &[(101.0, 1000.0)]);
        assert!((lixi_tau(&b).unwrap().value() - 5.0).abs() < 1e-12);

        let b = book(&[(99.5, 1.0)], &[(100.5, 1.0)]);
        assert!((lixi_tau(&b).unwrap().value() - 200f64.log10()).abs() < 1e-12);
        assert!((lixi_tau(&b).unwrap().value() - 2.30103).abs() < 1e-5);
    }

    #[test]
    fn crossed_and_empty_books() {
        let err = OrderBookSnapshot::new(
            0.0,
            levels(&[(100.0, 10.0)]),
            levels(&[(100.0, 10.0)]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::CrossedBook { .. }));

        let b = OrderBookSnapshot::new(0.0, vec![], levels(&[(100.0, 10.0)])).unwrap();
        assert!(matches!(lixi_tau(&b), Err(Error::EmptySide(Side::Bid))));
        let b = OrderBookSnapshot::new(0.0, levels(&[(100.0, 10.0)]), vec![]).unwrap();
        assert!(matches!(lixi_tau(&b), Err(Error::EmptySide(Side::Ask))));
    }

    #[test]
    fn ladder_ordering_enforced() {
        assert!(OrderBookSnapshot::new(
            0.0,
            levels(&[(99.0, 1.0), (99.0, 1.0)]),
            levels(&[(101.0, 1.0)])
        )
        .is_err());
        assert!(OrderBookSnapshot::new(
            0.0,
            levels(&[(99.0, 1.0)]),
            levels(&[(101.0, 1.0), (100.5, 1.0)])
        )
        .is_err());
        assert!(BookLevel::new(0.0, 1.0).is_err());
        assert!(BookLevel::new(1.0, 0.0).is_err());
    }

    #[test]
    fn lixi_examples() {
        let b = book(&[(99.0, 1000.0)], &[(101.0, 1000.0)]);
        let ctx = AdvContext::new(4000.0, 20, 23_400.0).unwrap();
        let v = lixi(&b, &ctx, ScalingParams::RANDOM_WALK).unwrap().value();
        assert!((v - (5.0 + 0.5 * 2f64.log10())).abs() < 1e-12);
        assert!((v - 5.150515).abs() < 1e-6);

        let ctx = AdvContext::new(2000.0, 20, 23_400.0).unwrap();
        let v = lixi(&b, &ctx, ScalingParams::new(0.6).unwrap()).unwrap();
        assert_eq!(v.value(), lixi_tau(&b).unwrap().value());

        // book deeper than ADV: negative correction
        let ctx = AdvContext::new(500.0, 20, 23_400.0).unwrap();
        let v = lixi(&b, &ctx, ScalingParams::RANDOM_WALK).unwrap().value();
        assert!(v < 5.0);

        assert!(matches!(AdvContext::new(0.0, 20, 1.0), Err(Error::InvalidAdv(_))));
        assert!(matches!(AdvContext::new(-3.0, 20, 1.0), Err(Error::InvalidAdv(_))));
    }

    #[test]
    fn relative_spread_examples() {
        let b = book(&[(99.0, 1000.0)], &[(101.0, 1000.0)]);
        assert!((relative_spread(&b).unwrap() - 0.02).abs() < 1e-15);
        let b = book(&[(99.99, 1.0)], &[(100.01, 1.0)]);
        assert!((relative_spread(&b).unwrap() - 0.0002).abs() < 1e-12);
    }

    #[test]
    fn decomposition_examples() {
        let b = book(&[(99.0, 1000.0)], &[(101.0, 1000.0)]);
        let ctx = AdvContext::new(4000.0, 20, 23_400.0).unwrap();
        let d = lixi_decomposed(&b, &ctx).unwrap();
        assert!((d.spread_term - 1.69897).abs() < 1e-5);
        assert!((d.depth_term - 1.650515).abs() < 1e-6);
        assert!((d.adv_term - 1.80103).abs() < 1e-5);
        assert!((d.total - 5.150515).abs() < 1e-6);
        let direct = lixi(&b, &ctx, ScalingParams::RANDOM_WALK).unwrap().value();
        assert!((d.total - direct).abs() < 1e-12);

        let b = book(&[(0.5, 10.0)], &[(1.5, 10.0)]);
        let ctx = AdvContext::new(20.0, 20, 23_400.0).unwrap();
        let d = lixi_decomposed(&b, &ctx).unwrap();
        assert_eq!(d.spread_term, 0.0);
        assert_eq!(d.depth_term, 0.5 * 20f64.log10());
        assert_eq!(d.adv_term, 0.5 * 20f64.log10());
    }

    #[test]
    fn reading_records_depths() {
        let b = book(&[(99.0, 10.0), (98.0, 10.0), (97.0, 5.0)], &[(101.0, 7.0)]);
        let ctx = AdvContext::new(1e4, 20, 23_400.0).unwrap();
        let r = lixi_reading(&b, &ctx, ScalingParams::RANDOM_WALK).unwrap();
        assert_eq!((r.n_bid, r.n_ask), (3, 1));
        assert_eq!(r.bid_volume, 25.0);
        assert_eq!(r.ask_volume, 7.0);
        assert_eq!(ctx.equivalent_time(32.0), 23_400.0 * 32.0 / 1e4);
    }
}
