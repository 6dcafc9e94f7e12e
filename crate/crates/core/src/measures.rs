//! Daily and intraday liquidity index, plus the time-scaling rule that maps
//! an intraday reading onto the daily scale.
//!
//! LIX is the base-10 log of consideration over price range:
//! `log10(volume * price / (high - low))`. A value of 8.7 means roughly
//! 10^8.7 units of quote currency are needed to move the price by one unit.

use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};

/// Which measurement a [`LiquidityIndex`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiquidityKind {
    Daily,
    /// Intraday reading before time scaling; not comparable across days.
    IntradayRaw,
    IntradayScaled,
    Instantaneous,
    Basket,
    BasketWithEtf,
    VenueCombined,
}

impl fmt::Display for LiquidityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LiquidityKind::Daily => "daily",
            LiquidityKind::IntradayRaw => "intraday_raw",
            LiquidityKind::IntradayScaled => "intraday_scaled",
            LiquidityKind::Instantaneous => "instantaneous",
            LiquidityKind::Basket => "basket",
            LiquidityKind::BasketWithEtf => "basket_with_etf",
            LiquidityKind::VenueCombined => "venue_combined",
        };
        f.write_str(s)
    }
}

/// Dimensionless base-10 log liquidity value. Always finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiquidityIndex {
    value: f64,
    kind: LiquidityKind,
}

impl LiquidityIndex {
    pub fn new(value: f64, kind: LiquidityKind) -> Result<Self> {
        finite("lix", value)?;
        Ok(Self { value, kind })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn kind(&self) -> LiquidityKind {
        self.kind
    }
}

/// Exponent governing how the price range grows with elapsed time.
///
/// 0.5 for a random walk; values somewhat above that (0.6 is common) account
/// for fat-tailed returns. `alpha = 1` is accepted and turns time scaling into
/// the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingParams {
    alpha: f64,
}

impl ScalingParams {
    pub const RANDOM_WALK: ScalingParams = ScalingParams { alpha: 0.5 };

    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Default for ScalingParams {
    fn default() -> Self {
        Self::RANDOM_WALK
    }
}

/// One trading day of OHLC prices and share volume.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DailyBar {
    instrument_id: String,
    date: NaiveDate,
    open: f64,
    high: f64,
    low: f64,
    close: f64,
    volume: f64,
}

impl DailyBar {
    pub fn new(
        instrument_id: impl Into<String>,
        date: NaiveDate,
        open: f64,
        high: f64,
        low: f64,
        close: f64,
        volume: f64,
    ) -> Result<Self> {
        finite("open", open)?;
        finite("high", high)?;
        finite("low", low)?;
        finite("close", close)?;
        finite("volume", volume)?;
        if low > high {
            return Err(Error::InvariantViolation(format!(
                "low ({low}) is above high ({high})"
            )));
        }
        if open < low || open > high {
            return Err(Error::InvariantViolation(format!(
                "open ({open}) outside [low, high] = [{low}, {high}]"
            )));
        }
        if close < low || close > high {
            return Err(Error::InvariantViolation(format!(
                "close ({close}) outside [low, high] = [{low}, {high}]"
            )));
        }
        if volume < 0.0 {
            return Err(Error::InvariantViolation(format!(
                "volume ({volume}) is negative"
            )));
        }
        Ok(Self {
            instrument_id: instrument_id.into(),
            date,
            open,
            high,
            low,
            close,
            volume,
        })
    }

    pub fn instrument_id(&self) -> &str {
        &self.instrument_id
    }
    pub fn date(&self) -> NaiveDate {
        self.date
    }
    pub fn open(&self) -> f64 {
        self.open
    }
    pub fn high(&self) -> f64 {
        self.high
    }
    pub fn low(&self) -> f64 {
        self.low
    }
    pub fn close(&self) -> f64 {
        self.close
    }
    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn range(&self) -> f64 {
        self.high - self.low
    }
}

/// Cumulative trading activity over the first `elapsed` seconds of a session.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntradayWindow {
    elapsed: f64,
    session_length: f64,
    cum_volume: f64,
    high: f64,
    low: f64,
    last_price: f64,
}

impl IntradayWindow {
    pub fn new(
        elapsed: f64,
        session_length: f64,
        cum_volume: f64,
        high: f64,
        low: f64,
        last_price: f64,
    ) -> Result<Self> {
        finite("elapsed", elapsed)?;
        finite("session_length", session_length)?;
        finite("cum_volume", cum_volume)?;
        finite("high", high)?;
        finite("low", low)?;
        finite("last_price", last_price)?;
        check_interval(elapsed, session_length)?;
        if !(low <= last_price && last_price <= high) {
            return Err(Error::InvariantViolation(format!(
                "last price ({last_price}) outside [low, high] = [{low}, {high}]"
            )));
        }
        if cum_volume < 0.0 {
            return Err(Error::InvariantViolation(format!(
                "cumulative volume ({cum_volume}) is negative"
            )));
        }
        Ok(Self {
            elapsed,
            session_length,
            cum_volume,
            high,
            low,
            last_price,
        })
    }

    pub fn elapsed(&self) -> f64 {
        self.elapsed
    }
    pub fn session_length(&self) -> f64 {
        self.session_length
    }
    pub fn cum_volume(&self) -> f64 {
        self.cum_volume
    }
    pub fn high(&self) -> f64 {
        self.high
    }
    pub fn low(&self) -> f64 {
        self.low
    }
    pub fn last_price(&self) -> f64 {
        self.last_price
    }
}

fn check_interval(elapsed: f64, session: f64) -> Result<()> {
    if elapsed > 0.0 && elapsed <= session {
        Ok(())
    } else {
        Err(Error::InvalidInterval { elapsed, session })
    }
}

/// `log10(volume * price / (high - low))` with the shared error checks.
fn log_consideration_over_range(
    volume: f64,
    price: f64,
    high: f64,
    low: f64,
    volume_field: &'static str,
    price_field: &'static str,
) -> Result<f64> {
    if high <= low {
        return Err(Error::ZeroRange { high, low });
    }
    if volume <= 0.0 {
        return Err(Error::ZeroVolume {
            field: volume_field,
        });
    }
    if price <= 0.0 {
        return Err(Error::NonPositivePrice {
            field: price_field,
            value: price,
        });
    }
    Ok((volume * price / (high - low)).log10())
}

/// Daily liquidity index of one bar.
pub fn lix_daily(bar: &DailyBar) -> Result<LiquidityIndex> {
    let v = log_consideration_over_range(
        bar.volume, bar.close, bar.high, bar.low, "volume", "close",
    )?;
    LiquidityIndex::new(v, LiquidityKind::Daily)
}

/// Unscaled intraday liquidity over `[0, elapsed]`, priced at the last trade.
///
/// The result is [`LiquidityKind::IntradayRaw`]; pass it through
/// [`time_scale_to_daily`] before comparing with daily values.
pub fn lix_intraday_raw(w: &IntradayWindow) -> Result<LiquidityIndex> {
    let v = log_consideration_over_range(
        w.cum_volume,
        w.last_price,
        w.high,
        w.low,
        "cum_volume",
        "last_price",
    )?;
    LiquidityIndex::new(v, LiquidityKind::IntradayRaw)
}

/// Maps an intraday reading taken after `elapsed` seconds of a
/// `session_length`-second session onto the daily scale.
///
/// Volume is taken to grow linearly in time and the range as `t^alpha`,
/// which adds `(1 - alpha) * log10(T / t)`.
pub fn time_scale_to_daily(
    lix_t: LiquidityIndex,
    elapsed: f64,
    session_length: f64,
    params: ScalingParams,
) -> Result<LiquidityIndex> {
    finite("elapsed", elapsed)?;
    finite("session_length", session_length)?;
    check_interval(elapsed, session_length)?;
    let correction = (1.0 - params.alpha) * (session_length / elapsed).log10();
    LiquidityIndex::new(lix_t.value + correction, LiquidityKind::IntradayScaled)
}
