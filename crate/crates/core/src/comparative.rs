//! Classical volume-based liquidity ratios, for side-by-side comparison with
//! LIX: the Hui-Heubel ratio and Amihud's ILLIQ.

use crate::error::{Error, Result};
use crate::measures::DailyBar;

/// Trading days in the Hui-Heubel window.
pub const HUI_HEUBEL_DAYS: usize = 5;

/// Consecutive daily bars of one instrument plus its share count.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiDayWindow {
    bars: Vec<DailyBar>,
    shares_outstanding: f64,
}

impl MultiDayWindow {
    pub fn new(bars: Vec<DailyBar>, shares_outstanding: f64) -> Result<Self> {
        if bars.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if !(shares_outstanding.is_finite() && shares_outstanding > 0.0) {
            return Err(Error::InvalidParams(format!(
                "shares outstanding must be positive, got {shares_outstanding}"
            )));
        }
        for pair in bars.windows(2) {
            if pair[1].date() <= pair[0].date() {
                return Err(Error::InvariantViolation(format!(
                    "bar dates must be strictly increasing ({} then {})",
                    pair[0].date(),
                    pair[1].date()
                )));
            }
            if pair[1].instrument_id() != pair[0].instrument_id() {
                return Err(Error::InvariantViolation(format!(
                    "window mixes instruments `{}` and `{}`",
                    pair[0].instrument_id(),
                    pair[1].instrument_id()
                )));
            }
        }
        Ok(Self {
            bars,
            shares_outstanding,
        })
    }

    pub fn bars(&self) -> &[DailyBar] {
        &self.bars
    }

    pub fn shares_outstanding(&self) -> f64 {
        self.shares_outstanding
    }
}

/// Hui-Heubel ratio over the trailing five bars:
/// `((P_high - P_low) / P_low) / ($V / (M * E[P]))`.
///
/// `$V` is realised per day as `close * volume`; `E[P]` is the mean close.
/// Larger values mean a less liquid stock.
pub fn hui_heubel(w: &MultiDayWindow) -> Result<f64> {
    let n = w.bars.len();
    if n < HUI_HEUBEL_DAYS {
        return Err(Error::InsufficientData {
            needed: HUI_HEUBEL_DAYS,
            got: n,
        });
    }
    let window = &w.bars[n - HUI_HEUBEL_DAYS..];
    let high = window.iter().map(DailyBar::high).fold(f64::NEG_INFINITY, f64::max);
    let low = window.iter().map(DailyBar::low).fold(f64::INFINITY, f64::min);
    if high <= low {
        return Err(Error::ZeroRange { high, low });
    }
    if low <= 0.0 {
        return Err(Error::NonPositivePrice {
            field: "low",
            value: low,
        });
    }
    let dollar_volume: f64 = window.iter().map(|b| b.close() * b.volume()).sum();
    if dollar_volume <= 0.0 {
        return Err(Error::ZeroDollarVolume { date: None });
    }
    let mean_close = window.iter().map(DailyBar::close).sum::<f64>() / HUI_HEUBEL_DAYS as f64;
    let relative_range = (high - low) / low;
    Ok(relative_range / (dollar_volume / (w.shares_outstanding * mean_close)))
}

/// Per-day ILLIQ terms `|r_i| / $V_i`, one for each bar after the first.
pub fn amihud_contributions(w: &MultiDayWindow) -> Result<Vec<f64>> {
    if w.bars.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: w.bars.len(),
        });
    }
    w.bars
        .windows(2)
        .map(|pair| {
            let (prev, day) = (&pair[0], &pair[1]);
            if prev.close() <= 0.0 {
                return Err(Error::NonPositivePrice {
                    field: "close",
                    value: prev.close(),
                });
            }
            let dollar_volume = day.close() * day.volume();
            if dollar_volume <= 0.0 {
                return Err(Error::ZeroDollarVolume {
                    date: Some(day.date()),
                });
            }
            let ret = day.close() / prev.close() - 1.0;
            Ok(ret.abs() / dollar_volume)
        })
        .collect()
}

/// Amihud illiquidity: mean of `|r_i| / $V_i` over the return days, with
/// simple returns on closes.
pub fn amihud_illiq(w: &MultiDayWindow) -> Result<f64> {
    let terms = amihud_contributions(w)?;
    Ok(terms.iter().sum::<f64>() / terms.len() as f64)
}
