//! Liquidity index (LIX) toolkit.
//!
//! LIX measures liquidity as the base-10 log of the capital needed to move a
//! price by one currency unit: `log10(volume * price / (high - low))`. The
//! crate covers the daily measure, intraday readings scaled to the daily
//! horizon, the order-book based instantaneous measure LIXI, execution-cost
//! estimates, basket/ETF liquidity algebra, two classical comparison ratios
//! and a simulation lab.
//!
//! ```
//! use chrono::NaiveDate;
//! use lix_core::{lix_daily, DailyBar};
//!
//! let day = NaiveDate::from_ymd_opt(2013, 11, 20).unwrap();
//! let bar = DailyBar::new("XYZ", day, 50.0, 51.0, 50.0, 50.0, 1e7).unwrap();
//! assert!((lix_daily(&bar).unwrap().value() - 8.69897).abs() < 1e-5);
//! ```

pub mod comparative;
pub mod costmodel;
pub mod error;
pub mod io;
pub mod measures;
pub mod orderbook;
pub mod portfolio;
pub mod simlab;

pub use comparative::{amihud_illiq, hui_heubel, MultiDayWindow};
pub use costmodel::{cost_per_unit, cost_single_shot, cost_sliced, price_impact, ExecutionPlan};
pub use error::{Error, Result, Side};
pub use measures::{
    lix_daily, lix_intraday_raw, time_scale_to_daily, DailyBar, IntradayWindow, LiquidityIndex,
    LiquidityKind, ScalingParams,
};
pub use orderbook::{
    lixi, lixi_decomposed, lixi_reading, lixi_tau, relative_spread, side_vwap, AdvContext, BookLevel,
    LixiDecomposition, LixiReading, OrderBookSnapshot,
};
pub use portfolio::{basket_lix, basket_with_etf_lix, venue_combine, BasketPosition, BasketSpec};
