//! Execution-cost estimates implied by a liquidity index.
//!
//! The market is assumed resilient: after each fill the price returns to its
//! arrival level, and a buyer working an order through a price move `dP`
//! pays on average `dP / 2` per share over the arrival price.

use serde::Serialize;

use crate::error::{finite, Error, Result};
use crate::measures::{LiquidityIndex, ScalingParams};

/// An order of `shares` at arrival price `price`, executed over
/// `slice_interval` seconds of a `session_length`-second session.
///
/// For [`cost_sliced`] the interval is the time allowed per one-share slice;
/// for [`cost_single_shot`] it is the time for the whole order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExecutionPlan {
    shares: f64,
    price: f64,
    lix: LiquidityIndex,
    slice_interval: f64,
    session_length: f64,
    params: ScalingParams,
}

impl ExecutionPlan {
    pub fn new(
        shares: f64,
        price: f64,
        lix: LiquidityIndex,
        slice_interval: f64,
        session_length: f64,
        params: ScalingParams,
    ) -> Result<Self> {
        finite("shares", shares)?;
        finite("price", price)?;
        finite("slice_interval", slice_interval)?;
        finite("session_length", session_length)?;
        if shares <= 0.0 {
            return Err(Error::InvalidPlan(format!("shares must be positive, got {shares}")));
        }
        if price <= 0.0 {
            return Err(Error::InvalidPlan(format!("price must be positive, got {price}")));
        }
        if !(slice_interval > 0.0 && slice_interval <= session_length) {
            return Err(Error::InvalidPlan(format!(
                "slice interval {slice_interval} s must satisfy 0 < t <= session length {session_length} s"
            )));
        }
        Ok(Self {
            shares,
            price,
            lix,
            slice_interval,
            session_length,
            params,
        })
    }

    pub fn shares(&self) -> f64 {
        self.shares
    }
    pub fn price(&self) -> f64 {
        self.price
    }
    pub fn lix(&self) -> LiquidityIndex {
        self.lix
    }
    pub fn slice_interval(&self) -> f64 {
        self.slice_interval
    }
    pub fn session_length(&self) -> f64 {
        self.session_length
    }
    pub fn params(&self) -> ScalingParams {
        self.params
    }

    /// `(T / t)^(1 - alpha)`
    fn horizon_factor(&self) -> f64 {
        (self.session_length / self.slice_interval).powf(1.0 - self.params.alpha())
    }

    /// `10^-LIX * (T / t)^(1 - alpha)`: price range per unit of consideration.
    fn impact_per_consideration(&self) -> f64 {
        10f64.powf(-self.lix.value()) * self.horizon_factor()
    }
}

/// Price range produced by trading the whole order within the plan interval:
/// `n * P / 10^LIX * (T / t)^(1 - alpha)`.
pub fn price_impact(plan: &ExecutionPlan) -> f64 {
    plan.shares * plan.price * plan.impact_per_consideration()
}

/// Worst-case cost when the order is bought in one go:
/// `n^2 * P / (2 * 10^LIX) * (T / t)^(1 - alpha)`. Quadratic in `n`.
pub fn cost_single_shot(plan: &ExecutionPlan) -> f64 {
    0.5 * plan.shares * plan.shares * plan.price * plan.impact_per_consideration()
}

/// Cost of `n` one-share slices with full recovery between them:
/// `n * P / (2 * 10^LIX) * (T / t)^(1 - alpha)`.
pub fn cost_sliced(plan: &ExecutionPlan) -> f64 {
    0.5 * plan.shares * plan.price * plan.impact_per_consideration()
}

/// Sliced cost per unit of currency invested. Does not depend on `n` or `P`.
pub fn cost_per_unit(plan: &ExecutionPlan) -> f64 {
    cost_per_unit_for(plan.lix.value(), plan.slice_interval, plan.session_length, plan.params)
}

/// [`cost_per_unit`] for a bare LIX value, e.g. a basket constituent.
pub fn cost_per_unit_for(lix: f64, slice_interval: f64, session_length: f64, params: ScalingParams) -> f64 {
    10f64.powf(-lix) * 0.5 * (session_length / slice_interval).powf(1.0 - params.alpha())
}
