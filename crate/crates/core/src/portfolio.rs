//! Liquidity algebra for baskets, multi-venue instruments and ETFs.
//!
//! Basket liquidity is the LIX of a single instrument whose per-currency-unit
//! trading cost matches that of the basket:
//! `10^-LIX_basket = sum_i beta_i * 10^-LIX_i`. Non-logged liquidities of the
//! same instrument on several venues add, which gives the ETF rule once the
//! basket is treated as one more venue for the fund.

use serde::Serialize;

use crate::error::{finite, Error, Result};
use crate::measures::{LiquidityIndex, LiquidityKind};

/// Largest tolerated `|sum(beta) - 1|` in strict mode.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasketPosition {
    instrument_id: String,
    beta: f64,
    lix: LiquidityIndex,
}

impl BasketPosition {
    pub fn new(instrument_id: impl Into<String>, beta: f64, lix: LiquidityIndex) -> Result<Self> {
        let instrument_id = instrument_id.into();
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::NonPositiveWeight {
                instrument: instrument_id,
                beta,
            });
        }
        Ok(Self {
            instrument_id,
            beta,
            lix,
        })
    }

    pub fn instrument_id(&self) -> &str {
        &self.instrument_id
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn lix(&self) -> LiquidityIndex {
        self.lix
    }
}

/// Money-weighted positions, weights summing to one, with an optional
/// liquidity leg for the ETF traded as its own security.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasketSpec {
    positions: Vec<BasketPosition>,
    etf_lix: Option<LiquidityIndex>,
    raw_weight_sum: f64,
}

impl BasketSpec {
    /// Rejects weights that do not already sum to one within
    /// [`WEIGHT_TOLERANCE`].
    pub fn strict(positions: Vec<BasketPosition>, etf_lix: Option<LiquidityIndex>) -> Result<Self> {
        let sum = weight_sum(&positions)?;
        if (sum - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::UnnormalizedWeights { sum });
        }
        Ok(Self {
            positions,
            etf_lix,
            raw_weight_sum: sum,
        })
    }

    /// Divides every weight by their sum. [`BasketSpec::raw_weight_sum`]
    /// keeps the original sum so callers can warn about it.
    pub fn normalized(
        mut positions: Vec<BasketPosition>,
        etf_lix: Option<LiquidityIndex>,
    ) -> Result<Self> {
        let sum = weight_sum(&positions)?;
        for p in &mut positions {
            p.beta /= sum;
        }
        Ok(Self {
            positions,
            etf_lix,
            raw_weight_sum: sum,
        })
    }

    pub fn positions(&self) -> &[BasketPosition] {
        &self.positions
    }

    pub fn etf_lix(&self) -> Option<LiquidityIndex> {
        self.etf_lix
    }

    pub fn raw_weight_sum(&self) -> f64 {
        self.raw_weight_sum
    }

    pub fn was_normalized(&self) -> bool {
        (self.raw_weight_sum - 1.0).abs() > WEIGHT_TOLERANCE
    }

    pub fn with_etf_lix(mut self, etf_lix: Option<LiquidityIndex>) -> Self {
        self.etf_lix = etf_lix;
        self
    }
}

fn weight_sum(positions: &[BasketPosition]) -> Result<f64> {
    if positions.is_empty() {
        return Err(Error::EmptyBasket);
    }
    Ok(positions.iter().map(|p| p.beta).sum())
}

/// `log10(sum_i 10^x_i)`, rescaled around the largest exponent so it neither
/// overflows nor underflows. `None` for an empty input.
pub fn log10_sum_pow10<I>(exponents: I) -> Option<f64>
where
    I: IntoIterator<Item = f64>,
    I::IntoIter: Clone,
{
    let iter = exponents.into_iter();
    let max = iter.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return None;
    }
    let scaled: f64 = iter.map(|x| 10f64.powf(x - max)).sum();
    Some(max + scaled.log10())
}

/// `-log10(sum_i beta_i / 10^LIX_i)`. Any ETF leg on the spec is ignored.
pub fn basket_lix(spec: &BasketSpec) -> Result<LiquidityIndex> {
    let v = basket_value(spec)?;
    LiquidityIndex::new(v, LiquidityKind::Basket)
}

fn basket_value(spec: &BasketSpec) -> Result<f64> {
    let lse = log10_sum_pow10(
        spec.positions
            .iter()
            .map(|p| p.beta.log10() - p.lix.value()),
    )
    .ok_or(Error::EmptyBasket)?;
    finite("basket_lix", -lse)
}

/// `log10(1 / sum_i(beta_i / 10^LIX_i) + 10^LIX_ETF)`: the basket counted as
/// one more venue for the ETF.
pub fn basket_with_etf_lix(spec: &BasketSpec) -> Result<LiquidityIndex> {
    let etf = spec.etf_lix.ok_or(Error::MissingEtfLeg)?;
    let basket = basket_value(spec)?;
    let v = log10_sum_pow10([basket, etf.value()]).ok_or(Error::EmptyList)?;
    LiquidityIndex::new(v, LiquidityKind::BasketWithEtf)
}

/// `log10(sum_i 10^LIX_i)`: one instrument traded on several venues sharing
/// price and range.
pub fn venue_combine(values: &[LiquidityIndex]) -> Result<LiquidityIndex> {
    let v = log10_sum_pow10(values.iter().map(|l| l.value())).ok_or(Error::EmptyList)?;
    LiquidityIndex::new(v, LiquidityKind::VenueCombined)
}
