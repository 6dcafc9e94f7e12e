use std::fmt;

use chrono::NaiveDate;
use thiserror::Error;

/// Book side, used to locate errors in snapshots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Side {
    Bid,
    Ask,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Bid => f.write_str("bid"),
            Side::Ask => f.write_str("ask"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero price range: high ({high}) equals low ({low})")]
    ZeroRange { high: f64, low: f64 },

    #[error("zero volume in field `{field}`")]
    ZeroVolume { field: &'static str },

    #[error("non-positive price in field `{field}`: {value}")]
    NonPositivePrice { field: &'static str, value: f64 },

    #[error("non-finite value in field `{field}`")]
    NonFinite { field: &'static str },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid interval: elapsed {elapsed} s must satisfy 0 < t <= session length {session} s")]
    InvalidInterval { elapsed: f64, session: f64 },

    #[error("scaling exponent alpha must lie in (0, 1], got {0}")]
    InvalidAlpha(f64),

    #[error("{0} side of the book is empty")]
    EmptySide(Side),

    #[error("crossed book: ask price {ask} <= bid price {bid}")]
    CrossedBook { bid: f64, ask: f64 },

    #[error("average daily volume must be positive, got {0}")]
    InvalidAdv(f64),

    #[error("invalid execution plan: {0}")]
    InvalidPlan(String),

    #[error("basket has no positions")]
    EmptyBasket,

    #[error("basket weights sum to {sum}, expected 1 within 1e-9")]
    UnnormalizedWeights { sum: f64 },

    #[error("weight of position `{instrument}` must be positive, got {beta}")]
    NonPositiveWeight { instrument: String, beta: f64 },

    #[error("basket has no ETF liquidity leg")]
    MissingEtfLeg,

    #[error("cannot combine an empty list of liquidity values")]
    EmptyList,

    #[error("insufficient data: need at least {needed} bars, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("zero dollar volume{}", match .date { Some(d) => format!(" on {d}"), None => String::new() })]
    ZeroDollarVolume { date: Option<NaiveDate> },

    #[error("degenerate time grid: {0}")]
    DegenerateGrid(String),

    #[error("degenerate regression: {0}")]
    DegenerateRegression(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("every bar in the ADV window has zero volume")]
    AllZeroVolume,

    #[error("line {line}, column `{column}`: {message}")]
    Parse {
        line: u64,
        column: String,
        message: String,
    },

    #[error("line {line}: {source}")]
    AtLine {
        line: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("timestamp {timestamp}: {source}")]
    AtTimestamp {
        timestamp: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("timestamp {timestamp}: {side} levels are not contiguous, missing level {level}")]
    GapInLevels { timestamp: f64, side: Side, level: u32 },

    #[error("timestamp {timestamp}: {side} level {level} appears more than once")]
    DuplicateLevel { timestamp: f64, side: Side, level: u32 },

    #[error("{path}: {source}")]
    InFile {
        path: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at_line(self, line: u64) -> Self {
        Error::AtLine {
            line,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_timestamp(self, timestamp: f64) -> Self {
        Error::AtTimestamp {
            timestamp,
            source: Box::new(self),
        }
    }

    pub fn in_file(self, path: impl Into<String>) -> Self {
        Error::InFile {
            path: path.into(),
            source: Box::new(self),
        }
    }

    /// True for errors caused by the caller's input. I/O failures count only
    /// when the file cannot be found or read.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Io(e) => matches!(
                e.kind(),
                std::io::ErrorKind::NotFound
                    | std::io::ErrorKind::InvalidData
                    | std::io::ErrorKind::PermissionDenied
            ),
            Error::InFile { source, .. } => source.is_input_error(),
            _ => true,
        }
    }

    /// Innermost error, with file/line/timestamp wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLine { source, .. }
            | Error::AtTimestamp { source, .. }
            | Error::InFile { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn finite(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { field })
    }
}
