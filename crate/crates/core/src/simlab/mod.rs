//! Synthetic-data lab: Monte Carlo estimation of the range-scaling exponent
//! and a model-scale LIXI versus LIX regression.
//!
//! All randomness comes from ChaCha8 streams keyed by `(seed, stream)`, so
//! results are reproducible and independent of the rayon thread count.

pub mod alpha;
pub mod paths;
pub mod regression;
pub mod session;
pub mod study;

pub use alpha::{decile_grid, estimate_alpha, AlphaEstimate};
pub use paths::{stream_rng, PathKind, PathModel};
pub use regression::{ols, RegressionReport};
pub use session::{synth_session, BookParams, SessionParams, SyntheticSession};
pub use study::{
    generate_universe, lixi_vs_lix_study, InstrumentSpec, StudyConfig, StudyOutcome, StudyPoint,
    UniverseParams,
};
