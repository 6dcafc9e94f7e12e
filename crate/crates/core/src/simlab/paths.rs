use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of price steps in a simulated day.
pub const MIN_STEPS_PER_DAY: usize = 10;

/// Shape of the per-step price increments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PathKind {
    /// Additive `+/- volatility_per_step` coin-flip steps.
    ArithmeticRandomWalk,
    /// Log-normal price: log returns `N(0, volatility_per_step^2)`.
    GaussianReturns,
    /// Log returns drawn from Student's t with `dof` degrees of freedom,
    /// rescaled to standard deviation `volatility_per_step`.
    StudentTReturns { dof: f64 },
    /// Deterministic additive drift of `volatility_per_step` per step.
    LinearDrift,
    /// Price never moves.
    Constant,
}

impl PathKind {
    fn is_multiplicative(&self) -> bool {
        matches!(self, PathKind::GaussianReturns | PathKind::StudentTReturns { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathModel {
    kind: PathKind,
    steps_per_day: usize,
    volatility_per_step: f64,
    seed: u64,
}

impl PathModel {
    pub fn new(kind: PathKind, steps_per_day: usize, volatility_per_step: f64, seed: u64) -> Result<Self> {
        if steps_per_day < MIN_STEPS_PER_DAY {
            return Err(Error::InvalidParams(format!(
                "steps per day must be at least {MIN_STEPS_PER_DAY}, got {steps_per_day}"
            )));
        }
        if !matches!(kind, PathKind::Constant) && !(volatility_per_step.is_finite() && volatility_per_step > 0.0) {
            return Err(Error::InvalidParams(format!(
                "volatility per step must be positive, got {volatility_per_step}"
            )));
        }
        if let PathKind::StudentTReturns { dof } = kind {
            if !(dof.is_finite() && dof > 2.0) {
                return Err(Error::InvalidParams(format!(
                    "Student t degrees of freedom must exceed 2, got {dof}"
                )));
            }
        }
        Ok(Self {
            kind,
            steps_per_day,
            volatility_per_step,
            seed,
        })
    }

    pub fn kind(&self) -> PathKind {
        self.kind
    }
    pub fn steps_per_day(&self) -> usize {
        self.steps_per_day
    }
    pub fn volatility_per_step(&self) -> f64 {
        self.volatility_per_step
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// Feeds `steps` increments of the driving process to `f`.
    ///
    /// For multiplicative kinds the increments are log returns.
    pub(crate) fn for_each_increment<R: Rng>(&self, rng: &mut R, steps: usize, mut f: impl FnMut(f64)) {
        let vol = self.volatility_per_step;
        match self.kind {
            PathKind::ArithmeticRandomWalk => {
                let mut remaining = steps;
                while remaining > 0 {
                    let bits: u64 = rng.gen();
                    let take = remaining.min(64);
                    for b in 0..take {
                        f(if (bits >> b) & 1 == 1 { vol } else { -vol });
                    }
                    remaining -= take;
                }
            }
            PathKind::GaussianReturns => {
                for _ in 0..steps {
                    let z: f64 = StandardNormal.sample(rng);
                    f(vol * z);
                }
            }
            PathKind::StudentTReturns { dof } => {
                let t = StudentT::new(dof).expect("dof validated at construction");
                let scale = vol * ((dof - 2.0) / dof).sqrt();
                for _ in 0..steps {
                    f(scale * t.sample(rng));
                }
            }
            PathKind::LinearDrift => (0..steps).for_each(|_| f(vol)),
            PathKind::Constant => (0..steps).for_each(|_| f(0.0)),
        }
    }

    /// Maps the accumulated driving process to a price.
    pub(crate) fn price(&self, initial_price: f64, x: f64) -> f64 {
        if self.kind.is_multiplicative() {
            initial_price * x.exp()
        } else {
            initial_price + x
        }
    }

    /// One day of prices, `steps_per_day + 1` points starting at `initial_price`.
    pub fn simulate_day<R: Rng>(&self, initial_price: f64, rng: &mut R) -> Vec<f64> {
        let mut prices = Vec::with_capacity(self.steps_per_day + 1);
        prices.push(initial_price);
        let mut x = 0.0;
        self.for_each_increment(rng, self.steps_per_day, |dx| {
            x += dx;
            prices.push(self.price(initial_price, x));
        });
        prices
    }
}

/// Counter-based stream: the same `(seed, stream)` always yields the same
/// sequence, independently of any other stream.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finaliser, used to derive child seeds.
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
