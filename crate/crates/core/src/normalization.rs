//! Maps from `[0, inf)` onto `[0, 1)` anchored at `0 -> 0`, plus a sampled
//! check that `[0, 1]` is closed under multiplication while `(1, inf)` grows
//! under squaring.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest double strictly below 1. Every map saturates here so the range
/// stays `[0, 1)` even where `1 - e^(-t)` rounds to 1.
pub const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NormalizationMap {
    /// `1 - e^(-t)`; composed with `|ln(y/(xz))|` this is Kii.
    Exponential,
    /// `2 / (1 + e^(-k t)) - 1`.
    Logistic { k: f64 },
    /// `(e^(-b e^(-c t)) - e^(-b)) / (1 - e^(-b))`.
    Gompertz { b: f64, c: f64 },
}

impl NormalizationMap {
    pub fn logistic(k: f64) -> Result<Self> {
        positive("k", k)?;
        Ok(Self::Logistic { k })
    }

    pub fn gompertz(b: f64, c: f64) -> Result<Self> {
        positive("b", b)?;
        positive("c", c)?;
        Ok(Self::Gompertz { b, c })
    }

    /// All kinds with their default parameters.
    pub fn defaults() -> [Self; 3] {
        [
            Self::Exponential,
            Self::Logistic { k: 1.0 },
            Self::Gompertz { b: 1.0, c: 1.0 },
        ]
    }

    pub fn apply(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::NonFiniteInput { value: t });
        }
        if t < 0.0 {
            return Err(Error::NegativeInput { value: t });
        }
        let v = match *self {
            Self::Exponential => -(-t).exp_m1(),
            Self::Logistic { k } => (0.5 * k * t).tanh(),
            Self::Gompertz { b, c } => {
                // e^(-b) * (e^(b (1 - e^(-ct))) - 1) / (1 - e^(-b)), exact at t = 0
                let inner = -(-c * t).exp_m1();
                (-b).exp() * (b * inner).exp_m1() / -(-b).exp_m1()
            }
        };
        Ok(v.clamp(0.0, BELOW_ONE))
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("{v} is not a positive finite number"),
        })
    }
}

/// Samples `samples` pairs `t, u` in `[0, 1]` and checks `t * u` stays in
/// `[0, 1]`, then samples `samples` values `alpha` in `(0, 1]` and checks
/// `(1 + alpha)^2 > 1 + alpha`. Deterministic for a given seed.
pub fn check_unit_interval_stability(samples: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let closed = (0..samples).all(|_| {
        let t: f64 = rng.random_range(0.0..=1.0);
        let u: f64 = rng.random_range(0.0..=1.0);
        unit_product_closed(t, u)
    });
    closed
        && (0..samples).all(|_| {
            // 1 - [0, 1) lands in (0, 1]
            let alpha = 1.0 - rng.random::<f64>();
            square_exceeds(alpha)
        })
}

pub fn unit_product_closed(t: f64, u: f64) -> bool {
    let p = t * u;
    (0.0..=1.0).contains(&p)
}

pub fn square_exceeds(alpha: f64) -> bool {
    let s = 1.0 + alpha;
    s * s > s
}
