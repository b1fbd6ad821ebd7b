//! Synthetic systems `y = h₀(x + δ)` with optional background risk `δ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::featurize::Featurization;
use crate::quantify::{IoPair, TransferFunction};

/// Maximum redraws of `δ` per pair when `h₀` is undefined at `x + δ ≤ 0`.
const MAX_RESAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Delta {
    None,
    Gaussian { sigma: f64 },
    Uniform { a: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputDistribution {
    Uniform { lo: f64, hi: f64 },
}

impl Default for InputDistribution {
    fn default() -> Self {
        InputDistribution::Uniform { lo: 0.0, hi: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSystemSpec {
    pub n: usize,
    pub alpha: f64,
    pub c2: f64,
    pub delta: Delta,
    pub input: InputDistribution,
    pub seed: u64,
}

enum DeltaSampler {
    None,
    Gaussian(Normal<f64>),
    Uniform(f64, f64),
}

impl DeltaSampler {
    fn new(delta: Delta) -> Result<Self> {
        match delta {
            Delta::None => Ok(DeltaSampler::None),
            Delta::Gaussian { sigma } => Normal::new(0.0, sigma)
                .map(DeltaSampler::Gaussian)
                .map_err(|e| Error::Domain(format!("bad δ distribution: {e}"))),
            Delta::Uniform { a, b } if a < b && a.is_finite() && b.is_finite() => {
                Ok(DeltaSampler::Uniform(a, b))
            }
            Delta::Uniform { a, b } => Err(Error::Domain(format!("bad δ range [{a}, {b})"))),
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            DeltaSampler::None => 0.0,
            DeltaSampler::Gaussian(d) => d.sample(rng),
            DeltaSampler::Uniform(a, b) => rng.random_range(*a..*b),
        }
    }
}

/// Draws `x` from the input distribution and sets `y = h₀(x + δ)`.
///
/// With a positive exponent `α/(1-α)` a shifted input at or below 0 is
/// clamped to 0; inputs above 1 are evaluated as they are. With a negative
/// exponent `h₀` blows up at 0, so `δ` is redrawn until `x + δ > 0`.
/// Pairs carry ids `0..n` and a nominal featurization tag.
pub fn generate_synthetic(spec: &SyntheticSystemSpec) -> Result<Vec<IoPair>> {
    let tf = TransferFunction::new(spec.alpha, spec.c2)?;
    let exponent = tf.exponent();
    let delta = DeltaSampler::new(spec.delta)?;
    let InputDistribution::Uniform { lo, hi } = spec.input;
    if !(0.0 <= lo && lo < hi && hi <= 1.0) {
        return Err(Error::Domain(format!("input range [{lo}, {hi}) not inside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut pairs = Vec::with_capacity(spec.n);
    for i in 0..spec.n {
        let x = rng.random_range(lo..hi);
        let mut z = x + delta.sample(&mut rng);
        if exponent < 0.0 {
            let mut tries = 0;
            while z <= 0.0 {
                tries += 1;
                if tries > MAX_RESAMPLES {
                    return Err(Error::Domain(format!(
                        "could not draw δ with x + δ > 0 for x = {x}"
                    )));
                }
                z = x + delta.sample(&mut rng);
            }
        } else {
            z = z.max(0.0);
        }
        pairs.push(IoPair {
            id: i.to_string(),
            x,
            y: tf.c2() * z.powf(exponent),
            featurization: Featurization::Ti,
        });
    }
    Ok(pairs)
}
