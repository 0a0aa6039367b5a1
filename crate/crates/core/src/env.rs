//! Bernoulli rewards drawn by thresholding one uniform per pull, from
//! per-trial random streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::instance::{Arm, BanditInstance};
use crate::num::Real;

/// Generator behind every [`RewardStream`], as recorded in manifests.
pub const GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.3, seed_from_u64 + set_stream)";

/// Identifies one trial's random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrialSeed {
    pub experiment_seed: u64,
    pub trial_index: u64,
}

impl TrialSeed {
    pub fn new(experiment_seed: u64, trial_index: u64) -> Self {
        Self { experiment_seed, trial_index }
    }

    /// The experiment seed keys the ChaCha state and the trial index picks
    /// one of its 2^64 independent streams.
    pub fn stream(self) -> RewardStream {
        let mut rng = ChaCha8Rng::seed_from_u64(self.experiment_seed);
        rng.set_stream(self.trial_index);
        RewardStream { rng }
    }
}

/// Uniform draws for one trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewardStream {
    rng: ChaCha8Rng,
}

impl RewardStream {
    /// Uniform on `[0, 1)`.
    pub fn next_uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }
}

/// Arms as thresholds on a uniform draw.
///
/// The complemented form answers `1{u >= theta}` instead of `1{u < theta}`.
/// It is what [`BernoulliArms::inverted`] produces, so that the same draw
/// gives rewards `X` and `1 - X` on an instance and its inversion without
/// any rounding in `1 - theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliArms {
    thresholds: Vec<f64>,
    complemented: bool,
}

impl BernoulliArms {
    pub fn new<T: Real>(instance: &BanditInstance<T>) -> Self {
        Self { thresholds: instance.means().iter().map(|m| m.as_f64()).collect(), complemented: false }
    }

    /// Arms of the inverted instance, relabeled `k -> K + 1 - k`.
    pub fn inverted(&self) -> Self {
        Self { thresholds: self.thresholds.iter().rev().copied().collect(), complemented: !self.complemented }
    }

    pub fn num_arms(&self) -> usize {
        self.thresholds.len()
    }

    /// Mean reward of `arm`.
    pub fn mean(&self, arm: Arm) -> f64 {
        let theta = self.thresholds[arm.index()];
        if self.complemented {
            1.0 - theta
        } else {
            theta
        }
    }

    /// Consumes exactly one uniform, whatever the arm.
    pub fn sample(&self, arm: Arm, stream: &mut RewardStream) -> u8 {
        let u = stream.next_uniform();
        let below = u < self.thresholds[arm.index()];
        (below != self.complemented) as u8
    }
}

/// One reward from `instance`'s arm.
pub fn sample_reward<T: Real>(instance: &BanditInstance<T>, arm: Arm, stream: &mut RewardStream) -> u8 {
    let u = stream.next_uniform();
    (u < instance.mean(arm).as_f64()) as u8
}
