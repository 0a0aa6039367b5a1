//! Ground-truth problem definitions: arm means, threshold, objective, and
//! the two relabeling transforms (direction normalization and inversion).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::num::Real;

/// One-based arm label, always in the labeling of the instance it was
/// produced for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Arm(usize);

impl Arm {
    /// Panics if `label` is zero.
    pub fn new(label: usize) -> Self {
        assert!(label >= 1, "arm labels are 1-based");
        Arm(label)
    }

    pub fn from_index(index: usize) -> Self {
        Arm(index + 1)
    }

    pub fn label(self) -> usize {
        self.0
    }

    /// Zero-based position.
    pub fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Increasing,
    Decreasing,
}

/// Identification task.
///
/// `Ranked(r)` uses a signed rank: `r >= 1` is the r-th arm at or above the
/// threshold, `r <= 0` is the `(1 - r)`-th arm below it. So `Ranked(0)` is
/// the first arm below and `Ranked(-2)` the third arm below. In every case
/// the optimal arm sits at `crossing + r - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Objective {
    Crossing,
    Ranked { rank: i64 },
    Proximity,
}

impl Objective {
    /// Signed rank relative to the crossing arm, if the objective has one.
    pub fn rank(self) -> Option<i64> {
        match self {
            Objective::Crossing => Some(1),
            Objective::Ranked { rank } => Some(rank),
            Objective::Proximity => None,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::Crossing => write!(f, "crossing"),
            Objective::Ranked { rank } => write!(f, "ranked({rank})"),
            Objective::Proximity => write!(f, "proximity"),
        }
    }
}

/// First instance invariant that fails.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("need at least 2 arms, got {0}")]
    TooFewArms(usize),
    #[error("threshold {0} is not in (0, 1)")]
    ThresholdOutOfRange(f64),
    #[error("mean of arm {arm} = {mean} is not in [0, 1]")]
    MeanOutOfRange { arm: usize, mean: f64 },
    #[error("means are not strictly monotone in the declared direction at arm {arm}")]
    NotStrictlyMonotone { arm: usize },
    #[error("lowest mean {mean} must be below the threshold {tau}")]
    NoArmBelow { mean: f64, tau: f64 },
    #[error("highest mean {mean} must be at least the threshold {tau}")]
    NoArmAbove { mean: f64, tau: f64 },
}

/// Arm means, threshold and ordering direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditInstance<T> {
    means: Vec<T>,
    tau: T,
    direction: Direction,
}

impl<T: Real> BanditInstance<T> {
    /// Validated constructor.
    pub fn new(means: Vec<T>, tau: T, direction: Direction) -> Result<Self> {
        let instance = Self::from_parts(means, tau, direction);
        instance.validate()?;
        Ok(instance)
    }

    /// Increasing instance, validated.
    pub fn increasing(means: Vec<T>, tau: T) -> Result<Self> {
        Self::new(means, tau, Direction::Increasing)
    }

    /// Unvalidated constructor; see [`BanditInstance::validate`].
    pub fn from_parts(means: Vec<T>, tau: T, direction: Direction) -> Self {
        Self { means, tau, direction }
    }

    pub fn means(&self) -> &[T] {
        &self.means
    }

    pub fn mean(&self, arm: Arm) -> T {
        self.means[arm.index()]
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn num_arms(&self) -> usize {
        self.means.len()
    }

    /// Checks, in order: arm count, threshold range, mean range, strict
    /// monotonicity, and that at least one arm lies on each side of the
    /// threshold (strictly below for the lowest, at-or-above for the highest).
    pub fn validate(&self) -> Result<(), Violation> {
        let k = self.means.len();
        if k < 2 {
            return Err(Violation::TooFewArms(k));
        }
        let tau = self.tau;
        if !(tau > T::zero() && tau < T::one()) {
            return Err(Violation::ThresholdOutOfRange(tau.as_f64()));
        }
        for (i, &m) in self.means.iter().enumerate() {
            if !(m >= T::zero() && m <= T::one()) {
                return Err(Violation::MeanOutOfRange { arm: i + 1, mean: m.as_f64() });
            }
        }
        for i in 1..k {
            let ordered = match self.direction {
                Direction::Increasing => self.means[i - 1] < self.means[i],
                Direction::Decreasing => self.means[i - 1] > self.means[i],
            };
            if !ordered {
                return Err(Violation::NotStrictlyMonotone { arm: i + 1 });
            }
        }
        let (lowest, highest) = match self.direction {
            Direction::Increasing => (self.means[0], self.means[k - 1]),
            Direction::Decreasing => (self.means[k - 1], self.means[0]),
        };
        if !(lowest < tau) {
            return Err(Violation::NoArmBelow { mean: lowest.as_f64(), tau: tau.as_f64() });
        }
        if !(highest >= tau) {
            return Err(Violation::NoArmAbove { mean: highest.as_f64(), tau: tau.as_f64() });
        }
        Ok(())
    }

    /// Reindexes a decreasing instance as increasing (`k -> K + 1 - k`).
    pub fn normalize(&self) -> Relabeled<T> {
        let k = self.num_arms();
        match self.direction {
            Direction::Increasing => Relabeled { instance: self.clone(), relabel: Relabel::identity(k) },
            Direction::Decreasing => {
                let means = self.means.iter().rev().copied().collect();
                Relabeled {
                    instance: Self::from_parts(means, self.tau, Direction::Increasing),
                    relabel: Relabel::reversal(k),
                }
            }
        }
    }

    /// Problem inversion: rewards `1 - X`, threshold `1 - tau`, arms
    /// reindexed `k -> K + 1 - k` so the result is again increasing.
    ///
    /// Fails on decreasing input, and when the inverted instance is
    /// infeasible (e.g. the top mean equals the threshold exactly).
    pub fn invert(&self) -> Result<Relabeled<T>> {
        if self.direction != Direction::Increasing {
            return Err(Error::domain("invert expects an increasing instance; normalize it first"));
        }
        let one = T::one();
        let means = self.means.iter().rev().map(|&m| one - m).collect();
        let inverted = Self::from_parts(means, one - self.tau, Direction::Increasing);
        inverted.validate()?;
        Ok(Relabeled { instance: inverted, relabel: Relabel::reversal(self.num_arms()) })
    }

    /// Zero-based position of the first arm with mean at or above the
    /// threshold, on an increasing instance.
    pub(crate) fn crossing_index(&self) -> Option<usize> {
        self.means.iter().position(|&m| m >= self.tau)
    }
}

/// Correspondence between arm labels of two versions of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relabel {
    num_arms: usize,
    reversed: bool,
}

impl Relabel {
    pub fn identity(num_arms: usize) -> Self {
        Self { num_arms, reversed: false }
    }

    pub fn reversal(num_arms: usize) -> Self {
        Self { num_arms, reversed: true }
    }

    pub fn is_identity(&self) -> bool {
        !self.reversed
    }

    /// Maps a label of the transformed instance back to the source.
    pub fn to_source(&self, arm: Arm) -> Arm {
        self.apply(arm)
    }

    /// Maps a source label into the transformed instance.
    pub fn to_transformed(&self, arm: Arm) -> Arm {
        self.apply(arm)
    }

    /// Composition: first `self`, then `next` applied to the result.
    pub fn then(&self, next: &Relabel) -> Relabel {
        debug_assert_eq!(self.num_arms, next.num_arms);
        Relabel { num_arms: self.num_arms, reversed: self.reversed ^ next.reversed }
    }

    fn apply(&self, arm: Arm) -> Arm {
        if self.reversed {
            Arm::new(self.num_arms + 1 - arm.label())
        } else {
            arm
        }
    }
}

/// A transformed instance together with its label map.
#[derive(Debug, Clone, PartialEq)]
pub struct Relabeled<T> {
    pub instance: BanditInstance<T>,
    pub relabel: Relabel,
}

/// Free-function form of [`BanditInstance::validate`].
pub fn validate<T: Real>(instance: &BanditInstance<T>) -> Result<(), Violation> {
    instance.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const FIGURE1: [f64; 10] = [0.038, 0.041, 0.078, 0.36, 0.533, 0.796, 0.814, 0.85, 0.94, 0.967];

    #[test]
    fn figure1_is_valid() {
        assert!(BanditInstance::increasing(FIGURE1.to_vec(), 0.6).is_ok());
    }

    #[test]
    fn violations() {
        let v = BanditInstance::from_parts(vec![0.5, 0.5], 0.6, Direction::Increasing).validate();
        assert_eq!(v, Err(Violation::NotStrictlyMonotone { arm: 2 }));
        let v = BanditInstance::from_parts(vec![0.7, 0.8], 0.6, Direction::Increasing).validate();
        assert!(matches!(v, Err(Violation::NoArmBelow { .. })));
        let v = BanditInstance::from_parts(vec![0.1, 0.2], 0.6, Direction::Increasing).validate();
        assert!(matches!(v, Err(Violation::NoArmAbove { .. })));
        let v = BanditInstance::from_parts(vec![0.1], 0.6, Direction::Increasing).validate();
        assert_eq!(v, Err(Violation::TooFewArms(1)));
        let v = BanditInstance::from_parts(vec![0.1, 1.2], 0.6, Direction::Increasing).validate();
        assert!(matches!(v, Err(Violation::MeanOutOfRange { arm: 2, .. })));
        let v = BanditInstance::from_parts(vec![0.1, 0.9], 1.0, Direction::Increasing).validate();
        assert!(matches!(v, Err(Violation::ThresholdOutOfRange(_))));
        let v = BanditInstance::from_parts(vec![0.1, 0.4, 0.9], 0.5, Direction::Decreasing).validate();
        assert_eq!(v, Err(Violation::NotStrictlyMonotone { arm: 2 }));
    }

    #[test]
    fn normalize_decreasing() {
        let inst = BanditInstance::new(vec![0.9, 0.4, 0.1], 0.5, Direction::Decreasing).unwrap();
        let norm = inst.normalize();
        assert_eq!(norm.instance.means(), &[0.1, 0.4, 0.9]);
        assert_eq!(norm.instance.direction(), Direction::Increasing);
        for k in 1..=3 {
            assert_eq!(norm.relabel.to_source(Arm::new(k)), Arm::new(4 - k));
        }
        let again = norm.instance.normalize();
        assert_eq!(again.instance, norm.instance);
        assert!(again.relabel.is_identity());
    }

    #[test]
    fn normalize_increasing_is_identity() {
        let inst = BanditInstance::increasing(FIGURE1.to_vec(), 0.6).unwrap();
        let norm = inst.normalize();
        assert_eq!(norm.instance, inst);
        assert!(norm.relabel.is_identity());
    }

    #[test]
    fn invert_symmetric_instance() {
        let inst = BanditInstance::increasing(vec![0.2, 0.8], 0.5).unwrap();
        let inv = inst.invert().unwrap();
        assert_eq!(inv.instance.means(), &[0.19999999999999996, 0.8]);
        assert_eq!(inv.instance.tau(), 0.5);
        assert_eq!(inv.relabel.to_source(Arm::new(1)), Arm::new(2));
    }

    #[test]
    fn invert_figure1() {
        let inst = BanditInstance::increasing(FIGURE1.to_vec(), 0.6).unwrap();
        let inv = inst.invert().unwrap();
        let expected = [0.033, 0.06, 0.15, 0.186, 0.204, 0.467, 0.64, 0.922, 0.959, 0.962];
        for (got, want) in inv.instance.means().iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!((inv.instance.tau() - 0.4).abs() < 1e-15);
        let back = inv.instance.invert().unwrap();
        for (got, want) in back.instance.means().iter().zip(FIGURE1) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(inv.relabel.then(&back.relabel).is_identity());
    }

    #[test]
    fn invert_rejects_infeasible_output() {
        // top mean equal to tau leaves no arm strictly above it after inversion
        let inst = BanditInstance::increasing(vec![0.2, 0.5], 0.5).unwrap();
        assert!(matches!(inst.invert(), Err(Error::InvalidInstance(Violation::NoArmBelow { .. }))));
        let dec = BanditInstance::new(vec![0.9, 0.2], 0.5, Direction::Decreasing).unwrap();
        assert!(dec.invert().is_err());
    }

    #[test]
    fn objective_serde_shape() {
        assert_eq!(Objective::Crossing.rank(), Some(1));
        assert_eq!(Objective::Ranked { rank: -2 }.to_string(), "ranked(-2)");
        assert_eq!(Objective::Proximity.rank(), None);
    }
}
