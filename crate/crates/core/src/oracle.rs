//! Ground-truth optimal arm and per-arm gaps for each objective.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Arm, BanditInstance, Objective};
use crate::num::Real;

/// Two distances to the threshold closer than this count as a tie.
pub const PROXIMITY_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalArm<T> {
    /// Label in the instance's own (original) labeling.
    pub arm: Arm,
    pub objective: Objective,
    /// `|mu_{k*} - mu_k|` for every arm, original labeling.
    pub gaps: Vec<T>,
    /// Set when the proximity argmin was decided by the tie-break.
    pub tie: bool,
}

impl<T: Real> OptimalArm<T> {
    /// Pseudo-regret `sum_k gap_k * pulls_k`.
    pub fn regret(&self, pulls: &[u64]) -> T {
        debug_assert_eq!(pulls.len(), self.gaps.len());
        self.gaps
            .iter()
            .zip(pulls)
            .fold(T::zero(), |acc, (&gap, &n)| acc + gap * T::from_count(n))
    }
}

/// Zero-based optimal position on an increasing instance, plus the tie flag.
pub(crate) fn optimal_index<T: Real>(means: &[T], tau: T, objective: Objective) -> Result<(usize, bool)> {
    let k = means.len();
    match objective {
        Objective::Proximity => {
            let tol = T::lit(PROXIMITY_TIE_TOLERANCE);
            let mut best = 0;
            let mut best_dist = (means[0] - tau).abs();
            let mut tie = false;
            for (i, &m) in means.iter().enumerate().skip(1) {
                let d = (m - tau).abs();
                if d < best_dist {
                    tie = best_dist - d <= tol;
                    best = i;
                    best_dist = d;
                } else if d - best_dist <= tol {
                    tie = true;
                }
            }
            Ok((best, tie))
        }
        _ => {
            let rank = objective.rank().expect("ranked objective");
            let crossing = means
                .iter()
                .position(|&m| m >= tau)
                .ok_or_else(|| Error::NoOptimalArm("no arm at or above the threshold".into()))?;
            let target = crossing as i64 + rank - 1;
            if target < 0 || target >= k as i64 {
                return Err(Error::NoOptimalArm(format!(
                    "{objective} points at arm {} but the instance has arms 1..={k}",
                    target + 1
                )));
            }
            Ok((target as usize, false))
        }
    }
}

/// Optimal arm for `objective`; decreasing instances are normalized first
/// and the result is reported in the caller's labeling.
pub fn optimal_arm<T: Real>(instance: &BanditInstance<T>, objective: Objective) -> Result<OptimalArm<T>> {
    let norm = instance.normalize();
    let (index, tie) = optimal_index(norm.instance.means(), norm.instance.tau(), objective)?;
    let arm = norm.relabel.to_source(Arm::from_index(index));
    let best = instance.mean(arm);
    let gaps = instance.means().iter().map(|&m| (best - m).abs()).collect();
    Ok(OptimalArm { arm, objective, gaps, tie })
}

/// Pseudo-regret of a pull-count vector (original labeling).
pub fn cumulative_pseudo_regret<T: Real>(
    instance: &BanditInstance<T>,
    objective: Objective,
    pulls: &[u64],
) -> Result<T> {
    if pulls.len() != instance.num_arms() {
        return Err(Error::domain(format!(
            "expected {} pull counts, got {}",
            instance.num_arms(),
            pulls.len()
        )));
    }
    Ok(optimal_arm(instance, objective)?.regret(pulls))
}
