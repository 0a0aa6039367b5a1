//! The three sequential identification policies: TOSMB (crossing arm),
//! RTOSMB (ranked arm) and POSMB (arm closest to the threshold).
//!
//! All three keep a candidate `ca` that walks one step at a time along the
//! arm order, steered by KL confidence indices, and sample either `ca`, its
//! right neighbour `na = ca + 1`, or (RTOSMB) the arm `rank` places to the
//! right of `ca`. They operate on increasing instances; [`make_policy`]
//! wraps them for decreasing instances and for ranks below the threshold.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Arm, BanditInstance, Objective, Relabel};
use crate::kl::{lower_index, upper_index, ExplorationSchedule};
use crate::num::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PolicyKind {
    Tosmb,
    /// `rank >= 1` runs directly; `rank <= 0` runs on the inverted problem.
    Rtosmb { rank: i64 },
    Posmb,
}

impl PolicyKind {
    /// The policy designed for `objective`.
    pub fn for_objective(objective: Objective) -> Self {
        match objective {
            Objective::Crossing => PolicyKind::Tosmb,
            Objective::Ranked { rank } => PolicyKind::Rtosmb { rank },
            Objective::Proximity => PolicyKind::Posmb,
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyKind::Tosmb => write!(f, "TOSMB"),
            PolicyKind::Rtosmb { rank } => write!(f, "RTOSMB(r={rank})"),
            PolicyKind::Posmb => write!(f, "POSMB"),
        }
    }
}

/// Per-arm statistics and the current candidate, in the policy's own
/// (increasing) labeling.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyState<T> {
    pub kind: PolicyKind,
    pub schedule: ExplorationSchedule<T>,
    pub tau: T,
    pub pulls: Vec<u64>,
    pub sums: Vec<u64>,
    /// Zero-based; meaningful once every arm has been pulled once.
    candidate: usize,
    pub round: u64,
}

impl<T: Real> PolicyState<T> {
    pub fn num_arms(&self) -> usize {
        self.pulls.len()
    }

    /// `sums / pulls`, or 0 for an arm never pulled.
    pub fn empirical_mean(&self, index: usize) -> T {
        match self.pulls[index] {
            0 => T::zero(),
            n => T::from_count(self.sums[index]) / T::from_count(n),
        }
    }

    pub fn empirical_means(&self) -> Vec<T> {
        (0..self.num_arms()).map(|i| self.empirical_mean(i)).collect()
    }

    pub fn initialized(&self) -> bool {
        self.round >= self.num_arms() as u64
    }

    pub fn candidate(&self) -> Option<Arm> {
        self.initialized().then(|| Arm::from_index(self.candidate))
    }
}

/// Common per-round interface.
pub trait Policy {
    fn num_arms(&self) -> usize;

    /// Rounds completed so far.
    fn round(&self) -> u64;

    /// Arm to sample in round `round() + 1`.
    fn select_arm(&self) -> Arm;

    /// Feeds back the reward (0 or 1) of the arm returned by `select_arm`.
    fn update(&mut self, arm: Arm, reward: u8) -> Result<()>;

    /// Current candidate, `None` during forced exploration.
    fn candidate(&self) -> Option<Arm>;

    fn pulls(&self) -> Vec<u64>;
}

/// One of the three policies on an increasing instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdPolicy<T> {
    state: PolicyState<T>,
}

impl<T: Real> ThresholdPolicy<T> {
    pub fn new(num_arms: usize, tau: T, kind: PolicyKind, schedule: ExplorationSchedule<T>) -> Result<Self> {
        if num_arms < 2 {
            return Err(Error::domain(format!("need at least 2 arms, got {num_arms}")));
        }
        if !(tau > T::zero() && tau < T::one()) {
            return Err(Error::domain(format!("threshold {tau} outside (0, 1)")));
        }
        if let PolicyKind::Rtosmb { rank } = kind {
            if rank < 1 {
                return Err(Error::domain(format!(
                    "RTOSMB runs ranks >= 1 directly, got {rank}; use make_policy for ranks below the threshold"
                )));
            }
        }
        Ok(Self {
            state: PolicyState {
                kind,
                schedule,
                tau,
                pulls: vec![0; num_arms],
                sums: vec![0; num_arms],
                candidate: 0,
                round: 0,
            },
        })
    }

    pub fn state(&self) -> &PolicyState<T> {
        &self.state
    }

    fn upper(&self, i: usize, budget: T) -> T {
        upper_index(self.state.empirical_mean(i), self.state.pulls[i], budget)
    }

    fn lower(&self, i: usize, budget: T) -> T {
        lower_index(self.state.empirical_mean(i), self.state.pulls[i], budget)
    }

    fn neighbour(&self) -> usize {
        (self.state.candidate + 1).min(self.state.num_arms() - 1)
    }

    fn select_index(&self) -> usize {
        let s = &self.state;
        let k = s.num_arms();
        if !s.initialized() {
            return s.round as usize;
        }
        let tau = s.tau;
        let budget = s.schedule.budget(s.round + 1);
        let ca = s.candidate;
        let na = self.neighbour();
        match s.kind {
            PolicyKind::Tosmb => ca,
            PolicyKind::Rtosmb { rank } => {
                let li_na = self.lower(na, budget);
                let ui_ca = self.upper(ca, budget);
                if li_na >= tau && ui_ca <= tau {
                    (ca as i64 + rank).clamp(0, k as i64 - 1) as usize
                } else if ui_ca > tau {
                    ca
                } else if li_na < tau {
                    na
                } else {
                    ca
                }
            }
            PolicyKind::Posmb => {
                let (li_ca, ui_ca) = (self.lower(ca, budget), self.upper(ca, budget));
                let (li_na, ui_na) = (self.lower(na, budget), self.upper(na, budget));
                let in_ca = li_ca <= tau && tau <= ui_ca;
                let in_na = li_na <= tau && tau <= ui_na;
                match (in_ca, in_na) {
                    (true, true) => {
                        let d_ca = (s.empirical_mean(ca) - tau).abs();
                        let d_na = (s.empirical_mean(na) - tau).abs();
                        if d_ca < d_na {
                            ca
                        } else {
                            na
                        }
                    }
                    (true, false) => ca,
                    (false, true) => na,
                    (false, false) => {
                        if (ui_ca - tau).abs() < (li_na - tau).abs() {
                            ca
                        } else {
                            na
                        }
                    }
                }
            }
        }
    }

    fn initial_candidate(&self) -> usize {
        let s = &self.state;
        let k = s.num_arms();
        let means = s.empirical_means();
        match s.kind {
            PolicyKind::Tosmb => means.iter().position(|&m| m > s.tau).unwrap_or(k - 1),
            PolicyKind::Rtosmb { .. } => means.iter().rposition(|&m| m < s.tau).unwrap_or(0),
            PolicyKind::Posmb => {
                let mut best = 0;
                for i in 1..k {
                    if (means[i] - s.tau).abs() < (means[best] - s.tau).abs() {
                        best = i;
                    }
                }
                best
            }
        }
    }

    fn move_candidate(&mut self) {
        let tau = self.state.tau;
        let k = self.state.num_arms();
        let budget = self.state.schedule.budget(self.state.round);
        let ca = self.state.candidate;
        let can_left = ca > 0;
        // "can move right" is `ca < K` in one-based labels
        let can_right = ca + 1 < k;
        self.state.candidate = match self.state.kind {
            PolicyKind::Tosmb => {
                if can_left && self.upper(ca - 1, budget) > tau {
                    ca - 1
                } else if can_right && self.upper(ca, budget) < tau {
                    ca + 1
                } else {
                    ca
                }
            }
            PolicyKind::Rtosmb { .. } | PolicyKind::Posmb => {
                if can_left && self.lower(ca, budget) > tau {
                    ca - 1
                } else if can_right && self.upper(self.neighbour(), budget) < tau {
                    ca + 1
                } else {
                    ca
                }
            }
        };
    }
}

impl<T: Real> Policy for ThresholdPolicy<T> {
    fn num_arms(&self) -> usize {
        self.state.num_arms()
    }

    fn round(&self) -> u64 {
        self.state.round
    }

    fn select_arm(&self) -> Arm {
        Arm::from_index(self.select_index())
    }

    fn update(&mut self, arm: Arm, reward: u8) -> Result<()> {
        let k = self.state.num_arms();
        if arm.label() > k {
            return Err(Error::domain(format!("arm {arm} outside 1..={k}")));
        }
        if reward > 1 {
            return Err(Error::domain(format!("reward must be 0 or 1, got {reward}")));
        }
        let i = arm.index();
        self.state.pulls[i] += 1;
        self.state.sums[i] += u64::from(reward);
        self.state.round += 1;
        let k = k as u64;
        if self.state.round == k {
            self.state.candidate = self.initial_candidate();
        } else if self.state.round > k {
            self.move_candidate();
        }
        Ok(())
    }

    fn candidate(&self) -> Option<Arm> {
        self.state.candidate()
    }

    fn pulls(&self) -> Vec<u64> {
        self.state.pulls.clone()
    }
}

/// A [`ThresholdPolicy`] driven in another labeling: arms are translated
/// through `relabel`, and rewards are complemented when the policy runs on
/// the inverted problem.
#[derive(Debug, Clone, PartialEq)]
pub struct InstancePolicy<T> {
    inner: ThresholdPolicy<T>,
    relabel: Relabel,
    complemented: bool,
}

impl<T: Real> InstancePolicy<T> {
    pub fn inner(&self) -> &ThresholdPolicy<T> {
        &self.inner
    }

    pub fn relabel(&self) -> Relabel {
        self.relabel
    }

    pub fn complemented(&self) -> bool {
        self.complemented
    }

    /// The policy as configured internally (ranks below the threshold show
    /// up as `1 - rank`).
    pub fn effective_kind(&self) -> PolicyKind {
        self.inner.state.kind
    }
}

impl<T: Real> Policy for InstancePolicy<T> {
    fn num_arms(&self) -> usize {
        self.inner.num_arms()
    }

    fn round(&self) -> u64 {
        self.inner.round()
    }

    fn select_arm(&self) -> Arm {
        self.relabel.to_source(self.inner.select_arm())
    }

    fn update(&mut self, arm: Arm, reward: u8) -> Result<()> {
        if arm.label() > self.num_arms() || reward > 1 {
            return self.inner.update(arm, reward);
        }
        let reward = if self.complemented { 1 - reward } else { reward };
        self.inner.update(self.relabel.to_transformed(arm), reward)
    }

    fn candidate(&self) -> Option<Arm> {
        self.inner.candidate().map(|a| self.relabel.to_source(a))
    }

    fn pulls(&self) -> Vec<u64> {
        let inner = self.inner.pulls();
        (0..inner.len())
            .map(|i| inner[self.relabel.to_transformed(Arm::from_index(i)).index()])
            .collect()
    }
}

/// Builds `kind` for `instance`, labeled like `instance`.
///
/// Decreasing instances are normalized first. An RTOSMB rank `r <= 0` runs
/// RTOSMB with rank `1 - r` on the inverted instance.
pub fn make_policy<T: Real>(
    instance: &BanditInstance<T>,
    kind: PolicyKind,
    schedule: ExplorationSchedule<T>,
) -> Result<InstancePolicy<T>> {
    instance.validate()?;
    match kind {
        PolicyKind::Rtosmb { rank } if rank <= 0 => make_below_policy(instance, rank, schedule),
        _ => {
            let norm = instance.normalize();
            let inner = ThresholdPolicy::new(instance.num_arms(), norm.instance.tau(), kind, schedule)?;
            Ok(InstancePolicy { inner, relabel: norm.relabel, complemented: false })
        }
    }
}

/// RTOSMB for the `(1 - rank)`-th arm below the threshold, run as the
/// above-threshold policy on the inverted instance with rewards `1 - X`.
pub fn make_below_policy<T: Real>(
    instance: &BanditInstance<T>,
    rank: i64,
    schedule: ExplorationSchedule<T>,
) -> Result<InstancePolicy<T>> {
    if rank > 0 {
        return Err(Error::domain(format!("below-threshold ranks are <= 0, got {rank}")));
    }
    instance.validate()?;
    let norm = instance.normalize();
    let inverted = norm.instance.invert()?;
    let inner = ThresholdPolicy::new(
        instance.num_arms(),
        inverted.instance.tau(),
        PolicyKind::Rtosmb { rank: 1 - rank },
        schedule,
    )?;
    Ok(InstancePolicy { inner, relabel: inverted.relabel.then(&norm.relabel), complemented: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Direction;
    use proptest::prelude::*;

    const FIGURE1: [f64; 10] = [0.038, 0.041, 0.078, 0.36, 0.533, 0.796, 0.814, 0.85, 0.94, 0.967];

    fn policy(k: usize, tau: f64, kind: PolicyKind) -> ThresholdPolicy<f64> {
        ThresholdPolicy::new(k, tau, kind, ExplorationSchedule::default()).unwrap()
    }

    /// Policy whose statistics say `pulls` draws at exactly `means`, with
    /// the candidate forced to `ca` (one-based).
    fn tight(means: &[f64], pulls: u64, tau: f64, kind: PolicyKind, ca: usize) -> ThresholdPolicy<f64> {
        let mut p = policy(means.len(), tau, kind);
        p.state.pulls = vec![pulls; means.len()];
        p.state.sums = means.iter().map(|&m| (m * pulls as f64).round() as u64).collect();
        p.state.round = pulls * means.len() as u64;
        p.state.candidate = ca - 1;
        p
    }

    fn step(p: &mut impl Policy, reward: u8) -> Arm {
        let arm = p.select_arm();
        p.update(arm, reward).unwrap();
        arm
    }

    #[test]
    fn forced_exploration_in_order() {
        for kind in [PolicyKind::Tosmb, PolicyKind::Rtosmb { rank: 2 }, PolicyKind::Posmb] {
            let mut p = policy(10, 0.6, kind);
            for label in 1..=10 {
                assert_eq!(p.candidate(), None);
                assert_eq!(step(&mut p, 0), Arm::new(label));
            }
            assert!(p.candidate().is_some());
        }
    }

    #[test]
    fn initial_candidates_and_fallbacks() {
        let run = |kind, rewards: &[u8]| {
            let mut p = policy(rewards.len(), 0.5, kind);
            for &r in rewards {
                step(&mut p, r);
            }
            p.candidate().unwrap().label()
        };
        assert_eq!(run(PolicyKind::Tosmb, &[0, 1, 1]), 2);
        assert_eq!(run(PolicyKind::Tosmb, &[0, 0, 0]), 3);
        assert_eq!(run(PolicyKind::Rtosmb { rank: 1 }, &[0, 0, 1]), 2);
        assert_eq!(run(PolicyKind::Rtosmb { rank: 1 }, &[1, 1, 1]), 1);
        // every empirical mean is 0.5 away from the threshold
        assert_eq!(run(PolicyKind::Posmb, &[0, 1, 0]), 1);
    }

    #[test]
    fn tosmb_samples_candidate_and_moves_left() {
        let p = tight(&FIGURE1, 1_000_000, 0.6, PolicyKind::Tosmb, 6);
        assert_eq!(p.select_arm(), Arm::new(6));

        // UI_1 far above tau: candidate 2 moves to 1
        let mut p = tight(&[0.9, 0.95, 0.99], 1000, 0.5, PolicyKind::Tosmb, 2);
        p.update(Arm::new(2), 1).unwrap();
        assert_eq!(p.candidate(), Some(Arm::new(1)));
        // and cannot go further
        p.update(Arm::new(1), 1).unwrap();
        assert_eq!(p.candidate(), Some(Arm::new(1)));
    }

    #[test]
    fn rtosmb_jumps_to_ranked_target() {
        let p = tight(&FIGURE1, 1_000_000, 0.6, PolicyKind::Rtosmb { rank: 4 }, 5);
        assert_eq!(p.select_arm(), Arm::new(9));
        // target clamped at K
        let p = tight(&FIGURE1, 1_000_000, 0.6, PolicyKind::Rtosmb { rank: 9 }, 5);
        assert_eq!(p.select_arm(), Arm::new(10));
    }

    #[test]
    fn rtosmb_moves_right_when_neighbour_is_below() {
        let mut p = tight(&[0.1, 0.2, 0.3, 0.9], 10_000, 0.5, PolicyKind::Rtosmb { rank: 1 }, 1);
        let arm = p.select_arm();
        // UI_ca < tau and LI_na < tau: sample na
        assert_eq!(arm, Arm::new(2));
        p.update(arm, 0).unwrap();
        assert_eq!(p.candidate(), Some(Arm::new(2)));
    }

    #[test]
    fn posmb_outside_both_intervals() {
        // |UI_ca - tau| ~ 0.1, |LI_na - tau| ~ 0.05
        let p = tight(&[0.2, 0.5, 0.65, 0.9], 1_000_000, 0.6, PolicyKind::Posmb, 2);
        assert_eq!(p.select_arm(), Arm::new(3));
        let p = tight(&[0.2, 0.55, 0.7, 0.9], 1_000_000, 0.6, PolicyKind::Posmb, 2);
        assert_eq!(p.select_arm(), Arm::new(2));
    }

    #[test]
    fn posmb_tie_on_empirical_distance_samples_neighbour() {
        // both intervals contain tau and both means are 0.1 away
        let p = tight(&[0.1, 0.4, 0.6, 0.9], 5, 0.5, PolicyKind::Posmb, 2);
        assert_eq!(p.select_arm(), Arm::new(3));
    }

    #[test]
    fn neighbour_clamped_at_last_arm() {
        let p = tight(&[0.1, 0.2, 0.3], 1000, 0.5, PolicyKind::Posmb, 3);
        assert_eq!(p.select_arm(), Arm::new(3));
    }

    #[test]
    fn rejects_bad_feedback() {
        let mut p = policy(3, 0.5, PolicyKind::Tosmb);
        assert!(p.update(Arm::new(1), 2).is_err());
        assert!(p.update(Arm::new(4), 1).is_err());
        assert_eq!(p.round(), 0);
        assert!(ThresholdPolicy::new(3, 0.5, PolicyKind::Rtosmb { rank: 0 }, ExplorationSchedule::default()).is_err());
        assert!(ThresholdPolicy::<f64>::new(1, 0.5, PolicyKind::Tosmb, ExplorationSchedule::default()).is_err());
    }

    #[test]
    fn below_policy_runs_inverted_rank() {
        let inst = BanditInstance::increasing(FIGURE1.to_vec(), 0.6).unwrap();
        let p = make_policy(&inst, PolicyKind::Rtosmb { rank: -2 }, ExplorationSchedule::default()).unwrap();
        assert_eq!(p.effective_kind(), PolicyKind::Rtosmb { rank: 3 });
        assert!(p.complemented());
        assert!((p.inner().state().tau - 0.4).abs() < 1e-15);
        // forced exploration visits original arms 10, 9, .., 1
        let mut p = p;
        let order: Vec<usize> = (0..10).map(|_| step(&mut p, 1).label()).collect();
        assert_eq!(order, (1..=10).rev().collect::<Vec<_>>());
        // rewards of 1 become 0 for the inverted policy
        assert_eq!(p.inner().state().sums, vec![0; 10]);
        assert_eq!(p.pulls(), vec![1; 10]);
    }

    #[test]
    fn decreasing_instance_is_relabeled() {
        let rev: Vec<f64> = FIGURE1.iter().rev().copied().collect();
        let inst = BanditInstance::new(rev, 0.6, Direction::Decreasing).unwrap();
        let mut p = make_policy(&inst, PolicyKind::Tosmb, ExplorationSchedule::default()).unwrap();
        assert_eq!(step(&mut p, 0), Arm::new(10));
        assert_eq!(p.pulls()[9], 1);
    }

    fn drive(policy: &mut impl Policy, bits: &[bool]) -> Vec<(Arm, Option<Arm>)> {
        bits.iter()
            .map(|&b| {
                let arm = policy.select_arm();
                policy.update(arm, b as u8).unwrap();
                (arm, policy.candidate())
            })
            .collect()
    }

    fn any_kind() -> impl Strategy<Value = PolicyKind> {
        prop_oneof![
            Just(PolicyKind::Tosmb),
            Just(PolicyKind::Posmb),
            (-3i64..=4).prop_map(|rank| PolicyKind::Rtosmb { rank }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn candidate_walks_one_step_at_a_time(kind in any_kind(), bits in prop::collection::vec(any::<bool>(), 10..400)) {
            let inst = BanditInstance::increasing(FIGURE1.to_vec(), 0.6).unwrap();
            let mut p = make_policy(&inst, kind, ExplorationSchedule::default()).unwrap();
            let trace = drive(&mut p, &bits);
            let cands: Vec<usize> = trace.iter().filter_map(|(_, c)| c.map(|a| a.label())).collect();
            for c in &cands {
                prop_assert!((1..=10).contains(c));
            }
            for w in cands.windows(2) {
                prop_assert!(w[0].abs_diff(w[1]) <= 1);
            }
            prop_assert_eq!(p.pulls().iter().sum::<u64>(), p.round());
            prop_assert_eq!(p.round(), bits.len() as u64);
        }

        #[test]
        fn identical_feedback_identical_choices(kind in any_kind(), bits in prop::collection::vec(any::<bool>(), 10..200)) {
            let inst = BanditInstance::increasing(FIGURE1.to_vec(), 0.6).unwrap();
            let mut a = make_policy(&inst, kind, ExplorationSchedule::default()).unwrap();
            let mut b = make_policy(&inst, kind, ExplorationSchedule::default()).unwrap();
            prop_assert_eq!(drive(&mut a, &bits), drive(&mut b, &bits));
        }
    }
}
