//! Asymptotic regret lower-bound constants `C(theta)` such that any
//! uniformly good policy has `liminf R(T) / log T >= C(theta)`, plus a
//! numerical cross-check that solves the underlying Graves-Lai program on a
//! discretized set of confusing parameters.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Arm, BanditInstance, Objective, Relabel};
use crate::kl::{i_min, kl};
use crate::lp::solve_covering;
use crate::num::Real;
use crate::oracle::optimal_index;

/// One arm contributing to a bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundTerm<T> {
    pub arm: Arm,
    /// Exploration rate `C_k = 1 / D(mu_k || target)`.
    pub coefficient: T,
    /// Mean the arm has to be told apart from.
    pub target: T,
    /// `|mu_{k*} - mu_k|`.
    pub gap: T,
}

impl<T: Real> BoundTerm<T> {
    pub fn contribution(&self) -> T {
        if self.gap == T::zero() {
            T::zero()
        } else {
            self.coefficient * self.gap
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult<T> {
    pub objective: Objective,
    pub constant: T,
    /// Arms with non-zero `C_k`, ascending by label. Every other arm has
    /// `C_k = 0`.
    pub terms: Vec<BoundTerm<T>>,
}

impl<T: Real> BoundResult<T> {
    fn from_terms(objective: Objective, terms: Vec<BoundTerm<T>>) -> Self {
        let constant = terms.iter().fold(T::zero(), |acc, t| acc + t.contribution());
        Self { objective, constant, terms }
    }

    fn relabeled(mut self, relabel: &Relabel, objective: Objective) -> Self {
        for term in &mut self.terms {
            term.arm = relabel.to_source(term.arm);
        }
        self.terms.sort_by_key(|t| t.arm);
        self.objective = objective;
        self
    }
}

fn term<T: Real>(means: &[T], best: usize, arm: usize, target: T, divergence: T) -> BoundTerm<T> {
    BoundTerm {
        arm: Arm::from_index(arm),
        coefficient: T::one() / divergence,
        target,
        gap: (means[best] - means[arm]).abs(),
    }
}

/// Threshold-crossing bound: `|mu_{k*} - mu_{k*-1}| / I_min(mu_{k*-1}, tau)`.
pub fn crossing_bound<T: Real>(instance: &BanditInstance<T>) -> Result<BoundResult<T>> {
    instance.validate()?;
    let norm = instance.normalize();
    let result = crossing_bound_increasing(&norm.instance)?;
    Ok(result.relabeled(&norm.relabel, Objective::Crossing))
}

fn crossing_bound_increasing<T: Real>(inst: &BanditInstance<T>) -> Result<BoundResult<T>> {
    let means = inst.means();
    let best = inst.crossing_index().ok_or_else(|| Error::NoOptimalArm("no arm at or above tau".into()))?;
    // feasibility keeps the first arm below tau, so best >= 1
    let below = best - 1;
    let divergence = i_min(means[below], inst.tau())?;
    Ok(BoundResult::from_terms(
        Objective::Crossing,
        vec![term(means, best, below, inst.tau(), divergence)],
    ))
}

/// Bound for `Objective::Ranked { rank }`.
///
/// For `rank >= 1` the two arms straddling the threshold contribute, the
/// upper one only when the optimal arm is not the last. Ranks `<= 0` are
/// computed on the inverted instance with rank `1 - rank`.
pub fn ranked_bound<T: Real>(instance: &BanditInstance<T>, rank: i64) -> Result<BoundResult<T>> {
    instance.validate()?;
    let norm = instance.normalize();
    let objective = Objective::Ranked { rank };
    if rank >= 1 {
        let result = ranked_above_increasing(&norm.instance, rank)?;
        Ok(result.relabeled(&norm.relabel, objective))
    } else {
        let inverted = norm.instance.invert()?;
        let result = ranked_above_increasing(&inverted.instance, 1 - rank)?;
        let back = inverted.relabel.then(&norm.relabel);
        Ok(result.relabeled(&back, objective))
    }
}

fn ranked_above_increasing<T: Real>(inst: &BanditInstance<T>, rank: i64) -> Result<BoundResult<T>> {
    debug_assert!(rank >= 1);
    if rank == 1 {
        return crossing_bound_increasing(inst);
    }
    let means = inst.means();
    let tau = inst.tau();
    let objective = Objective::Ranked { rank };
    let (best, _) = optimal_index(means, tau, objective)?;
    let crossing = inst.crossing_index().expect("optimal arm exists");
    let mut terms = vec![term(means, best, crossing - 1, tau, kl(means[crossing - 1], tau))];
    if best != means.len() - 1 {
        // the crossing arm sits at or above tau, so this is the plain
        // divergence down to tau (the one-sided minimum would be zero)
        terms.push(term(means, best, crossing, tau, kl(means[crossing], tau)));
    }
    Ok(BoundResult::from_terms(objective, terms))
}

/// Proximity bound: `|mu_{k*} - mu_k| / D(mu_k || 2 tau - mu_{k*})` with
/// `k` the neighbour of `k*` on the other side of the threshold.
pub fn proximity_bound<T: Real>(instance: &BanditInstance<T>) -> Result<BoundResult<T>> {
    instance.validate()?;
    let norm = instance.normalize();
    let inst = &norm.instance;
    let means = inst.means();
    let tau = inst.tau();
    let (best, _) = optimal_index(means, tau, Objective::Proximity)?;
    let target = tau + tau - means[best];
    if !(target > T::zero() && target < T::one()) {
        return Err(Error::DegenerateTarget { target: target.as_f64() });
    }
    let neighbour = if means[best] >= tau { best - 1 } else { best + 1 };
    let result = BoundResult::from_terms(
        Objective::Proximity,
        vec![term(means, best, neighbour, target, kl(means[neighbour], target))],
    );
    Ok(result.relabeled(&norm.relabel, Objective::Proximity))
}

/// Dispatches on the objective.
pub fn lower_bound<T: Real>(instance: &BanditInstance<T>, objective: Objective) -> Result<BoundResult<T>> {
    match objective {
        Objective::Crossing => crossing_bound(instance),
        Objective::Ranked { rank } => ranked_bound(instance, rank),
        Objective::Proximity => proximity_bound(instance),
    }
}

/// `C(theta) * ln t` at each checkpoint.
pub fn bound_curve<T: Real>(result: &BoundResult<T>, checkpoints: &[u64]) -> Vec<(u64, T)> {
    checkpoints
        .iter()
        .map(|&t| {
            let log_t = T::from_count(t.max(1)).ln();
            let value = if result.constant == T::zero() { T::zero() } else { result.constant * log_t };
            (t, value)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Numerical verifier
// ---------------------------------------------------------------------------

pub const MAX_VERIFY_ARMS: usize = 6;
pub const MIN_RESOLUTION: usize = 50;
pub const DEFAULT_RESOLUTION: usize = 200;

/// Boundary comparisons against the threshold use this slack, so that the
/// discretized set is the closure of the confusing set.
const BOUNDARY_TOLERANCE: f64 = 1e-12;
const MAX_CUTS: usize = 10_000;

/// Result of [`verify_bound_numerically`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport<T> {
    pub objective: Objective,
    pub closed_form: T,
    pub numerical: T,
    /// `|numerical - closed_form| / closed_form`.
    pub relative_difference: T,
    /// Optimal `C_k` for every arm (zero for the optimal arm itself).
    pub coefficients: Vec<(Arm, T)>,
    pub grid_points: usize,
    pub constraints: usize,
}

/// Solves `min sum_k C_k gap_k` subject to `sum_k C_k D(mu_k || lambda_k) >= 1`
/// for every confusing parameter `lambda` on a grid, and compares with the
/// closed form.
///
/// A confusing `lambda` keeps the optimal arm's mean fixed, stays strictly
/// increasing, and makes a different arm optimal. Every other arm ranges
/// over `resolution` uniform interior points of (0, 1) plus the threshold,
/// the proximity mirror point `2 tau - mu_{k*}` and all arm means. Threshold
/// comparisons are taken with a closed boundary, which leaves the infimum
/// unchanged. The side constraints `mu_1 < tau <= mu_K` are not imposed on
/// `lambda`: the first arm may rise to tau and the last may fall below it.
/// Because the grid is a subset of the continuous set, the numerical value
/// never exceeds the true program value; the breakpoints in the grid make
/// it exact for the closed forms.
///
/// The program is solved by cutting planes: the most violated grid
/// constraint is found by dynamic programming over the arms and added to a
/// small covering LP until none is violated.
pub fn verify_bound_numerically<T: Real>(
    instance: &BanditInstance<T>,
    objective: Objective,
    resolution: usize,
) -> Result<VerifyReport<T>> {
    instance.validate()?;
    let k = instance.num_arms();
    if k > MAX_VERIFY_ARMS {
        return Err(Error::domain(format!("verifier supports at most {MAX_VERIFY_ARMS} arms, got {k}")));
    }
    if resolution < MIN_RESOLUTION {
        return Err(Error::domain(format!("grid resolution must be at least {MIN_RESOLUTION}, got {resolution}")));
    }
    let closed = lower_bound(instance, objective)?;

    let norm = instance.normalize();
    let inst = &norm.instance;
    let means = inst.means();
    let tau = inst.tau();
    let (best, _) = optimal_index(means, tau, objective)?;

    let grid = candidate_grid(means, tau, best, objective, resolution);
    let free: Vec<usize> = (0..k).filter(|&i| i != best).collect();
    let gaps: Vec<T> = free.iter().map(|&i| (means[best] - means[i]).abs()).collect();
    let pricer = Pricer { means, tau, best, objective, grid: &grid };

    let mut rows: Vec<Vec<T>> = Vec::new();
    let mut weights = vec![T::zero(); k];
    let mut value = T::zero();
    let threshold = T::one() - T::lit(1e-9);
    loop {
        let Some((cost, lambda)) = pricer.most_violated(&weights) else {
            // nothing confusing on the grid: the program is unconstrained
            break;
        };
        if cost >= threshold {
            break;
        }
        if rows.len() >= MAX_CUTS {
            return Err(Error::InfeasibleGrid(format!("no convergence after {MAX_CUTS} cuts")));
        }
        let row: Vec<T> = free.iter().map(|&i| kl(means[i], lambda[i])).collect();
        if row.iter().all(|&a| a == T::zero()) {
            return Err(Error::InfeasibleGrid(
                "a grid point is confusing yet indistinguishable from the instance".into(),
            ));
        }
        rows.push(row);
        let solution = solve_covering(&gaps, &rows)
            .ok_or_else(|| Error::InfeasibleGrid("covering program has no feasible point".into()))?;
        value = solution.value;
        for (slot, &i) in free.iter().enumerate() {
            weights[i] = solution.x[slot];
        }
    }

    let relative_difference = if closed.constant > T::zero() && closed.constant.is_finite() {
        (value - closed.constant).abs() / closed.constant
    } else {
        (value - closed.constant).abs()
    };
    let coefficients = (0..k)
        .map(|i| (norm.relabel.to_source(Arm::from_index(i)), weights[i]))
        .collect::<Vec<_>>();
    let mut coefficients = coefficients;
    coefficients.sort_by_key(|c| c.0);
    Ok(VerifyReport {
        objective,
        closed_form: closed.constant,
        numerical: value,
        relative_difference,
        coefficients,
        grid_points: grid.len(),
        constraints: rows.len(),
    })
}

fn candidate_grid<T: Real>(means: &[T], tau: T, best: usize, objective: Objective, resolution: usize) -> Vec<T> {
    let steps = T::from_count(resolution as u64 + 1);
    let mut grid: Vec<T> = (1..=resolution as u64).map(|j| T::from_count(j) / steps).collect();
    grid.push(tau);
    if objective == Objective::Proximity {
        let mirror = tau + tau - means[best];
        if mirror > T::zero() && mirror < T::one() {
            grid.push(mirror);
        }
    }
    grid.extend(means.iter().copied());
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();
    grid
}

struct Pricer<'a, T> {
    means: &'a [T],
    tau: T,
    best: usize,
    objective: Objective,
    grid: &'a [T],
}

impl<T: Real> Pricer<'_, T> {
    /// Grid parameter minimizing `sum_k weights_k D(mu_k || lambda_k)` over
    /// the confusing set, or `None` if the set is empty.
    fn most_violated(&self, weights: &[T]) -> Option<(T, Vec<T>)> {
        let k = self.means.len();
        let tol = T::lit(BOUNDARY_TOLERANCE);
        let fixed = self.means[self.best];
        let mut best: Option<(T, Vec<T>)> = None;
        let mut consider = |candidate: Option<(T, Vec<T>)>| {
            if let Some((cost, lambda)) = candidate {
                if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                    best = Some((cost, lambda));
                }
            }
        };
        match self.objective {
            Objective::Proximity => {
                let fixed_dist = (fixed - self.tau).abs();
                for closest in (0..k).filter(|&i| i != self.best) {
                    for (slot, &v) in self.grid.iter().enumerate() {
                        let d = (v - self.tau).abs();
                        if fixed_dist < d - tol {
                            continue;
                        }
                        consider(self.chain(weights, |arm, idx, value| {
                            if arm == closest {
                                idx == slot
                            } else {
                                (value - self.tau).abs() >= d - tol
                            }
                        }));
                    }
                }
            }
            _ => {
                let rank = self.objective.rank().expect("ranked objective");
                // `crossing` is the zero-based first arm at or above tau under
                // lambda; `k` stands for every arm below tau
                for crossing in 0..=k {
                    let target = crossing as i64 + rank - 1;
                    if target < 0 || target >= k as i64 || target as usize == self.best {
                        continue;
                    }
                    consider(self.chain(weights, |arm, _, value| {
                        if arm < crossing {
                            value <= self.tau + tol
                        } else {
                            value >= self.tau - tol
                        }
                    }));
                }
            }
        }
        best
    }

    /// Minimum-cost strictly increasing assignment of grid values to arms,
    /// with the optimal arm pinned to its own mean and `allowed` filtering
    /// each arm's values.
    fn chain(&self, weights: &[T], allowed: impl Fn(usize, usize, T) -> bool) -> Option<(T, Vec<T>)> {
        let k = self.means.len();
        let m = self.grid.len();
        let inf = T::infinity();
        let mut cost = vec![inf; m];
        let mut choice = vec![vec![usize::MAX; m]; k];
        let mut prev = vec![inf; m];
        for arm in 0..k {
            // best predecessor over strictly smaller grid values
            let mut run_min = inf;
            let mut run_arg = usize::MAX;
            for (idx, &value) in self.grid.iter().enumerate() {
                let reachable = arm == 0 || run_min < inf;
                let admissible = if arm == self.best { value == self.means[arm] } else { true };
                cost[idx] = if reachable && admissible && allowed(arm, idx, value) {
                    let own = if arm == self.best || weights[arm] == T::zero() {
                        T::zero()
                    } else {
                        weights[arm] * kl(self.means[arm], value)
                    };
                    let base = if arm == 0 { T::zero() } else { run_min };
                    choice[arm][idx] = run_arg;
                    base + own
                } else {
                    inf
                };
                if arm > 0 && prev[idx] < run_min {
                    run_min = prev[idx];
                    run_arg = idx;
                }
            }
            std::mem::swap(&mut prev, &mut cost);
        }
        let (mut idx, total) = prev
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_finite())
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite cost"))
            .map(|(i, &c)| (i, c))?;
        let mut lambda = vec![T::zero(); k];
        for arm in (0..k).rev() {
            lambda[arm] = self.grid[idx];
            idx = choice[arm][idx];
        }
        Some((total, lambda))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Direction;
    use approx::assert_relative_eq;

    const FIGURE1: [f64; 10] = [0.038, 0.041, 0.078, 0.36, 0.533, 0.796, 0.814, 0.85, 0.94, 0.967];

    // 50-digit evaluations of the closed forms.
    const FIG_CROSSING: f64 = 28.555_196_060_365_924_206_600_859_740_983_395;
    const FIG_RANKED_4: f64 = 45.833_015_742_357_573_863_148_006_619_876_134;
    const FIG_RANKED_NEG2: f64 = 57.593_932_631_786_884_497_571_719_835_717_901;
    const FIG_PROXIMITY: f64 = 6.449_953_751_472_637_605_535_323_699_245_280;
    const TWO_ARM: f64 = 4.861_278_643_471_880_569_012_947_909_553_675;

    fn fig() -> BanditInstance<f64> {
        BanditInstance::increasing(FIGURE1.to_vec(), 0.6).unwrap()
    }

    #[test]
    fn figure1_crossing() {
        let b = crossing_bound(&fig()).unwrap();
        assert_relative_eq!(b.constant, FIG_CROSSING, max_relative = 1e-12);
        assert_eq!(b.terms.len(), 1);
        assert_eq!(b.terms[0].arm, Arm::new(5));
        assert_eq!(b.terms[0].target, 0.6);
    }

    #[test]
    fn two_arm_crossing() {
        let inst = BanditInstance::increasing(vec![0.3, 0.7], 0.5).unwrap();
        assert_relative_eq!(crossing_bound(&inst).unwrap().constant, TWO_ARM, max_relative = 1e-12);
    }

    #[test]
    fn crossing_blows_up_near_threshold() {
        let inst = BanditInstance::increasing(vec![0.2, 0.6 - 1e-6, 0.8], 0.6).unwrap();
        let b = crossing_bound(&inst).unwrap();
        assert!(b.constant > 1e6 * 0.2);
    }

    #[test]
    fn figure1_ranked() {
        let b = ranked_bound(&fig(), 4).unwrap();
        assert_relative_eq!(b.constant, FIG_RANKED_4, max_relative = 1e-12);
        let arms: Vec<_> = b.terms.iter().map(|t| t.arm.label()).collect();
        assert_eq!(arms, vec![5, 6]);

        let b = ranked_bound(&fig(), -2).unwrap();
        assert_relative_eq!(b.constant, FIG_RANKED_NEG2, max_relative = 1e-12);
        let arms: Vec<_> = b.terms.iter().map(|t| t.arm.label()).collect();
        assert_eq!(arms, vec![5, 6]);
        assert_eq!(b.objective, Objective::Ranked { rank: -2 });
    }

    #[test]
    fn ranked_one_is_crossing() {
        let r = ranked_bound(&fig(), 1).unwrap();
        let c = crossing_bound(&fig()).unwrap();
        assert_eq!(r.constant, c.constant);
        assert_eq!(r.terms, c.terms);
    }

    #[test]
    fn ranked_last_arm_drops_upper_term() {
        // k' = 6, rank 5 -> k* = 10 = K
        let b = ranked_bound(&fig(), 5).unwrap();
        assert_eq!(b.terms.len(), 1);
        assert_eq!(b.terms[0].arm, Arm::new(5));
        let expected = (0.967 - 0.533) / kl(0.533, 0.6);
        assert_relative_eq!(b.constant, expected, max_relative = 1e-12);
    }

    #[test]
    fn figure1_proximity() {
        let b = proximity_bound(&fig()).unwrap();
        assert_relative_eq!(b.constant, FIG_PROXIMITY, max_relative = 1e-12);
        assert_eq!(b.terms[0].arm, Arm::new(6));
        assert!((b.terms[0].target - 0.667).abs() < 1e-12);
    }

    #[test]
    fn proximity_on_threshold() {
        let inst = BanditInstance::increasing(vec![0.2, 0.5, 0.9], 0.5).unwrap();
        let b = proximity_bound(&inst).unwrap();
        assert_eq!(b.terms[0].target, 0.5);
        assert_relative_eq!(b.constant, 0.3 / kl(0.2, 0.5), max_relative = 1e-12);
    }

    #[test]
    fn proximity_degenerate_target() {
        // exact tie goes to the arm at 0, whose mirror image is 1
        let inst = BanditInstance::increasing(vec![0.0, 1.0], 0.5).unwrap();
        match proximity_bound(&inst) {
            Err(Error::DegenerateTarget { target }) => assert_eq!(target, 1.0),
            other => panic!("expected degenerate target, got {other:?}"),
        }
    }

    #[test]
    fn decreasing_instance_bound_labels() {
        let rev: Vec<f64> = FIGURE1.iter().rev().copied().collect();
        let inst = BanditInstance::new(rev, 0.6, Direction::Decreasing).unwrap();
        let b = crossing_bound(&inst).unwrap();
        assert_eq!(b.terms[0].arm, Arm::new(6));
        assert_relative_eq!(b.constant, FIG_CROSSING, max_relative = 1e-12);
    }

    #[test]
    fn curve() {
        let b = BoundResult { objective: Objective::Crossing, constant: 2.0, terms: vec![] };
        let c = bound_curve(&b, &[1, 10]);
        assert_eq!(c[0], (1, 0.0));
        assert_relative_eq!(c[1].1, 2.0 * 10f64.ln());
        let e = std::f64::consts::E;
        assert_relative_eq!(b.constant * e.ln(), 2.0);
        let zero = BoundResult { objective: Objective::Crossing, constant: 0.0, terms: vec![] };
        assert!(bound_curve(&zero, &[1, 5, 100]).iter().all(|&(_, v)| v == 0.0));
        let fig = crossing_bound(&fig()).unwrap();
        let c = bound_curve(&fig, &[1_000_000]);
        assert_relative_eq!(c[0].1, FIG_CROSSING * 1e6f64.ln(), max_relative = 1e-12);
    }

    #[test]
    fn verifier_three_arm_crossing() {
        let inst = BanditInstance::increasing(vec![0.2, 0.4, 0.7], 0.5).unwrap();
        let report = verify_bound_numerically(&inst, Objective::Crossing, 200).unwrap();
        assert!(report.relative_difference < 0.02, "{report:?}");
        // nothing above the optimal arm is ever needed
        assert_eq!(report.coefficients[2].1, 0.0);
        assert!(report.numerical <= report.closed_form * (1.0 + 1e-9));
    }

    #[test]
    fn verifier_rejects_bad_arguments() {
        assert!(verify_bound_numerically(&fig(), Objective::Crossing, 200).is_err());
        let inst = BanditInstance::increasing(vec![0.2, 0.4, 0.7], 0.5).unwrap();
        assert!(verify_bound_numerically(&inst, Objective::Crossing, 10).is_err());
    }

    #[test]
    fn verifier_matches_every_objective_on_small_instance() {
        let inst = BanditInstance::increasing(vec![0.1, 0.3, 0.55, 0.8, 0.9], 0.45).unwrap();
        for objective in [
            Objective::Crossing,
            Objective::Ranked { rank: 2 },
            Objective::Ranked { rank: 3 },
            Objective::Ranked { rank: 0 },
            Objective::Ranked { rank: -1 },
            Objective::Proximity,
        ] {
            let report = verify_bound_numerically(&inst, objective, 200).unwrap();
            assert!(report.relative_difference < 0.02, "{objective}: {report:?}");
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(40))]

        #[test]
        fn verifier_agrees_on_random_small_instances((means, tau) in small_instance(), pick in 0usize..16) {
            let inst = BanditInstance::increasing(means.clone(), tau).unwrap();
            let k = means.len() as i64;
            let crossing = means.iter().position(|&m| m >= tau).unwrap() as i64;
            // every valid signed rank, then crossing and proximity
            let mut objectives: Vec<Objective> =
                (1 - crossing..=k - crossing).map(|rank| Objective::Ranked { rank }).collect();
            objectives.push(Objective::Crossing);
            objectives.push(Objective::Proximity);
            let objective = objectives[pick % objectives.len()];
            match verify_bound_numerically(&inst, objective, 60) {
                Ok(report) => proptest::prop_assert!(report.relative_difference < 1e-9, "{objective}: {report:?}"),
                Err(Error::DegenerateTarget { .. }) => {}
                Err(e) => proptest::prop_assert!(false, "{objective}: {e}"),
            }
        }
    }

    fn small_instance() -> impl proptest::strategy::Strategy<Value = (Vec<f64>, f64)> {
        sorted_instance(2..=5)
    }

    fn increasing_instance() -> impl proptest::strategy::Strategy<Value = (Vec<f64>, f64)> {
        sorted_instance(3..=10)
    }

    fn sorted_instance(
        arms: std::ops::RangeInclusive<usize>,
    ) -> impl proptest::strategy::Strategy<Value = (Vec<f64>, f64)> {
        use proptest::prelude::*;
        (arms, 0.05f64..0.95).prop_flat_map(|(k, tau)| {
            prop::collection::vec(0.001f64..0.999, k).prop_filter_map("needs both sides of tau", move |mut v| {
                v.sort_by(|a, b| a.partial_cmp(b).unwrap());
                v.dedup();
                let ok = v.len() >= 2 && v[0] < tau && *v.last().unwrap() > tau && v.iter().all(|&m| m != tau);
                ok.then_some((v, tau))
            })
        })
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(100))]

        #[test]
        fn below_threshold_ranks_match_direct_formula((means, tau) in increasing_instance(), pick in 0usize..64) {
            let crossing = means.iter().position(|&m| m >= tau).unwrap();
            // zero-based crossing >= 1, and ranks 0, -1, .., 1 - crossing are valid
            let rank = -((pick % crossing) as i64);
            let best = (crossing as i64 + rank - 1) as usize;
            let mut expected = (means[best] - means[crossing]).abs() / kl(means[crossing], tau);
            if rank <= -1 && best != 0 {
                let below = crossing - 1;
                expected += (means[best] - means[below]).abs() / kl(means[below], tau);
            }
            let inst = BanditInstance::increasing(means.clone(), tau).unwrap();
            let got = ranked_bound(&inst, rank).unwrap().constant;
            proptest::prop_assert!((got - expected).abs() <= 1e-9 * expected.max(1.0), "{got} vs {expected}");
        }
    }
}
