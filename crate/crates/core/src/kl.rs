//! Bernoulli Kullback-Leibler divergence and the KL-UCB / KL-LCB confidence
//! indices used by every policy in the crate.
//!
//! Divergences that blow up (target at 0 or 1 while the source is not) are
//! reported as `+inf`, which compares greater than any finite divergence.

use crate::error::{Error, Result};
use crate::num::Real;

/// Hard cap on bisection steps for the index solvers.
pub const MAX_BISECTION_STEPS: usize = 100;

/// Absolute tolerance on the returned index.
pub const INDEX_TOLERANCE: f64 = 1e-9;

/// Tolerance on `pulls * D(mu || q) - f(n)` before bisection may stop.
///
/// The q-tolerance alone is not enough: with many pulls a 1e-9 error on q
/// moves the left-hand side by far more than this.
pub const BUDGET_TOLERANCE: f64 = 1e-8;

/// Tuning constant `c` of the exploration function
/// `f(n) = log(n) + c * log(log(n))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplorationSchedule<T> {
    c: T,
}

impl<T: Real> ExplorationSchedule<T> {
    pub const DEFAULT_C: f64 = 3.1;

    /// Builds a schedule; `c` must be strictly greater than 3.
    pub fn new(c: T) -> Result<Self> {
        if !(c > T::lit(3.0)) || !c.is_finite() {
            return Err(Error::domain(format!("exploration constant c = {c} must be finite and > 3")));
        }
        Ok(Self { c })
    }

    pub fn c(&self) -> T {
        self.c
    }

    /// `f(n)` with both logarithms clamped at zero, so the budget is zero at
    /// `n = 1` and never negative.
    pub fn budget(&self, n: u64) -> T {
        let log_n = T::from_count(n).ln().max(T::zero());
        let log_log_n = if log_n > T::zero() { log_n.ln().max(T::zero()) } else { T::zero() };
        log_n + self.c * log_log_n
    }
}

impl<T: Real> Default for ExplorationSchedule<T> {
    fn default() -> Self {
        Self { c: T::lit(Self::DEFAULT_C) }
    }
}

/// Free-function form of [`ExplorationSchedule::budget`].
pub fn exploration_budget<T: Real>(n: u64, schedule: &ExplorationSchedule<T>) -> T {
    schedule.budget(n)
}

fn check_probability<T: Real>(name: &str, x: T) -> Result<()> {
    if x >= T::zero() && x <= T::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {x} is not a probability")))
    }
}

/// `D(p || q)` for Bernoulli distributions, with `0 ln 0 = 0`.
///
/// Returns `+inf` when `q` is 0 or 1 and differs from `p`.
pub fn bernoulli_kl<T: Real>(p: T, q: T) -> Result<T> {
    check_probability("p", p)?;
    check_probability("q", q)?;
    Ok(kl(p, q))
}

/// Unchecked divergence; both arguments must already lie in `[0, 1]`.
#[inline]
pub(crate) fn kl<T: Real>(p: T, q: T) -> T {
    if p == q {
        return T::zero();
    }
    let one = T::one();
    if q <= T::zero() || q >= one {
        return T::infinity();
    }
    let mut d = T::zero();
    if p > T::zero() {
        d = d + p * (p / q).ln();
    }
    if p < one {
        d = d + (one - p) * ((one - p) / (one - q)).ln();
    }
    d.max(T::zero())
}

/// Minimal divergence from `theta1` to the set of parameters with mean at
/// least `theta2`: `D(theta1 || theta2)` if `theta1 < theta2`, else zero.
pub fn i_min<T: Real>(theta1: T, theta2: T) -> Result<T> {
    check_probability("theta1", theta1)?;
    check_probability("theta2", theta2)?;
    if theta1 < theta2 {
        Ok(kl(theta1, theta2))
    } else {
        Ok(T::zero())
    }
}

fn check_index_args<T: Real>(mu_hat: T, pulls: u64) -> Result<()> {
    check_probability("mu_hat", mu_hat)?;
    if pulls == 0 {
        return Err(Error::domain("confidence index needs at least one pull of the arm"));
    }
    Ok(())
}

/// KL-UCB index: the largest `q` in `[mu_hat, 1]` with
/// `pulls * D(mu_hat || q) <= f(n)`.
pub fn kl_ucb_index<T: Real>(mu_hat: T, pulls: u64, n: u64, schedule: &ExplorationSchedule<T>) -> Result<T> {
    check_index_args(mu_hat, pulls)?;
    Ok(upper_index(mu_hat, pulls, schedule.budget(n)))
}

/// KL-LCB index: the smallest `q` in `[0, mu_hat]` with
/// `pulls * D(mu_hat || q) <= f(n)`.
pub fn kl_lcb_index<T: Real>(mu_hat: T, pulls: u64, n: u64, schedule: &ExplorationSchedule<T>) -> Result<T> {
    check_index_args(mu_hat, pulls)?;
    Ok(lower_index(mu_hat, pulls, schedule.budget(n)))
}

/// Upper index for an explicit budget `f` (the right-hand side `f(n)`).
pub(crate) fn upper_index<T: Real>(mu_hat: T, pulls: u64, budget: T) -> T {
    let one = T::one();
    if mu_hat >= one {
        return one;
    }
    if !(budget > T::zero()) {
        return mu_hat;
    }
    if budget.is_infinite() {
        return one;
    }
    let t = T::from_count(pulls);
    let radius = budget / t;
    let (lo, hi, collapsed) = bisect(mu_hat, one, |q| kl(mu_hat, q) <= radius, |q| budget - t * kl(mu_hat, q));
    if collapsed && hi >= one {
        // root sits within one ulp of 1
        one
    } else {
        lo
    }
}

/// Lower index for an explicit budget `f`.
pub(crate) fn lower_index<T: Real>(mu_hat: T, pulls: u64, budget: T) -> T {
    let zero = T::zero();
    if mu_hat <= zero {
        return zero;
    }
    if !(budget > zero) {
        return mu_hat;
    }
    if budget.is_infinite() {
        return zero;
    }
    let t = T::from_count(pulls);
    let radius = budget / t;
    // Bisect on the mirrored variable so the feasible side is always `lo`.
    let (lo, hi, collapsed) =
        bisect(-mu_hat, zero, |neg_q| kl(mu_hat, -neg_q) <= radius, |neg_q| budget - t * kl(mu_hat, -neg_q));
    if collapsed && hi >= zero {
        zero
    } else {
        -lo
    }
}

/// Bisection on `[lo, hi]` where `feasible(lo)` holds and `feasible(hi)`
/// does not. Stops once the bracket is narrower than [`INDEX_TOLERANCE`]
/// and the slack at `lo` is below [`BUDGET_TOLERANCE`], when the bracket
/// collapses to adjacent floats, or after [`MAX_BISECTION_STEPS`].
fn bisect<T: Real>(
    mut lo: T,
    mut hi: T,
    feasible: impl Fn(T) -> bool,
    slack: impl Fn(T) -> T,
) -> (T, T, bool) {
    let q_tol = T::lit(INDEX_TOLERANCE);
    let budget_tol = T::lit(BUDGET_TOLERANCE);
    let two = T::lit(2.0);
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi {
            return (lo, hi, true);
        }
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= q_tol && slack(lo) <= budget_tol {
            break;
        }
    }
    (lo, hi, false)
}
