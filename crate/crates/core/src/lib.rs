//! Threshold identification in bandits whose arm means are monotone in the
//! arm index.
//!
//! Given Bernoulli arms with strictly monotone means and a threshold `tau`,
//! the goal is to find the arm that first crosses `tau`, the arm `r` places
//! away from the crossing, or the arm closest to `tau`. The crate provides
//! the instance model, the KL-based confidence indices, the three
//! sequential policies, asymptotic lower-bound constants with a numerical
//! verifier, and a deterministic Monte-Carlo harness.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! unsuffixed aliases below fix it to `f64`.

pub mod bounds;
pub mod env;
pub mod error;
pub mod instance;
pub mod kl;
mod lp;
pub mod num;
pub mod oracle;
pub mod policies;
pub mod sim;

pub use bounds::{
    bound_curve, crossing_bound, lower_bound, proximity_bound, ranked_bound, verify_bound_numerically,
    BoundResult, BoundTerm, VerifyReport,
};
pub use env::{sample_reward, BernoulliArms, RewardStream, TrialSeed, GENERATOR};
pub use error::{Error, Result};
pub use instance::{Arm, BanditInstance, Direction, Objective, Relabel, Relabeled, Violation};
pub use kl::{bernoulli_kl, exploration_budget, i_min, kl_lcb_index, kl_ucb_index, ExplorationSchedule};
pub use num::Real;
pub use oracle::{cumulative_pseudo_regret, optimal_arm, OptimalArm};
pub use policies::{make_below_policy, make_policy, InstancePolicy, Policy, PolicyKind, PolicyState, ThresholdPolicy};

pub use sim::{
    aggregate, log_checkpoints, run_monte_carlo, run_policy, run_trial, AggregateResult, ExperimentSpec, Manifest,
    RegretTrace,
};

pub type Instance = BanditInstance<f64>;
pub type Instance32 = BanditInstance<f32>;
pub type Schedule = ExplorationSchedule<f64>;
pub type Schedule32 = ExplorationSchedule<f32>;
pub type Bound = BoundResult<f64>;
pub type Bound32 = BoundResult<f32>;
pub type Experiment = ExperimentSpec<f64>;
pub type Experiment32 = ExperimentSpec<f32>;
