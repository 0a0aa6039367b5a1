//! Monte-Carlo regret experiments: single trials, parallel repetition and
//! aggregation into mean / standard-error curves with the bound overlay.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound_curve, lower_bound, BoundResult};
use crate::env::{BernoulliArms, RewardStream, TrialSeed, GENERATOR};
use crate::error::{Error, Result};
use crate::instance::{Arm, BanditInstance, Direction, Objective};
use crate::kl::ExplorationSchedule;
use crate::num::Real;
use crate::oracle::optimal_arm;
use crate::policies::{make_policy, Policy, PolicyKind};

pub const DEFAULT_CHECKPOINTS: usize = 50;

/// `count` log-spaced rounds from `K + 1` to `horizon`, plus `horizon`
/// itself; just `[horizon]` when there is no round after initialization.
pub fn log_checkpoints(num_arms: usize, horizon: u64, count: usize) -> Vec<u64> {
    let first = num_arms as u64 + 1;
    if horizon < first || count <= 1 {
        return vec![horizon];
    }
    let (lo, hi) = ((first as f64).ln(), (horizon as f64).ln());
    let mut points: Vec<u64> = (0..count)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (count - 1) as f64;
            (x.exp().round() as u64).clamp(first, horizon)
        })
        .collect();
    points.push(horizon);
    points.sort_unstable();
    points.dedup();
    points
}

/// Drives `policy` for rounds `policy.round() + 1 ..= horizon`, calling
/// `observe(round, arm)` after every pull.
pub fn run_policy<P: Policy>(
    policy: &mut P,
    arms: &BernoulliArms,
    stream: &mut RewardStream,
    horizon: u64,
    mut observe: impl FnMut(u64, Arm),
) -> Result<()> {
    while policy.round() < horizon {
        let arm = policy.select_arm();
        let reward = arms.sample(arm, stream);
        policy.update(arm, reward)?;
        observe(policy.round(), arm);
    }
    Ok(())
}

/// Cumulative pseudo-regret of one trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretTrace<T> {
    pub trial_index: u64,
    pub checkpoints: Vec<u64>,
    pub values: Vec<T>,
    /// Final pull counts, instance labeling.
    pub pull_counts: Vec<u64>,
    /// Share of rounds in `(T/2, T]` that sampled the optimal arm.
    pub late_optimal_fraction: f64,
}

/// Everything that determines an experiment's output.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec<T> {
    pub instance: BanditInstance<T>,
    pub objective: Objective,
    pub policy: PolicyKind,
    pub schedule: ExplorationSchedule<T>,
    pub horizon: u64,
    pub trials: u64,
    pub seed: u64,
    pub checkpoints: usize,
    /// Threads for trial-level parallelism; does not affect results.
    pub workers: usize,
}

impl<T: Real> ExperimentSpec<T> {
    /// Defaults: the objective's own policy, `c = 3.1`, `T = 10^6`,
    /// 30 trials, seed 0, 50 checkpoints, one worker per core.
    pub fn new(instance: BanditInstance<T>, objective: Objective) -> Self {
        Self {
            instance,
            objective,
            policy: PolicyKind::for_objective(objective),
            schedule: ExplorationSchedule::default(),
            horizon: 1_000_000,
            trials: 30,
            seed: 0,
            checkpoints: DEFAULT_CHECKPOINTS,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.instance.validate()?;
        let k = self.instance.num_arms() as u64;
        if self.horizon < k {
            return Err(Error::domain(format!("horizon {} is shorter than the {k} initial pulls", self.horizon)));
        }
        if self.trials == 0 {
            return Err(Error::domain("need at least one trial"));
        }
        if self.workers == 0 {
            return Err(Error::domain("need at least one worker"));
        }
        optimal_arm(&self.instance, self.objective)?;
        Ok(())
    }

    pub fn checkpoint_rounds(&self) -> Vec<u64> {
        log_checkpoints(self.instance.num_arms(), self.horizon, self.checkpoints)
    }

    pub fn manifest(&self) -> Manifest {
        Manifest {
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            scalar: std::any::type_name::<T>().to_string(),
            generator: GENERATOR.to_string(),
            means: self.instance.means().iter().map(|m| m.as_f64()).collect(),
            tau: self.instance.tau().as_f64(),
            direction: self.instance.direction(),
            objective: self.objective,
            policy: self.policy,
            c: self.schedule.c().as_f64(),
            horizon: self.horizon,
            trials: self.trials,
            experiment_seed: self.seed,
            checkpoints: self.checkpoints,
        }
    }
}

/// Reproduction record for an experiment. Trial `i` uses the stream
/// `TrialSeed { experiment_seed, trial_index: i }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub crate_version: String,
    pub scalar: String,
    pub generator: String,
    pub means: Vec<f64>,
    pub tau: f64,
    pub direction: Direction,
    pub objective: Objective,
    pub policy: PolicyKind,
    pub c: f64,
    pub horizon: u64,
    pub trials: u64,
    pub experiment_seed: u64,
    pub checkpoints: usize,
}

/// Runs trial `trial_index` of `spec`, recording regret at `checkpoints`
/// (ascending, within `1..=horizon`).
pub fn run_trial<T: Real>(spec: &ExperimentSpec<T>, trial_index: u64, checkpoints: &[u64]) -> Result<RegretTrace<T>> {
    let instance = &spec.instance;
    let best = optimal_arm(instance, spec.objective)?;
    let mut policy = make_policy(instance, spec.policy, spec.schedule)?;
    let arms = BernoulliArms::new(instance);
    let mut stream = TrialSeed::new(spec.seed, trial_index).stream();

    let horizon = spec.horizon;
    let half = horizon / 2;
    let mut late_optimal = 0u64;
    let mut values = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    // initialization rounds are not observed when the first checkpoint is early
    let mut record = |round: u64, policy: &dyn Policy, values: &mut Vec<T>| {
        while next.peek().is_some_and(|&&t| t == round) {
            values.push(best.regret(&policy.pulls()));
            next.next();
        }
    };
    while policy.round() < horizon {
        let round = policy.round();
        record(round, &policy, &mut values);
        let arm = policy.select_arm();
        let reward = arms.sample(arm, &mut stream);
        policy.update(arm, reward)?;
        if round + 1 > half && arm == best.arm {
            late_optimal += 1;
        }
    }
    record(horizon, &policy, &mut values);
    if values.len() != checkpoints.len() {
        return Err(Error::domain("checkpoints must be ascending rounds within the horizon"));
    }
    let window = horizon - half;
    Ok(RegretTrace {
        trial_index,
        checkpoints: checkpoints.to_vec(),
        values,
        pull_counts: policy.pulls(),
        late_optimal_fraction: if window == 0 { 0.0 } else { late_optimal as f64 / window as f64 },
    })
}

/// Mean regret curve over trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateResult<T> {
    pub checkpoints: Vec<u64>,
    pub mean_regret: Vec<T>,
    /// Sample standard deviation over `sqrt(trials)`; absent for one trial.
    pub stderr: Vec<Option<T>>,
    pub trials: u64,
    /// `C * ln t`, absent when the bound is undefined for the instance.
    pub lower_bound: Vec<Option<T>>,
    pub bound: Option<BoundResult<T>>,
    /// Mean over trials of the late optimal-arm share.
    pub late_optimal_fraction: f64,
    pub mean_pulls: Vec<f64>,
    pub manifest: Manifest,
}

/// Runs every trial of `spec` on `spec.workers` threads and aggregates.
pub fn run_monte_carlo<T: Real>(spec: &ExperimentSpec<T>) -> Result<AggregateResult<T>> {
    spec.validate()?;
    let checkpoints = spec.checkpoint_rounds();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<Result<RegretTrace<T>>> = pool.install(|| {
        (0..spec.trials)
            .into_par_iter()
            .map(|i| run_trial(spec, i, &checkpoints).map_err(|e| Error::Trial { trial: i, source: Box::new(e) }))
            .collect()
    });
    let traces = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let bound = match lower_bound(&spec.instance, spec.objective) {
        Ok(b) => Some(b),
        Err(Error::DegenerateTarget { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(aggregate(traces, bound, spec.manifest()))
}

/// Combines traces in trial-index order, whatever order they arrive in.
pub fn aggregate<T: Real>(
    mut traces: Vec<RegretTrace<T>>,
    bound: Option<BoundResult<T>>,
    manifest: Manifest,
) -> AggregateResult<T> {
    assert!(!traces.is_empty(), "aggregate needs at least one trace");
    traces.sort_by_key(|t| t.trial_index);
    let n = traces.len();
    let checkpoints = traces[0].checkpoints.clone();
    let count = T::from_count(n as u64);

    let mut mean_regret = Vec::with_capacity(checkpoints.len());
    let mut stderr = Vec::with_capacity(checkpoints.len());
    for j in 0..checkpoints.len() {
        let mean = traces.iter().fold(T::zero(), |acc, t| acc + t.values[j]) / count;
        mean_regret.push(mean);
        stderr.push((n > 1).then(|| {
            let ss = traces.iter().fold(T::zero(), |acc, t| {
                let d = t.values[j] - mean;
                acc + d * d
            });
            (ss / T::from_count(n as u64 - 1)).sqrt() / count.sqrt()
        }));
    }
    let lower_bound = match &bound {
        Some(b) => bound_curve(b, &checkpoints).into_iter().map(|(_, v)| Some(v)).collect(),
        None => vec![None; checkpoints.len()],
    };
    let late_optimal_fraction = traces.iter().map(|t| t.late_optimal_fraction).sum::<f64>() / n as f64;
    let k = traces[0].pull_counts.len();
    let mean_pulls = (0..k)
        .map(|i| traces.iter().map(|t| t.pull_counts[i] as f64).sum::<f64>() / n as f64)
        .collect();
    AggregateResult {
        checkpoints,
        mean_regret,
        stderr,
        trials: n as u64,
        lower_bound,
        bound,
        late_optimal_fraction,
        mean_pulls,
        manifest,
    }
}
