//! The `simulate`, `bound` and `oracle` subcommands, returning the text to
//! print so they can be driven from tests.

use std::fmt::Write;
use std::path::PathBuf;

use monotone_bandits::bounds::DEFAULT_RESOLUTION;
use monotone_bandits::{lower_bound, optimal_arm, run_monte_carlo, verify_bound_numerically, AggregateResult, Bound};

use crate::config::ExperimentConfig;
use crate::csv;
use crate::error::{CliError, CliResult};
use crate::svg;

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub trials: Option<u64>,
    pub horizon: Option<u64>,
    pub seed: Option<u64>,
    pub out: Option<String>,
    pub workers: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, config: &mut ExperimentConfig) {
        if let Some(t) = self.trials {
            config.trials = t;
        }
        if let Some(h) = self.horizon {
            config.horizon = h;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(o) = &self.out {
            config.out = Some(o.clone());
        }
        if let Some(w) = self.workers {
            config.workers = Some(w);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub csv: PathBuf,
    pub manifest: PathBuf,
    pub svg: PathBuf,
}

impl Artifacts {
    pub fn for_prefix(prefix: &str) -> Self {
        Self {
            csv: PathBuf::from(format!("{prefix}.csv")),
            manifest: PathBuf::from(format!("{prefix}.manifest.json")),
            svg: PathBuf::from(format!("{prefix}.svg")),
        }
    }
}

pub const DEFAULT_PREFIX: &str = "regret";

/// Runs the experiment and writes `<prefix>.csv`, `<prefix>.manifest.json`
/// and `<prefix>.svg`.
pub fn simulate(config: &ExperimentConfig) -> CliResult<(AggregateResult<f64>, Artifacts, String)> {
    let spec = config.to_experiment()?;
    let result = run_monte_carlo(&spec)?;
    let prefix = config.out.as_deref().unwrap_or(DEFAULT_PREFIX);
    let artifacts = Artifacts::for_prefix(prefix);
    if let Some(dir) = artifacts.csv.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }

    let rows = csv::rows(&result);
    std::fs::write(&artifacts.csv, csv::render(&rows))?;
    let manifest = serde_json::to_string_pretty(&result.manifest).map_err(|e| CliError::runtime(e.to_string()))?;
    std::fs::write(&artifacts.manifest, manifest + "\n")?;
    let title = format!("{} with {}, K = {}", config.objective, spec.policy, spec.instance.num_arms());
    std::fs::write(&artifacts.svg, svg::render(&title, &rows))?;

    let last = result.checkpoints.len() - 1;
    let mut summary = String::new();
    let _ = writeln!(summary, "policy {} on {} over T = {}, {} trials", spec.policy, config.objective, spec.horizon, spec.trials);
    let _ = write!(summary, "final mean regret {:.3}", result.mean_regret[last]);
    if let Some(se) = result.stderr[last] {
        let _ = write!(summary, " +/- {se:.3}");
    }
    summary.push('\n');
    match result.lower_bound[last] {
        Some(lb) => {
            let _ = writeln!(summary, "lower bound C ln T = {lb:.3} (ratio {:.3})", result.mean_regret[last] / lb);
        }
        None => summary.push_str("lower bound undefined for this instance\n"),
    }
    let _ = writeln!(summary, "optimal-arm share over the second half {:.4}", result.late_optimal_fraction);
    let _ = writeln!(summary, "wrote {}, {}, {}", artifacts.csv.display(), artifacts.manifest.display(), artifacts.svg.display());
    Ok((result, artifacts, summary))
}

fn bound_text(config: &ExperimentConfig, bound: &Bound) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "objective: {}", config.objective);
    let _ = writeln!(out, "constant: {}", bound.constant);
    for term in &bound.terms {
        let _ = writeln!(
            out,
            "term: arm {} coefficient {} target {} gap {}",
            term.arm, term.coefficient, term.target, term.gap
        );
    }
    let arms: Vec<String> = bound.terms.iter().map(|t| t.arm.to_string()).collect();
    out.push_str("objective,constant,arms\n");
    let _ = writeln!(out, "{},{:.16e},{}", config.objective, bound.constant, arms.join(";"));
    out
}

/// Closed-form constant, plus the numerical cross-check when `verify` holds
/// a grid resolution.
pub fn bound(config: &ExperimentConfig, verify: Option<usize>) -> CliResult<String> {
    let instance = config.instance()?;
    let bound = lower_bound(&instance, config.objective)?;
    let mut out = bound_text(config, &bound);
    if let Some(resolution) = verify {
        let report = verify_bound_numerically(&instance, config.objective, resolution)?;
        let _ = writeln!(out, "verify: resolution {resolution}, {} grid points, {} cuts", report.grid_points, report.constraints);
        let _ = writeln!(out, "verify: closed form {}", report.closed_form);
        let _ = writeln!(out, "verify: numerical {}", report.numerical);
        let _ = writeln!(out, "verify: relative difference {:.3e}", report.relative_difference);
        let coefficients: Vec<String> = report.coefficients.iter().map(|(a, c)| format!("C_{a} = {c:.6}")).collect();
        let _ = writeln!(out, "verify: {}", coefficients.join(", "));
    }
    Ok(out)
}

pub const DEFAULT_VERIFY_RESOLUTION: usize = DEFAULT_RESOLUTION;

pub fn oracle(config: &ExperimentConfig) -> CliResult<String> {
    let instance = config.instance()?;
    let best = optimal_arm(&instance, config.objective)?;
    let mut out = String::new();
    let _ = writeln!(out, "objective: {}", config.objective);
    let _ = writeln!(out, "optimal arm: {}", best.arm);
    let _ = writeln!(out, "mean: {}", instance.mean(best.arm));
    if best.tie {
        out.push_str("tie: another arm is equally close to the threshold; the smaller index wins\n");
    }
    let gaps: Vec<String> = best.gaps.iter().map(|g| g.to_string()).collect();
    let _ = writeln!(out, "gaps: {}", gaps.join(", "));
    Ok(out)
}
