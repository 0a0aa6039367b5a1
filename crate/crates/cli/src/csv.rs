//! The regret CSV: `t,mean_regret,stderr,lower_bound`, one row per
//! checkpoint, LF endings. Reals are written with 17 significant digits so
//! they parse back to the same `f64`; absent values are empty cells.

use monotone_bandits::AggregateResult;

use crate::error::{CliError, CliResult};

pub const HEADER: &str = "t,mean_regret,stderr,lower_bound";

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub t: u64,
    pub mean_regret: f64,
    pub stderr: Option<f64>,
    pub lower_bound: Option<f64>,
}

pub fn rows(result: &AggregateResult<f64>) -> Vec<Row> {
    (0..result.checkpoints.len())
        .map(|j| Row {
            t: result.checkpoints[j],
            mean_regret: result.mean_regret[j],
            stderr: result.stderr[j],
            lower_bound: result.lower_bound[j],
        })
        .collect()
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn optional(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

pub fn render(rows: &[Row]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.t, real(r.mean_regret), optional(r.stderr), optional(r.lower_bound)));
    }
    out
}

pub fn parse(text: &str) -> CliResult<Vec<Row>> {
    let mut lines = text.lines();
    if lines.next() != Some(HEADER) {
        return Err(CliError::runtime(format!("CSV header must be `{HEADER}`")));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = |what: &str| CliError::runtime(format!("CSV line {}: bad {what}", i + 2));
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 4 {
                return Err(bad("cell count"));
            }
            let opt = |s: &str, what: &str| -> CliResult<Option<f64>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|_| bad(what))
                }
            };
            Ok(Row {
                t: cells[0].parse().map_err(|_| bad("t"))?,
                mean_regret: cells[1].parse().map_err(|_| bad("mean_regret"))?,
                stderr: opt(cells[2], "stderr")?,
                lower_bound: opt(cells[3], "lower_bound")?,
            })
        })
        .collect()
}
