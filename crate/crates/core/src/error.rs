use thiserror::Error;

use crate::instance::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(#[from] Violation),

    #[error("no valid optimal arm: {0}")]
    NoOptimalArm(String),

    #[error("degenerate bound target {target}: must lie strictly inside (0, 1)")]
    DegenerateTarget { target: f64 },

    #[error("infeasible discretization ({0}); try a finer grid")]
    InfeasibleGrid(String),

    #[error("trial {trial} failed: {source}")]
    Trial { trial: u64, source: Box<Error> },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
