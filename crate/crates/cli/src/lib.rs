//! Library side of the `mtb` command: config files, presets, CSV / SVG
//! artifacts and the three subcommands.

pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod presets;
pub mod svg;

pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
