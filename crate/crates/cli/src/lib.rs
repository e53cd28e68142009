//! Config files, CSV/manifest output and the command implementations behind
//! the `lambdachirp` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod selfcheck;

pub use config::{parse_config, parse_run_config, parse_sweep_spec, ConfigDocument, ParsedConfig};
pub use error::CliError;
pub use output::{format_sig12, write_sweep_csv, write_trajectory_csv, RunManifest};
