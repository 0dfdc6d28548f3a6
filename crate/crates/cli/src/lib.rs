//! Configuration, scenario runs and CSV output for the `dwell` command.

pub mod compare;
pub mod config;
pub mod pipeline;

pub use compare::{compare_series, compare_systems, run_compare, summarize, Comparison, Pattern, RunSummary};
pub use config::{load_config, parse_config, ConfigError, RunConfig};
pub use pipeline::{compute, run_outputs, run_scenario, CliError, Outputs, RunManifest, RunResult, Stage};
