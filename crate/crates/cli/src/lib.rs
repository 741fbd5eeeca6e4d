//! Library surface of the `swissrank` binary: configuration types and
//! the runner that turns a results file into ranking artifacts on disk.
//! Kept as a library so integration tests can drive runs without
//! spawning processes.

pub mod config;
pub mod runner;

pub use config::{EmSettings, FormatChoice, MethodChoice, MetricChoice, RunConfig};
pub use runner::{run, CliError, RunSummary};
