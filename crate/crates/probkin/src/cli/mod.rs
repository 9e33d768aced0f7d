//! Command-line front end: parse run configurations, drive the library, and
//! emit trajectories plus metadata reports for external plotting.

pub mod config;
pub mod run;

pub use config::{parse_config, InitialState, Mode, OutputFormat, RunConfig};
pub use run::{exit_code, expand_sweep, run, RunSummary};
