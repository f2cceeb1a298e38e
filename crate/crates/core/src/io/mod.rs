//! Configuration, initial data and output formats.

pub mod config;
pub mod initial;
pub mod output;

pub use config::{apply_override, emit_config, parse_config, parse_config_with, RunConfig};
pub use initial::{synthesize_initial, ComponentSpec, InitialDataSpec, Mode};
pub use output::{to_toml, trajectory_csv, write_text, SweepReport, TRAJECTORY_HEADER};
