//! Configuration, parameter sweeps and CSV output.

mod config;
mod csv;
mod sweep;

pub use config::{parse_config, parse_config_str, parse_schemes, parse_values, Config, Scenario};
pub use csv::{emit_csv, emit_trace, to_csv, CSV_HEADER};
pub use sweep::{preset, run_sweep, Preset, SweepResult, SweepRow, SweepSpec, SweptParameter, PRESETS};
