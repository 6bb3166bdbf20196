//! Preset parameter sweeps behind the `noisy-bisect` binary: configuration
//! parsing, sweep execution and CSV / plot-file output.

mod config;
mod preset;
mod report;

pub use config::{ConfigError, Settings};
pub use preset::{ExperimentPreset, PresetName, SweepParam};
pub use report::{format_g12, run_preset, CrossingRow, PresetReport, ResultRow, CSV_HEADER};
