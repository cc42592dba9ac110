//! Experiment harness: TOML configs, parallel execution, CSV results with
//! provenance, and SVG plots.

pub mod config;
pub mod error;
pub mod plot;
pub mod runner;
pub mod table;

pub use config::{Experiment, ExperimentConfig, ModelSpec};
pub use error::{HarnessError, Result};
pub use runner::{replay, run, RunOutcome};
