//! Experiment sweeps over the HRIS estimation chain: Monte Carlo validation
//! of the closed-form MSEs, the shared-`rho` trade-off, optimizer traces and
//! cascaded-NMSE curves against internal baselines.
//!
//! Every sweep is a pure function of its [`ExperimentConfig`]; trials run in
//! parallel but are reduced in a fixed order, so output is reproducible.

pub mod baselines;
pub mod config;
pub mod error;
pub mod montecarlo;
pub mod output;
pub mod stats;
pub mod sweeps;

pub use baselines::Baseline;
pub use config::ExperimentConfig;
pub use error::{ExperimentError, Result};
pub use output::Table;
