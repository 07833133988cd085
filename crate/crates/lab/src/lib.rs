//! Experiment harness for the saec library: closed-form bound calculators,
//! Monte Carlo and exhaustive error estimation, seeded scenario runners, and
//! deterministic JSON reporting. The `saec` binary exposes the same surface
//! on the command line.

pub mod bounds;
pub mod config;
pub mod estimator;
pub mod report;
pub mod scenarios;
pub mod stats;

use thiserror::Error;

pub use bounds::{converse_max_rate, rand_bound};
pub use config::{ConfigError, ExperimentConfig, Scenario};
pub use estimator::{estimate_error, exact_error, ExactOutcome, MessagePolicy, PolicyOutcome};
pub use report::{Assertion, Report};
pub use scenarios::run_experiment;
pub use stats::{wilson_interval, ErrorEstimate};

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Gf2(#[from] saec::gf2::Gf2Error),
    #[error(transparent)]
    Code(#[from] saec::codes::CodeError),
    #[error(transparent)]
    Model(#[from] saec::error_models::ErrorModelError),
    #[error(transparent)]
    Decoder(#[from] saec::decoders::DecoderError),
    #[error(transparent)]
    Recon(#[from] saec::reconstruction::ReconError),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}
