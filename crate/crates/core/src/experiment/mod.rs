//! Config-driven, seeded trial sweeps.
//!
//! A run expands an [`ExperimentConfig`] into sweep points × trials, solves
//! each trial on its own [`ArmSource`](crate::ArmSource), scores it against
//! the ground truth and emits one [`TrialRecord`] per trial in canonical
//! order (sweep-major, trial-minor).

mod compare;
mod config;
mod record;
mod runner;

pub use compare::{
    bootstrap_ratio, compare, compare_outputs, render_comparison, ComparePoint, RatioEstimate,
};
pub use config::{
    Algorithm, ArmsSpec, ExperimentConfig, ProblemSection, SelectionKind, Sweep, SweepParam,
    SweepPoint,
};
pub use record::{read_records, write_records, TrialRecord, CSV_HEADER};
pub use runner::{
    render_summary, run, run_trial, summarize, trial_seed, PointSummary, RunOutput, TrialOutcome,
};

/// Errors raised while loading or running an experiment.
#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("empty sweep axis")]
    EmptySweep,
    #[error("configs cannot be compared: {0}")]
    Mismatch(String),
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error(transparent)]
    Solver(#[from] crate::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl ExperimentError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        ExperimentError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for problems with the user's configuration rather than the run.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            ExperimentError::Config { .. }
                | ExperimentError::EmptySweep
                | ExperimentError::Mismatch(_)
                | ExperimentError::Parse(_)
        )
    }
}
