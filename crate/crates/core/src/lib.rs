//! PAC quantile exploration for stochastic multi-armed bandits.
//!
//! Given a (finite or infinite) population of arms with rewards in `[0, 1]`,
//! the solvers in [`algorithms`] return `k` distinct arms whose means lie in
//! the top `ρ` fraction (or top `m` of `n`) up to a tolerance `ε`, with
//! error probability at most `δ`.
//!
//! Module map:
//! - [`env`]: arms, reward laws, mean priors and the sample-counting [`ArmSource`].
//! - [`confidence`]: Hoeffding and Bernoulli-KL confidence bounds plus the
//!   per-count error schedule used by PACMaxing.
//! - [`subroutines`]: Median-Elimination, Halving, PACMaxing, LambdaEstimation.
//! - [`algorithms`]: the top-level solvers and the IUR baseline.
//! - [`verify`]: ground-truth scoring and failure-rate statistics.
//! - [`experiment`]: config-driven seeded sweeps, CSV records and comparisons.

pub mod algorithms;
pub mod confidence;
pub mod env;
mod error;
pub mod experiment;
pub mod rng;
pub mod subroutines;
pub mod verify;

pub use algorithms::{ProblemSpec, ProblemVariant, Quantile, QuantileResult, Selection};
pub use confidence::{BoundKind, BoundSchedule};
pub use env::{Arm, ArmId, ArmSource, GroundTruth, MeanPrior, Population, RewardDistribution};
pub use error::{Error, Result};
pub use verify::{FailureSummary, ScoreMode, TrialVerdict};
