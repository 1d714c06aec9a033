use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algorithms::{ProblemSpec, ProblemVariant, Quantile, Selection, DEFAULT_EPS1_SHARE};
use crate::confidence::BoundKind;
use crate::env::{ArmSource, GroundTruth, MeanPrior};

use super::ExperimentError;

/// Solver selected by an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    AlQIk,
    CbAlQIk,
    AlQIu,
    AlQFk,
    AlQFu,
    Iur,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::AlQIk => "al_q_ik",
            Algorithm::CbAlQIk => "cb_al_q_ik",
            Algorithm::AlQIu => "al_q_iu",
            Algorithm::AlQFk => "al_q_fk",
            Algorithm::AlQFu => "al_q_fu",
            Algorithm::Iur => "iur",
        }
    }

    pub fn variant(self) -> ProblemVariant {
        match self {
            Algorithm::AlQIk | Algorithm::CbAlQIk | Algorithm::Iur => ProblemVariant::InfiniteKnown,
            Algorithm::AlQIu => ProblemVariant::InfiniteUnknown,
            Algorithm::AlQFk => ProblemVariant::FiniteKnown,
            Algorithm::AlQFu => ProblemVariant::FiniteUnknown,
        }
    }
}

/// Candidate-selection routine used inside AL-Q-IU / AL-Q-FK / AL-Q-FU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionKind {
    #[default]
    MedianElimination,
    PacMaxing,
}

/// The arm population of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ArmsSpec {
    /// Infinite, means ~ Uniform([0, 1]).
    Uniform,
    /// Infinite, mean `hi` w.p. `rho`, else `lo`.
    TwoPoint { rho: f64, hi: f64, lo: f64 },
    /// Infinite, every mean equals `value`.
    Point { value: f64 },
    /// Infinite, means from a weighted finite support.
    Discrete {
        support: Vec<f64>,
        weights: Vec<f64>,
    },
    /// Finite Bernoulli arms with the listed means.
    Means { means: Vec<f64> },
    /// Finite Bernoulli arms with means `i/n`, `i = 1..=n`.
    Linear { n: usize },
}

impl ArmsSpec {
    pub fn is_finite(&self) -> bool {
        matches!(self, ArmsSpec::Means { .. } | ArmsSpec::Linear { .. })
    }

    pub fn prior(&self) -> Result<Option<MeanPrior>, ExperimentError> {
        let bad = |e: crate::Error| ExperimentError::config("arms", e.to_string());
        Ok(match self {
            ArmsSpec::Uniform => Some(MeanPrior::Uniform01),
            ArmsSpec::TwoPoint { rho, hi, lo } => {
                Some(MeanPrior::two_point(*rho, *hi, *lo).map_err(bad)?)
            }
            ArmsSpec::Point { value } => Some(MeanPrior::point(*value).map_err(bad)?),
            ArmsSpec::Discrete { support, weights } => {
                if support.len() != weights.len() {
                    return Err(ExperimentError::config(
                        "arms.weights",
                        "needs one weight per support point",
                    ));
                }
                let pairs: Vec<(f64, f64)> = support
                    .iter()
                    .copied()
                    .zip(weights.iter().copied())
                    .collect();
                Some(MeanPrior::discrete(&pairs).map_err(bad)?)
            }
            ArmsSpec::Means { .. } | ArmsSpec::Linear { .. } => None,
        })
    }

    pub fn finite_means(&self) -> Option<Vec<f64>> {
        match self {
            ArmsSpec::Means { means } => Some(means.clone()),
            ArmsSpec::Linear { n } => Some((1..=*n).map(|i| i as f64 / *n as f64).collect()),
            _ => None,
        }
    }

    /// Short label used in the CSV `prior` column.
    pub fn label(&self) -> String {
        match self {
            ArmsSpec::Uniform => "uniform".into(),
            ArmsSpec::TwoPoint { rho, hi, lo } => format!("two_point({rho};{hi};{lo})"),
            ArmsSpec::Point { value } => format!("point({value})"),
            ArmsSpec::Discrete { support, .. } => format!("discrete({} atoms)", support.len()),
            ArmsSpec::Means { means } => format!("means({} arms)", means.len()),
            ArmsSpec::Linear { n } => format!("linear({n})"),
        }
    }

    pub fn truth(&self) -> Result<GroundTruth, ExperimentError> {
        match self.finite_means() {
            Some(means) => Ok(GroundTruth::finite(&means)),
            None => Ok(GroundTruth::prior(self.prior()?.expect("infinite spec"))),
        }
    }

    pub fn source(&self, seed: u64) -> Result<ArmSource, ExperimentError> {
        match self.finite_means() {
            Some(means) => Ok(ArmSource::finite_bernoulli(&means, seed)?),
            None => Ok(ArmSource::from_prior(
                self.prior()?.expect("infinite spec"),
                seed,
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub k: usize,
    #[serde(default)]
    pub rho: Option<f64>,
    #[serde(default)]
    pub m: Option<usize>,
    pub eps: f64,
    pub delta: f64,
    /// Known threshold. Left out for known-threshold solvers, the true
    /// `λ_ρ` / `λ_[m]` is used.
    #[serde(default)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    K,
    Rho,
    M,
    Eps,
    Delta,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::K => "k",
            SweepParam::Rho => "rho",
            SweepParam::M => "m",
            SweepParam::Eps => "eps",
            SweepParam::Delta => "delta",
        }
    }
}

/// The single varied parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

fn default_trials() -> usize {
    100
}

/// A seeded trial sweep, loaded from TOML.
///
/// ```toml
/// algorithm = "al_q_ik"
/// trials = 100
/// seed = 7
///
/// [problem]
/// k = 1
/// rho = 0.1
/// eps = 0.1
/// delta = 0.1
///
/// [arms]
/// kind = "uniform"
///
/// [sweep]
/// param = "k"
/// values = [1, 2, 4]
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    #[serde(default)]
    pub bound: BoundKind,
    #[serde(default)]
    pub selection: SelectionKind,
    #[serde(default)]
    pub eps1_share: Option<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub jobs: Option<usize>,
    /// Record wall-clock time per trial. Off by default so reruns are byte-identical.
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
    pub problem: ProblemSection,
    pub arms: ArmsSpec,
    pub sweep: Sweep,
}

/// One concrete parameter setting of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub value: f64,
    pub spec: ProblemSpec,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ExperimentError> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn selection(&self) -> Selection {
        match (self.algorithm, self.selection) {
            (Algorithm::CbAlQIk, _) | (_, SelectionKind::PacMaxing) => {
                Selection::PacMaxing { bound: self.bound }
            }
            _ => Selection::MedianElimination {
                eps1_share: self.eps1_share.unwrap_or(DEFAULT_EPS1_SHARE),
            },
        }
    }

    /// Bound name for the CSV, `none` when no confidence bounds are used.
    pub fn bound_label(&self) -> &'static str {
        match self.selection() {
            Selection::PacMaxing { bound } if self.algorithm != Algorithm::Iur => bound.name(),
            _ => "none",
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.trials == 0 {
            return Err(ExperimentError::config("trials", "must be at least 1"));
        }
        if self.jobs == Some(0) {
            return Err(ExperimentError::config("jobs", "must be at least 1"));
        }
        if self.sweep.values.is_empty() {
            return Err(ExperimentError::EmptySweep);
        }
        if let Some(share) = self.eps1_share {
            if !(share > 0.0 && share < 1.0) {
                return Err(ExperimentError::config("eps1_share", "must lie in (0, 1)"));
            }
        }
        let finite = self.algorithm.variant().is_finite();
        if finite != self.arms.is_finite() {
            return Err(ExperimentError::config(
                "arms",
                format!(
                    "{} needs a {} arm set",
                    self.algorithm.name(),
                    if finite { "finite" } else { "prior-driven" }
                ),
            ));
        }
        self.arms.prior()?;
        if let Some(means) = self.arms.finite_means() {
            if means.is_empty() {
                return Err(ExperimentError::config("arms", "finite arm set is empty"));
            }
            if means.iter().any(|m| !(0.0..=1.0).contains(m)) {
                return Err(ExperimentError::config(
                    "arms.means",
                    "means must lie in [0, 1]",
                ));
            }
        }
        self.points()?;
        Ok(())
    }

    /// Number of finite arms, if any.
    pub fn arm_count(&self) -> Option<usize> {
        self.arms.finite_means().map(|m| m.len())
    }

    /// Materialises every sweep point, validating each problem spec.
    pub fn points(&self) -> Result<Vec<SweepPoint>, ExperimentError> {
        if self.sweep.values.is_empty() {
            return Err(ExperimentError::EmptySweep);
        }
        let truth = self.arms.truth()?;
        self.sweep
            .values
            .iter()
            .enumerate()
            .map(|(index, &value)| {
                let spec = self.spec_at(value, &truth)?;
                Ok(SweepPoint { index, value, spec })
            })
            .collect()
    }

    fn spec_at(&self, value: f64, truth: &GroundTruth) -> Result<ProblemSpec, ExperimentError> {
        let mut p = self.problem.clone();
        let integral = |field: &str| -> Result<usize, ExperimentError> {
            if value >= 0.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(ExperimentError::config(
                    format!("sweep.values ({field})"),
                    format!("{value} is not a non-negative integer"),
                ))
            }
        };
        match self.sweep.param {
            SweepParam::K => p.k = integral("k")?,
            SweepParam::M => p.m = Some(integral("m")?),
            SweepParam::Rho => p.rho = Some(value),
            SweepParam::Eps => p.eps = value,
            SweepParam::Delta => p.delta = value,
        }
        let variant = self.algorithm.variant();
        let quantile = match self.arm_count() {
            Some(n) => {
                let m = p.m.ok_or_else(|| {
                    ExperimentError::config("problem.m", "required for finite arm sets")
                })?;
                Quantile::Rank { m, n }
            }
            None => {
                let rho = p.rho.ok_or_else(|| {
                    ExperimentError::config("problem.rho", "required for prior-driven arms")
                })?;
                Quantile::Fraction(rho)
            }
        };
        let lambda = if variant.knows_threshold() {
            Some(match p.lambda {
                Some(l) => l,
                None => match quantile {
                    Quantile::Fraction(rho) => truth
                        .lambda_rho(rho)
                        .map_err(|e| ExperimentError::config("problem.rho", e.to_string()))?,
                    Quantile::Rank { m, .. } => truth
                        .lambda_rank(m)
                        .map_err(|e| ExperimentError::config("problem.m", e.to_string()))?,
                },
            })
        } else {
            if p.lambda.is_some() {
                return Err(ExperimentError::config(
                    "problem.lambda",
                    format!("{} does not take a known threshold", self.algorithm.name()),
                ));
            }
            None
        };
        let spec = ProblemSpec {
            variant,
            k: p.k,
            quantile,
            eps: p.eps,
            delta: p.delta,
            lambda,
        };
        spec.validate()
            .map_err(|e| ExperimentError::config("problem", e.to_string()))?;
        // The unknown-threshold solvers need ρ, ε, δ below 1/2.
        if !variant.knows_threshold()
            && (spec.eps >= 0.5 || spec.delta >= 0.5 || spec.fraction() > 0.5)
        {
            return Err(ExperimentError::config(
                "problem",
                "unknown-threshold solvers need rho <= 1/2 and eps, delta < 1/2",
            ));
        }
        Ok(spec)
    }
}
