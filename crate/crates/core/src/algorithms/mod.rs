//! Top-level quantile-exploration solvers.
//!
//! | problem | threshold | population | solver |
//! |---------|-----------|------------|--------|
//! | Q-IK    | known     | infinite   | [`al_q_ik`], [`cb_al_q_ik`] |
//! | Q-IU    | unknown   | infinite   | [`al_q_iu`] |
//! | Q-FK    | known     | finite     | [`al_q_fk`] |
//! | Q-FU    | unknown   | finite     | [`al_q_fu`] |
//!
//! [`iur_baseline`] is the single-arm rejection sampler the Q-IK solvers
//! improve on.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::confidence::BoundKind;
use crate::env::{Arm, ArmSource};
use crate::error::{Error, Result};

mod finite;
mod iur;
mod known;
mod unknown;

pub use finite::{al_q_fk, al_q_fk_with, al_q_fu, al_q_fu_with};
pub use iur::{iur_baseline, iur_repetition_samples};
pub use known::{al_q_ik, al_q_ik_split, cb_al_q_ik, solve_known, DEFAULT_EPS1_SHARE};
pub use unknown::{al_q_iu, al_q_iu_with};

pub const PHASE_ESTIMATION: &str = "estimation";
pub const PHASE_SELECTION: &str = "selection";
pub const PHASE_ACCEPTANCE: &str = "acceptance";

/// How a known-threshold repetition picks its candidate arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selection {
    /// Median-Elimination at `ε₁ = eps1_share·ε`, then `n₂` acceptance samples.
    MedianElimination { eps1_share: f64 },
    /// PACMaxing for both the candidate and the comparison with a constant arm.
    PacMaxing { bound: BoundKind },
}

impl Default for Selection {
    fn default() -> Self {
        Selection::MedianElimination {
            eps1_share: DEFAULT_EPS1_SHARE,
        }
    }
}

/// Output of a solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileResult {
    pub arms: Vec<Arm>,
    pub total_samples: u64,
    /// Samples per phase; the values sum to `total_samples`.
    pub phases: BTreeMap<String, u64>,
    /// Accept/reject rounds across all inner known-threshold calls.
    pub repetitions: u64,
    /// Threshold estimate, for the unknown-threshold solvers.
    pub lambda_hat: Option<f64>,
    /// Fraction handed to each inner call of the finite solvers.
    pub rho_trace: Vec<f64>,
}

impl QuantileResult {
    pub fn phase(&self, name: &str) -> u64 {
        self.phases.get(name).copied().unwrap_or(0)
    }
}

/// Accumulates per-phase sample counts straight from the source counter.
pub(crate) struct Tally {
    start: u64,
    phases: BTreeMap<String, u64>,
    repetitions: u64,
}

impl Tally {
    pub(crate) fn new(src: &ArmSource) -> Self {
        Tally {
            start: src.samples(),
            phases: BTreeMap::new(),
            repetitions: 0,
        }
    }

    pub(crate) fn phase<T>(
        &mut self,
        name: &str,
        src: &mut ArmSource,
        f: impl FnOnce(&mut ArmSource) -> Result<T>,
    ) -> Result<T> {
        let before = src.samples();
        let out = f(src)?;
        *self.phases.entry(name.to_owned()).or_insert(0) += src.samples() - before;
        Ok(out)
    }

    pub(crate) fn absorb(&mut self, inner: &QuantileResult) {
        for (k, v) in &inner.phases {
            *self.phases.entry(k.clone()).or_insert(0) += v;
        }
        self.repetitions += inner.repetitions;
    }

    pub(crate) fn repetition(&mut self) {
        self.repetitions += 1;
    }

    pub(crate) fn finish(self, src: &ArmSource, arms: Vec<Arm>) -> Result<QuantileResult> {
        let total = src.samples() - self.start;
        let reported: u64 = self.phases.values().sum();
        if reported != total {
            return Err(Error::Accounting {
                reported,
                counted: total,
            });
        }
        Ok(QuantileResult {
            arms,
            total_samples: total,
            phases: self.phases,
            repetitions: self.repetitions,
            lambda_hat: None,
            rho_trace: Vec::new(),
        })
    }
}

/// The four problem variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemVariant {
    #[serde(rename = "Q-IK")]
    InfiniteKnown,
    #[serde(rename = "Q-IU")]
    InfiniteUnknown,
    #[serde(rename = "Q-FK")]
    FiniteKnown,
    #[serde(rename = "Q-FU")]
    FiniteUnknown,
}

impl ProblemVariant {
    pub fn is_finite(self) -> bool {
        matches!(
            self,
            ProblemVariant::FiniteKnown | ProblemVariant::FiniteUnknown
        )
    }

    pub fn knows_threshold(self) -> bool {
        matches!(
            self,
            ProblemVariant::InfiniteKnown | ProblemVariant::FiniteKnown
        )
    }
}

/// Which arms count as "top".
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantile {
    /// Top `rho` fraction of an infinite population.
    Fraction(f64),
    /// Top `m` of `n` finite arms.
    Rank { m: usize, n: usize },
}

/// A fully specified problem instance (minus the arms themselves).
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub variant: ProblemVariant,
    pub k: usize,
    pub quantile: Quantile,
    pub eps: f64,
    pub delta: f64,
    pub lambda: Option<f64>,
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        let spec_err = |msg: &str| Err(Error::Spec(msg.to_owned()));
        if self.k == 0 {
            return spec_err("k must be at least 1");
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::param("eps", self.eps, "must lie in (0, 1)"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::param("delta", self.delta, "must lie in (0, 1)"));
        }
        match (self.variant.knows_threshold(), self.lambda) {
            (true, None) => return spec_err("known-threshold variants need lambda"),
            (false, Some(_)) => return spec_err("unknown-threshold variants take no lambda"),
            _ => {}
        }
        match (self.variant, self.quantile) {
            (v, Quantile::Fraction(rho)) if !v.is_finite() => {
                if !(rho > 0.0 && rho < 1.0) {
                    return Err(Error::param("rho", rho, "must lie in (0, 1)"));
                }
            }
            (v, Quantile::Rank { m, n }) if v.is_finite() => {
                if self.k > m || 2 * m > n {
                    return spec_err("finite variants need k <= m <= n/2");
                }
                if v == ProblemVariant::FiniteUnknown && 2 * self.k >= m {
                    return spec_err("Q-FU needs 2k < m");
                }
            }
            _ => return spec_err("finite variants take (m, n), infinite ones take rho"),
        }
        Ok(())
    }

    /// `ρ` for infinite variants, `m/n` for finite ones.
    pub fn fraction(&self) -> f64 {
        match self.quantile {
            Quantile::Fraction(rho) => rho,
            Quantile::Rank { m, n } => m as f64 / n as f64,
        }
    }
}
