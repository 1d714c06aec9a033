//! Ground-truth scoring and failure-rate statistics.

use std::collections::HashSet;

use crate::algorithms::{ProblemSpec, ProblemVariant, Quantile, QuantileResult};
use crate::env::GroundTruth;
use crate::error::{Error, Result};

/// Which success event a result is scored against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScoreMode {
    /// The guarantee each solver actually states: known-threshold variants
    /// are scored against `λ − ε`, unknown-threshold ones against the true
    /// quantile.
    #[default]
    Guarantee,
    /// Always the true quantile: `λ_ρ − ε` (infinite) or `λ_[m] − ε` (finite).
    Quantile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialVerdict {
    pub success: bool,
    /// `mean − required threshold` per returned arm.
    pub margins: Vec<f64>,
    pub samples: u64,
    pub duplicates: bool,
}

/// Scores one result. Success needs `k` distinct arms and no negative margin.
pub fn score(
    result: &QuantileResult,
    truth: &GroundTruth,
    spec: &ProblemSpec,
    mode: ScoreMode,
) -> Result<TrialVerdict> {
    let required = required_mean(truth, spec, mode)?;
    let margins = result
        .arms
        .iter()
        .map(|a| Ok(truth.mean_of(a)? - required))
        .collect::<Result<Vec<f64>>>()?;

    let duplicates = if spec.variant.is_finite() {
        let mut seen = HashSet::new();
        !result.arms.iter().all(|a| seen.insert(a.base_index()))
    } else {
        let mut seen = HashSet::new();
        !result.arms.iter().all(|a| seen.insert(a.id()))
    };
    let success = !duplicates && result.arms.len() == spec.k && margins.iter().all(|&m| m >= 0.0);
    Ok(TrialVerdict {
        success,
        margins,
        samples: result.total_samples,
        duplicates,
    })
}

/// The smallest true mean a returned arm may have.
pub fn required_mean(truth: &GroundTruth, spec: &ProblemSpec, mode: ScoreMode) -> Result<f64> {
    let from_truth = match spec.quantile {
        Quantile::Fraction(rho) => truth.lambda_rho(rho)?,
        Quantile::Rank { m, .. } => truth.lambda_rank(m)?,
    };
    let threshold = match (mode, spec.variant, spec.lambda) {
        (
            ScoreMode::Guarantee,
            ProblemVariant::InfiniteKnown | ProblemVariant::FiniteKnown,
            Some(l),
        ) => l,
        _ => from_truth,
    };
    Ok(threshold - spec.eps)
}

/// Empirical failure rate against a target `δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FailureSummary {
    pub trials: usize,
    pub failures: usize,
    pub rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub delta: f64,
    /// The Wilson 95% interval reaches down to `δ`: the PAC claim is not rejected.
    pub pass: bool,
}

impl FailureSummary {
    /// `rate ≤ δ + 3·sqrt(δ(1−δ)/trials)`.
    pub fn within_three_se(&self) -> bool {
        within_three_se(self.rate, self.delta, self.trials)
    }
}

pub const MIN_VERDICTS: usize = 30;
const Z95: f64 = 1.959_963_984_540_054;

pub fn failure_rate(verdicts: &[TrialVerdict], delta: f64) -> Result<FailureSummary> {
    let failures = verdicts.iter().filter(|v| !v.success).count();
    failure_rate_counts(failures, verdicts.len(), delta)
}

pub fn failure_rate_counts(failures: usize, trials: usize, delta: f64) -> Result<FailureSummary> {
    if trials < MIN_VERDICTS {
        return Err(Error::TooFewTrials {
            needed: MIN_VERDICTS,
            got: trials,
        });
    }
    let (lo, hi) = wilson_interval(failures, trials);
    Ok(FailureSummary {
        trials,
        failures,
        rate: failures as f64 / trials as f64,
        wilson_low: lo,
        wilson_high: hi,
        delta,
        pass: lo <= delta,
    })
}

/// Wilson score 95% interval for `hits` out of `n`.
pub fn wilson_interval(hits: usize, n: usize) -> (f64, f64) {
    let n_f = n as f64;
    let p = hits as f64 / n_f;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n_f;
    let center = (p + z2 / (2.0 * n_f)) / denom;
    let half = Z95 * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// `rate ≤ target + 3·sqrt(target(1−target)/n)`.
pub fn within_three_se(rate: f64, target: f64, n: usize) -> bool {
    rate <= target + 3.0 * (target * (1.0 - target) / n as f64).sqrt()
}

/// One-sided sign test: `P{X ≥ wins}` for `X ~ Bin(wins + losses, 1/2)`.
pub fn sign_test_p(wins: usize, losses: usize) -> f64 {
    let n = wins + losses;
    if n == 0 {
        return 1.0;
    }
    let ln_half_n = n as f64 * 0.5f64.ln();
    let mut ln_choose = 0.0; // ln C(n, 0)
    let mut tail = 0.0;
    for i in 0..=n {
        if i >= wins {
            tail += (ln_choose + ln_half_n).exp();
        }
        // C(n, i+1) = C(n, i)·(n−i)/(i+1)
        if i < n {
            ln_choose += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
        }
    }
    tail.min(1.0)
}
