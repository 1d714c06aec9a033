//! Confidence bounds on a `[0, 1]` mean and the per-count error schedule.
//!
//! Both bound families satisfy `P{upper ≥ μ} ≥ 1 − δ` and `P{lower ≤ μ} ≥ 1 − δ`
//! for a fixed sample count. Outputs are clamped to `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{check_open_unit, Error, Result};

/// Which confidence bound family to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Hoeffding,
    /// Chernoff bound via the Bernoulli KL divergence.
    #[default]
    #[serde(alias = "kl_bernoulli")]
    Kl,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Hoeffding => "hoeffding",
            BoundKind::Kl => "kl",
        }
    }

    pub fn upper(self, mean: f64, n: u64, delta: f64) -> Result<f64> {
        check_args(mean, n, delta)?;
        Ok(self.upper_unchecked(mean, n, delta))
    }

    pub fn lower(self, mean: f64, n: u64, delta: f64) -> Result<f64> {
        check_args(mean, n, delta)?;
        Ok(self.lower_unchecked(mean, n, delta))
    }

    pub(crate) fn upper_unchecked(self, mean: f64, n: u64, delta: f64) -> f64 {
        match self {
            BoundKind::Hoeffding => (mean + hoeffding_radius(n, delta)).min(1.0),
            BoundKind::Kl => kl_upper_unchecked(mean, n, delta),
        }
    }

    pub(crate) fn lower_unchecked(self, mean: f64, n: u64, delta: f64) -> f64 {
        match self {
            BoundKind::Hoeffding => (mean - hoeffding_radius(n, delta)).max(0.0),
            BoundKind::Kl => kl_lower_unchecked(mean, n, delta),
        }
    }
}

impl std::str::FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hoeffding" => Ok(BoundKind::Hoeffding),
            "kl" | "kl_bernoulli" => Ok(BoundKind::Kl),
            other => Err(Error::Spec(format!("unknown bound kind `{other}`"))),
        }
    }
}

fn check_args(mean: f64, n: u64, delta: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::param("n", 0.0, "need at least one sample"));
    }
    if !(0.0..=1.0).contains(&mean) {
        return Err(Error::param("mean", mean, "must lie in [0, 1]"));
    }
    check_open_unit("delta", delta)
}

fn hoeffding_radius(n: u64, delta: f64) -> f64 {
    ((1.0 / delta).ln() / (2.0 * n as f64)).sqrt()
}

pub fn hoeffding_upper(mean: f64, n: u64, delta: f64) -> Result<f64> {
    BoundKind::Hoeffding.upper(mean, n, delta)
}

pub fn hoeffding_lower(mean: f64, n: u64, delta: f64) -> Result<f64> {
    BoundKind::Hoeffding.lower(mean, n, delta)
}

pub fn kl_upper(mean: f64, n: u64, delta: f64) -> Result<f64> {
    BoundKind::Kl.upper(mean, n, delta)
}

pub fn kl_lower(mean: f64, n: u64, delta: f64) -> Result<f64> {
    BoundKind::Kl.lower(mean, n, delta)
}

/// Bernoulli KL divergence `d(p‖q)`, with `0·log 0 = 0` and `+∞` when `q`
/// sits on a boundary that `p` does not.
pub fn kl_bernoulli(p: f64, q: f64) -> f64 {
    fn term(a: f64, b: f64) -> f64 {
        if a == 0.0 {
            0.0
        } else if b == 0.0 {
            f64::INFINITY
        } else {
            a * (a / b).ln()
        }
    }
    term(p, q) + term(1.0 - p, 1.0 - q)
}

const KL_MAX_ITERS: usize = 64;
const KL_VALUE_TOL: f64 = 1e-7;
const KL_WIDTH_TOL: f64 = 1e-15;

/// Largest `q ∈ [mean, 1]` with `n·d(mean‖q) ≤ log(1/δ)`.
///
/// Bisection keeps `lo` feasible throughout, so the returned value never
/// overshoots the exact root.
fn kl_upper_unchecked(mean: f64, n: u64, delta: f64) -> f64 {
    let level = (1.0 / delta).ln() / n as f64;
    if mean >= 1.0 || kl_bernoulli(mean, 1.0) <= level {
        return 1.0;
    }
    let (mut lo, mut hi) = (mean, 1.0);
    for _ in 0..KL_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        if kl_bernoulli(mean, mid) <= level {
            lo = mid;
            if level - kl_bernoulli(mean, lo) <= KL_VALUE_TOL / n as f64 {
                break;
            }
        } else {
            hi = mid;
        }
        if hi - lo <= KL_WIDTH_TOL {
            break;
        }
    }
    lo
}

/// Smallest `q ∈ [0, mean]` with `n·d(mean‖q) ≤ log(1/δ)`.
fn kl_lower_unchecked(mean: f64, n: u64, delta: f64) -> f64 {
    // d(p‖q) = d(1−p‖1−q), so the lower bound mirrors the upper one.
    1.0 - kl_upper_unchecked(1.0 - mean, n, delta)
}

/// Per-count error levels `δˢ = δ / (k₁ n s^γ)`.
///
/// With `k₁ ≥ 2(1 + 1/(γ−1))` the union over both bounds, all `n` arms and
/// all counts `s ≥ 1` stays below `δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSchedule {
    delta: f64,
    arms: usize,
    gamma: f64,
    k1: f64,
}

impl BoundSchedule {
    pub const DEFAULT_GAMMA: f64 = 2.0;

    /// Schedule with `γ = 2` and the smallest admissible `k₁ = 4`.
    pub fn new(delta: f64, arms: usize) -> Self {
        Self::with_exponent(delta, arms, Self::DEFAULT_GAMMA)
    }

    pub fn with_exponent(delta: f64, arms: usize, gamma: f64) -> Self {
        BoundSchedule {
            delta,
            arms,
            gamma,
            k1: min_k1(gamma),
        }
    }

    pub fn with_constants(delta: f64, arms: usize, gamma: f64, k1: f64) -> Result<Self> {
        if gamma.is_nan() || gamma <= 1.0 {
            return Err(Error::param("gamma", gamma, "must exceed 1"));
        }
        if k1.is_nan() || k1 < min_k1(gamma) {
            return Err(Error::param(
                "k1",
                k1,
                "must be at least 2(1 + 1/(gamma - 1))",
            ));
        }
        Ok(BoundSchedule {
            delta,
            arms,
            gamma,
            k1,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    /// `δˢ` for `s ≥ 1`.
    pub fn delta_at(&self, s: u64) -> f64 {
        debug_assert!(s >= 1);
        self.delta / (self.k1 * self.arms as f64 * (s as f64).powf(self.gamma))
    }
}

fn min_k1(gamma: f64) -> f64 {
    2.0 * (1.0 + 1.0 / (gamma - 1.0))
}
