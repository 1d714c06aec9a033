use crate::env::ArmSource;
use crate::error::{check_open, Result};

use super::{halving, halving_worst};

/// Estimate of the top-`ρ` threshold and what it cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaEstimate {
    /// May dip below zero; it is not clamped.
    pub value: f64,
    pub samples: u64,
}

/// LambdaEstimation: returns `λ̂ ∈ [λ_ρ − ε, λ_{ρ/2}]` with probability at
/// least `1 − δ` using `O((1/(ρε²))·log²(1/δ))` samples.
///
/// Draws `n₃ = ⌈(32/ρ)·ln(5/δ)⌉` arms, keeps a PAC top-`m` subset with
/// `m = ⌊1 + (3/4)ρn₃⌋`, takes a PAC-worst arm of that subset and returns
/// its `n₄`-sample mean shifted down by `ε₂ + ε₃`. The tolerance is split
/// evenly, `ε₁ = ε₂ = ε₃ = ε/4`.
///
/// `rho` may equal 1/2 so that a finite set can be estimated at `m/n = 1/2`.
pub fn lambda_estimation(
    src: &mut ArmSource,
    rho: f64,
    eps: f64,
    delta: f64,
) -> Result<LambdaEstimate> {
    if rho != 0.5 {
        check_open("rho", rho, 0.5)?;
    }
    check_open("eps", eps, 0.5)?;
    check_open("delta", delta, 0.5)?;
    let start = src.samples();

    let (eps1, eps2, eps3) = (eps / 4.0, eps / 4.0, eps / 4.0);
    let n3 = ((32.0 / rho) * (5.0 / delta).ln()).ceil() as usize;
    let n4 = ((1.0 / (2.0 * eps3 * eps3)) * (10.0 / delta).ln()).ceil() as u64;
    let m = (1.0 + 0.75 * rho * n3 as f64).floor() as usize;

    let pool = src.draw_arms(n3)?;
    let top = halving(&pool, m, eps1, delta / 5.0, src)?;
    let worst = halving_worst(&top, eps2, delta / 5.0, src)?;
    let mu0 = src.sample(&worst, n4);

    Ok(LambdaEstimate {
        value: mu0 - eps2 - eps3,
        samples: src.samples() - start,
    })
}
