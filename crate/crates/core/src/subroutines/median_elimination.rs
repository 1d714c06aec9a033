use crate::env::{Arm, ArmSource};
use crate::error::{check_open_unit, Error, Result};

use super::keep_best;

/// Median-Elimination: returns an arm whose mean is within `eps` of the best
/// input arm with probability at least `1 − delta`.
///
/// Round `ℓ` runs at `ε_ℓ = (ε/4)(3/4)^{ℓ−1}`, `δ_ℓ = δ/2^ℓ`, samples every
/// survivor `⌈(4/ε_ℓ²)·ln(3/δ_ℓ)⌉` times and keeps the better half (rounded
/// up) by empirical mean. The sample count is deterministic and at most
/// `64·(n/ε²)·(9·ln(3/δ) + 57)` plus ceiling slack, i.e. `O((n/ε²)·log(1/δ))`.
/// A single input arm is returned without sampling.
pub fn median_elimination(arms: &[Arm], eps: f64, delta: f64, src: &mut ArmSource) -> Result<Arm> {
    check_open_unit("eps", eps)?;
    check_open_unit("delta", delta)?;
    if arms.is_empty() {
        return Err(Error::NotEnoughArms { k: 1, available: 0 });
    }
    let mut survivors = arms.to_vec();
    let mut eps_l = eps / 4.0;
    let mut delta_l = delta / 2.0;
    while survivors.len() > 1 {
        let per_arm = ((4.0 / (eps_l * eps_l)) * (3.0 / delta_l).ln()).ceil() as u64;
        let means: Vec<f64> = survivors.iter().map(|a| src.sample(a, per_arm)).collect();
        let keep = survivors.len().div_ceil(2);
        survivors = keep_best(&survivors, &means, keep);
        eps_l *= 0.75;
        delta_l *= 0.5;
    }
    Ok(survivors[0])
}
