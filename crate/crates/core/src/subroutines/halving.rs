use crate::env::{Arm, ArmSource};
use crate::error::{check_open_unit, Error, Result};

use super::keep_best;

#[derive(Clone, Copy)]
enum Orientation {
    Best,
    Worst,
}

/// Halving: returns `k` distinct input arms, each with mean at least the
/// k-th best input mean minus `eps`, with probability at least `1 − delta`.
///
/// Round `r` samples every survivor `⌈(2/ε_r²)·ln(2k|A_r|/δ_r)⌉` times with
/// `ε_r = (ε/4)(3/4)^{r−1}`, `δ_r = δ/2^r`, and keeps the best
/// `max(k, ⌈|A_r|/2⌉)` by fresh empirical means. With `k = |arms|` the input
/// comes back unchanged and nothing is sampled.
pub fn halving(
    arms: &[Arm],
    k: usize,
    eps: f64,
    delta: f64,
    src: &mut ArmSource,
) -> Result<Vec<Arm>> {
    run(arms, k, eps, delta, src, Orientation::Best)
}

/// Halving on complemented rewards `1 − r`: a PAC-worst arm, i.e. one whose
/// mean is at most the minimum input mean plus `eps` w.p. `1 − delta`.
pub fn halving_worst(arms: &[Arm], eps: f64, delta: f64, src: &mut ArmSource) -> Result<Arm> {
    Ok(run(arms, 1, eps, delta, src, Orientation::Worst)?[0])
}

fn run(
    arms: &[Arm],
    k: usize,
    eps: f64,
    delta: f64,
    src: &mut ArmSource,
    orientation: Orientation,
) -> Result<Vec<Arm>> {
    check_open_unit("eps", eps)?;
    check_open_unit("delta", delta)?;
    if k == 0 || k > arms.len() {
        return Err(Error::NotEnoughArms {
            k,
            available: arms.len(),
        });
    }
    let mut survivors = arms.to_vec();
    let mut eps_r = eps / 4.0;
    let mut delta_r = delta / 2.0;
    while survivors.len() > k {
        let log_term = (2.0 * k as f64 * survivors.len() as f64 / delta_r).ln();
        let per_arm = ((2.0 / (eps_r * eps_r)) * log_term).ceil() as u64;
        let scores: Vec<f64> = survivors
            .iter()
            .map(|a| {
                let m = src.sample(a, per_arm);
                match orientation {
                    Orientation::Best => m,
                    Orientation::Worst => 1.0 - m,
                }
            })
            .collect();
        let keep = k.max(survivors.len().div_ceil(2));
        survivors = keep_best(&survivors, &scores, keep);
        eps_r *= 0.75;
        delta_r *= 0.5;
    }
    Ok(survivors)
}
