use crate::env::ArmSource;
use crate::error::{check_open_unit, Error, Result};

use super::{QuantileResult, Tally, PHASE_ACCEPTANCE};

/// Samples per IUR repetition: `⌈(2/ε²)·ln(2k/(δρ))⌉`.
///
/// At threshold `λ − ε/2` this keeps each repetition's error at `δρ/(2k)`,
/// enough for a union bound over the geometric number of repetitions.
pub fn iur_repetition_samples(k: usize, rho: f64, eps: f64, delta: f64) -> u64 {
    ((2.0 / (eps * eps)) * (2.0 * k as f64 / (delta * rho)).ln()).ceil() as u64
}

/// Iterative Uniform Rejection: draw one arm, sample it, keep it if its
/// empirical mean reaches `lambda − eps/2`; repeat until `k` are kept.
pub fn iur_baseline(
    src: &mut ArmSource,
    k: usize,
    rho: f64,
    eps: f64,
    delta: f64,
    lambda: f64,
) -> Result<QuantileResult> {
    if k == 0 {
        return Err(Error::Spec("k must be at least 1".into()));
    }
    check_open_unit("rho", rho)?;
    check_open_unit("eps", eps)?;
    check_open_unit("delta", delta)?;
    let per_arm = iur_repetition_samples(k, rho, eps, delta);
    let threshold = lambda - eps / 2.0;

    let mut tally = Tally::new(src);
    let mut ans = Vec::with_capacity(k);
    while ans.len() < k {
        tally.repetition();
        let (arm, mean) = tally.phase(PHASE_ACCEPTANCE, src, |s| {
            let arm = s.draw_arms(1)?[0];
            Ok((arm, s.sample(&arm, per_arm)))
        })?;
        if mean >= threshold {
            ans.push(arm);
        }
    }
    tally.finish(src, ans)
}
