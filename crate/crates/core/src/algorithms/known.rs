use crate::confidence::BoundKind;
use crate::env::ArmSource;
use crate::error::{check_open_unit, Result};
use crate::subroutines::{median_elimination, pac_budget, pac_maxing};

use super::{QuantileResult, Selection, Tally, PHASE_ACCEPTANCE, PHASE_SELECTION};

/// Default `ε₁ = 0.8ε`; the remaining `0.2ε` is split as `2ε₂`.
pub const DEFAULT_EPS1_SHARE: f64 = 0.8;

/// AL-Q-IK: `k` distinct arms with means at least `lambda − eps`, with
/// probability at least `1 − delta`, given `lambda ≤ λ_ρ`.
///
/// Each repetition draws `n₁ = ⌈ln(3)/ρ⌉` arms, keeps the Median-Elimination
/// winner at `(ε₁, 1/4)`, samples it `n₂ = ⌈ln(k/δ)/(2ε₂²)⌉` times and accepts
/// it when the empirical mean reaches `lambda − ε₁ − ε₂`.
///
/// `lambda ≤ λ_ρ` cannot be checked at run time. If no arm of the population
/// can pass the acceptance test the loop does not terminate.
pub fn al_q_ik(
    src: &mut ArmSource,
    k: usize,
    rho: f64,
    eps: f64,
    delta: f64,
    lambda: f64,
) -> Result<QuantileResult> {
    al_q_ik_split(src, k, rho, eps, delta, lambda, DEFAULT_EPS1_SHARE)
}

/// [`al_q_ik`] with `ε₁ = eps1_share·ε` and `ε₂ = (ε − ε₁)/2`.
pub fn al_q_ik_split(
    src: &mut ArmSource,
    k: usize,
    rho: f64,
    eps: f64,
    delta: f64,
    lambda: f64,
    eps1_share: f64,
) -> Result<QuantileResult> {
    check_common(k, rho, eps, delta)?;
    check_open_unit("eps1_share", eps1_share)?;
    let eps1 = eps1_share * eps;
    let eps2 = (eps - eps1) / 2.0;
    let n1 = candidate_pool_size(rho);
    let n2 = ((k as f64 / delta).ln() / (2.0 * eps2 * eps2))
        .ceil()
        .max(1.0) as u64;
    let threshold = lambda - eps1 - eps2;

    let mut tally = Tally::new(src);
    let mut ans = Vec::with_capacity(k);
    while ans.len() < k {
        tally.repetition();
        let candidate = tally.phase(PHASE_SELECTION, src, |s| {
            let pool = s.draw_arms(n1)?;
            median_elimination(&pool, eps1, 0.25, s)
        })?;
        let mean = tally.phase(PHASE_ACCEPTANCE, src, |s| Ok(s.sample(&candidate, n2)))?;
        if mean >= threshold {
            ans.push(candidate);
        }
    }
    tally.finish(src, ans)
}

/// CB-AL-Q-IK: AL-Q-IK with both steps replaced by budgeted PACMaxing calls.
///
/// The candidate is `PACMaxing(A_t, 3ε/4, 1/4, g₀)`; it is accepted when
/// `PACMaxing({a_t, c}, ε/8, δ/k, g₁)` prefers it over an arm `c` paying
/// `lambda − 7ε/8` (clamped to `[0, 1]`). Budgets `g₀`, `g₁` come from
/// [`pac_budget`]. An exhausted PACMaxing call counts as a rejection.
pub fn cb_al_q_ik(
    src: &mut ArmSource,
    k: usize,
    rho: f64,
    eps: f64,
    delta: f64,
    lambda: f64,
    bound: BoundKind,
) -> Result<QuantileResult> {
    check_common(k, rho, eps, delta)?;
    let n1 = candidate_pool_size(rho);
    let (eps_pick, delta_pick) = (0.75 * eps, 0.25);
    let (eps_test, delta_test) = (eps / 8.0, delta / k as f64);
    let g0 = pac_budget(n1, eps_pick, delta_pick);
    let g1 = pac_budget(2, eps_test, delta_test);
    let reference = (lambda - 0.875 * eps).clamp(0.0, 1.0);

    let mut tally = Tally::new(src);
    let mut ans = Vec::with_capacity(k);
    while ans.len() < k {
        tally.repetition();
        let pick = tally.phase(PHASE_SELECTION, src, |s| {
            let pool = s.draw_arms(n1)?;
            pac_maxing(&pool, eps_pick, delta_pick, g0, bound, s)
        })?;
        if pick.exhausted {
            continue;
        }
        let candidate = pick.arm;
        let test = tally.phase(PHASE_ACCEPTANCE, src, |s| {
            let c = s.constant_arm(reference)?;
            pac_maxing(&[candidate, c], eps_test, delta_test, g1, bound, s)
        })?;
        if !test.exhausted && test.arm.id() == candidate.id() {
            ans.push(candidate);
        }
    }
    tally.finish(src, ans)
}

/// Known-threshold solve with the chosen candidate-selection routine.
pub fn solve_known(
    src: &mut ArmSource,
    k: usize,
    rho: f64,
    eps: f64,
    delta: f64,
    lambda: f64,
    selection: Selection,
) -> Result<QuantileResult> {
    match selection {
        Selection::MedianElimination { eps1_share } => {
            al_q_ik_split(src, k, rho, eps, delta, lambda, eps1_share)
        }
        Selection::PacMaxing { bound } => cb_al_q_ik(src, k, rho, eps, delta, lambda, bound),
    }
}

pub(crate) fn candidate_pool_size(rho: f64) -> usize {
    (3f64.ln() / rho).ceil() as usize
}

fn check_common(k: usize, rho: f64, eps: f64, delta: f64) -> Result<()> {
    if k == 0 {
        return Err(crate::Error::Spec("k must be at least 1".into()));
    }
    check_open_unit("rho", rho)?;
    check_open_unit("eps", eps)?;
    check_open_unit("delta", delta)?;
    check_open_unit("delta / k", delta / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::MeanPrior;

    #[test]
    fn pool_size() {
        assert_eq!(candidate_pool_size(0.5), 3);
        assert_eq!(candidate_pool_size(0.1), 11);
        assert_eq!(candidate_pool_size(0.05), 22);
    }

    #[test]
    fn homogeneous_prior_returns_k_arms() {
        let mut src = ArmSource::from_prior(MeanPrior::point(0.8).unwrap(), 5);
        let res = al_q_ik(&mut src, 2, 0.3, 0.1, 0.1, 0.8).unwrap();
        assert_eq!(res.arms.len(), 2);
        assert!(res.arms.iter().all(|a| a.mean() == 0.8));
        assert_ne!(res.arms[0].id(), res.arms[1].id());
        assert_eq!(res.total_samples, src.samples());
        assert_eq!(res.phases.values().sum::<u64>(), res.total_samples);
    }

    #[test]
    fn cb_homogeneous_prior() {
        let mut src = ArmSource::from_prior(MeanPrior::point(0.8).unwrap(), 5);
        let res = cb_al_q_ik(&mut src, 3, 0.3, 0.1, 0.1, 0.8, BoundKind::Kl).unwrap();
        assert_eq!(res.arms.len(), 3);
        assert_eq!(res.total_samples, src.samples());
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut src = ArmSource::from_prior(MeanPrior::Uniform01, 0);
        assert!(al_q_ik(&mut src, 0, 0.1, 0.1, 0.1, 0.9).is_err());
        assert!(al_q_ik(&mut src, 1, 1.0, 0.1, 0.1, 0.9).is_err());
        assert!(al_q_ik(&mut src, 1, 0.1, 0.1, 0.0, 0.9).is_err());
        assert!(al_q_ik_split(&mut src, 1, 0.1, 0.1, 0.1, 0.9, 1.0).is_err());
        assert!(cb_al_q_ik(&mut src, 1, 0.1, 1.0, 0.1, 0.9, BoundKind::Kl).is_err());
    }
}
