use crate::env::ArmSource;
use crate::error::{check_open, Result};
use crate::subroutines::lambda_estimation;

use super::{solve_known, QuantileResult, Selection, Tally, PHASE_ESTIMATION};

/// AL-Q-IU: `k` distinct `[ε, ρ]`-optimal arms without knowing `λ_ρ`.
///
/// Estimates `λ̂` with LambdaEstimation at `(ρ, ε/2, δ/2)` and hands it to the
/// known-threshold solver at `(ρ/2, ε/2, δ/2)`. The estimation phase never
/// sees `k`, so its cost is independent of `k` at a fixed seed.
pub fn al_q_iu(
    src: &mut ArmSource,
    k: usize,
    rho: f64,
    eps: f64,
    delta: f64,
) -> Result<QuantileResult> {
    al_q_iu_with(src, k, rho, eps, delta, Selection::default())
}

pub fn al_q_iu_with(
    src: &mut ArmSource,
    k: usize,
    rho: f64,
    eps: f64,
    delta: f64,
    selection: Selection,
) -> Result<QuantileResult> {
    check_open("rho", rho, 0.5)?;
    check_open("eps", eps, 0.5)?;
    check_open("delta", delta, 0.5)?;
    let mut tally = Tally::new(src);
    let estimate = tally.phase(PHASE_ESTIMATION, src, |s| {
        lambda_estimation(s, rho, eps / 2.0, delta / 2.0)
    })?;
    let inner = solve_known(
        src,
        k,
        rho / 2.0,
        eps / 2.0,
        delta / 2.0,
        estimate.value,
        selection,
    )?;
    tally.absorb(&inner);
    let mut result = tally.finish(src, inner.arms)?;
    result.lambda_hat = Some(estimate.value);
    Ok(result)
}
