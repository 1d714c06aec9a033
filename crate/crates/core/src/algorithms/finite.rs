use crate::env::{ArmSource, Population};
use crate::error::{check_open_unit, Error, Result};
use crate::subroutines::lambda_estimation;

use super::{solve_known, QuantileResult, Selection, Tally, PHASE_ESTIMATION};

/// AL-Q-FK: `k` distinct arms of a finite set with means at least
/// `lambda − eps`, given `lambda ≤ λ_[m]` and `k ≤ m ≤ n/2`.
///
/// Runs `k` single-arm known-threshold solves on the infinite extension of the
/// arms not chosen yet, at fraction `ρ_t = (m − |Ans|)/(n − |Ans|)` and error
/// `δ/k`, deleting each chosen base arm. Returns the base arm handles.
pub fn al_q_fk(
    src: &mut ArmSource,
    m: usize,
    k: usize,
    eps: f64,
    delta: f64,
    lambda: f64,
) -> Result<QuantileResult> {
    al_q_fk_with(src, m, k, eps, delta, lambda, Selection::default())
}

pub fn al_q_fk_with(
    src: &mut ArmSource,
    m: usize,
    k: usize,
    eps: f64,
    delta: f64,
    lambda: f64,
    selection: Selection,
) -> Result<QuantileResult> {
    let base = src.finite_arms()?.to_vec();
    let n = base.len();
    if k == 0 || k > m || 2 * m > n {
        return Err(Error::Spec(format!(
            "AL-Q-FK needs 1 <= k <= m <= n/2, got k={k}, m={m}, n={n}"
        )));
    }
    check_open_unit("eps", eps)?;
    check_open_unit("delta", delta)?;

    let mut tally = Tally::new(src);
    let mut remaining = base.clone();
    let mut chosen = Vec::with_capacity(k);
    let mut rho_trace = Vec::with_capacity(k);
    while chosen.len() < k {
        let taken = chosen.len();
        let rho = (m - taken) as f64 / (n - taken) as f64;
        rho_trace.push(rho);
        let previous = src.replace_population(Population::Extension(remaining.clone()));
        let inner = solve_known(src, 1, rho, eps, delta / k as f64, lambda, selection);
        src.replace_population(previous);
        let inner = inner?;
        tally.absorb(&inner);

        let idx = inner.arms[0]
            .base_index()
            .expect("extension handles carry a base index");
        chosen.push(base[idx]);
        remaining.retain(|a| a.base_index() != Some(idx));
    }
    let mut result = tally.finish(src, chosen)?;
    result.rho_trace = rho_trace;
    Ok(result)
}

/// AL-Q-FU: `k` distinct `(ε, m)`-optimal arms of a finite set without
/// knowing `λ_[m]`, for `2k < m ≤ n/2`.
///
/// Estimates `λ̂` on the infinite extension at `(m/n, ε/2, δ/2)`, then runs
/// [`al_q_fk`] with `⌊m/2⌋`, `ε/2`, `δ/2` and threshold `λ̂`.
pub fn al_q_fu(
    src: &mut ArmSource,
    m: usize,
    k: usize,
    eps: f64,
    delta: f64,
) -> Result<QuantileResult> {
    al_q_fu_with(src, m, k, eps, delta, Selection::default())
}

pub fn al_q_fu_with(
    src: &mut ArmSource,
    m: usize,
    k: usize,
    eps: f64,
    delta: f64,
    selection: Selection,
) -> Result<QuantileResult> {
    let base = src.finite_arms()?.to_vec();
    let n = base.len();
    if k == 0 || 2 * k >= m || 2 * m > n {
        return Err(Error::Spec(format!(
            "AL-Q-FU needs 2k < m <= n/2, got k={k}, m={m}, n={n}"
        )));
    }

    let mut tally = Tally::new(src);
    let previous = src.replace_population(Population::Extension(base));
    let estimate = tally.phase(PHASE_ESTIMATION, src, |s| {
        lambda_estimation(s, m as f64 / n as f64, eps / 2.0, delta / 2.0)
    });
    src.replace_population(previous);
    let estimate = estimate?;

    let inner = al_q_fk_with(
        src,
        m / 2,
        k,
        eps / 2.0,
        delta / 2.0,
        estimate.value,
        selection,
    )?;
    tally.absorb(&inner);
    let mut result = tally.finish(src, inner.arms)?;
    result.lambda_hat = Some(estimate.value);
    result.rho_trace = inner.rho_trace;
    Ok(result)
}
