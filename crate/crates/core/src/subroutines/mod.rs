//! Building blocks called by the top-level solvers.

mod halving;
mod lambda;
mod median_elimination;
mod pac_maxing;

pub use halving::{halving, halving_worst};
pub use lambda::{lambda_estimation, LambdaEstimate};
pub use median_elimination::median_elimination;
pub use pac_maxing::{
    pac_budget, pac_budget_with, pac_maxing, pac_maxing_traced, write_trace, PacMaxOutcome,
    PacMaxStep,
};

use crate::env::Arm;

/// Indices of `scores` sorted best first; ties keep input order.
pub(crate) fn rank_desc(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    order
}

/// Keeps the `keep` best-scoring arms, in their original relative order.
pub(crate) fn keep_best(arms: &[Arm], scores: &[f64], keep: usize) -> Vec<Arm> {
    let mut chosen = rank_desc(scores);
    chosen.truncate(keep);
    chosen.sort_unstable();
    chosen.into_iter().map(|i| arms[i]).collect()
}
