use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use crate::algorithms::{
    al_q_fk_with, al_q_fu_with, al_q_iu_with, cb_al_q_ik, iur_baseline, solve_known, ProblemSpec,
    Quantile, QuantileResult,
};
use crate::env::{ArmSource, GroundTruth};
use crate::error::Error;
use crate::rng::split;
use crate::verify::{failure_rate_counts, score, wilson_interval, ScoreMode, TrialVerdict};

use super::config::{Algorithm, ExperimentConfig, SweepPoint};
use super::record::TrialRecord;
use super::ExperimentError;

/// Seed of one trial. Keyed by the sweep value rather than its position, so
/// reordering the sweep list reorders rows without changing them.
pub fn trial_seed(master: u64, value: f64, trial: usize) -> u64 {
    split(master, value.to_bits(), trial as u64)
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub record: TrialRecord,
    pub result: QuantileResult,
    pub verdict: TrialVerdict,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<TrialRecord>,
    pub summaries: Vec<PointSummary>,
}

/// Aggregate over the trials of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSummary {
    pub algorithm: String,
    pub bound: String,
    pub k: usize,
    pub rho: f64,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub eps: f64,
    pub delta: f64,
    pub prior: String,
    pub trials: usize,
    pub mean_samples: f64,
    pub failures: usize,
    pub failure_rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    /// `None` below the minimum trial count for a PAC check.
    pub pass: Option<bool>,
}

fn solve(
    cfg: &ExperimentConfig,
    spec: &ProblemSpec,
    src: &mut ArmSource,
) -> crate::Result<QuantileResult> {
    let (k, eps, delta) = (spec.k, spec.eps, spec.delta);
    let lambda = || spec.lambda.expect("validated known-threshold spec");
    let selection = cfg.selection();
    match (cfg.algorithm, spec.quantile) {
        (Algorithm::AlQIk, Quantile::Fraction(rho)) => {
            solve_known(src, k, rho, eps, delta, lambda(), selection)
        }
        (Algorithm::CbAlQIk, Quantile::Fraction(rho)) => {
            cb_al_q_ik(src, k, rho, eps, delta, lambda(), cfg.bound)
        }
        (Algorithm::Iur, Quantile::Fraction(rho)) => {
            iur_baseline(src, k, rho, eps, delta, lambda())
        }
        (Algorithm::AlQIu, Quantile::Fraction(rho)) => {
            al_q_iu_with(src, k, rho, eps, delta, selection)
        }
        (Algorithm::AlQFk, Quantile::Rank { m, .. }) => {
            al_q_fk_with(src, m, k, eps, delta, lambda(), selection)
        }
        (Algorithm::AlQFu, Quantile::Rank { m, .. }) => {
            al_q_fu_with(src, m, k, eps, delta, selection)
        }
        (alg, _) => Err(Error::Spec(format!(
            "{} got the wrong quantile kind",
            alg.name()
        ))),
    }
}

/// Runs and scores one trial, checking the reported sample count against the
/// source counter.
pub fn run_trial(
    cfg: &ExperimentConfig,
    point: &SweepPoint,
    truth: &GroundTruth,
    trial: usize,
) -> Result<TrialOutcome, ExperimentError> {
    let seed = trial_seed(cfg.seed, point.value, trial);
    let mut src = cfg.arms.source(seed)?;
    let started = Instant::now();
    let result = solve(cfg, &point.spec, &mut src)?;
    let elapsed = started.elapsed();
    if result.total_samples != src.samples() {
        return Err(Error::Accounting {
            reported: result.total_samples,
            counted: src.samples(),
        }
        .into());
    }
    let verdict = score(&result, truth, &point.spec, ScoreMode::Guarantee)?;
    let spec = &point.spec;
    let (m, n) = match spec.quantile {
        Quantile::Rank { m, n } => (Some(m), Some(n)),
        Quantile::Fraction(_) => (None, None),
    };
    let record = TrialRecord {
        algorithm: cfg.algorithm.name().to_owned(),
        k: spec.k,
        rho: spec.fraction(),
        m,
        n,
        eps: spec.eps,
        delta: spec.delta,
        bound: cfg.bound_label().to_owned(),
        prior: cfg.arms.label(),
        trial,
        seed,
        samples: result.total_samples,
        success: verdict.success,
        wall_ms: if cfg.timing {
            elapsed.as_millis() as u64
        } else {
            0
        },
    };
    Ok(TrialOutcome {
        record,
        result,
        verdict,
    })
}

/// Runs every trial of every sweep point. Rows come back sweep-major,
/// trial-minor whatever the worker count.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    cfg.validate()?;
    let points = cfg.points()?;
    let truth = cfg.arms.truth()?;
    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..cfg.trials).map(move |t| (p, t)))
        .collect();
    let work = || {
        jobs.par_iter()
            .map(|&(p, t)| run_trial(cfg, &points[p], &truth, t).map(|o| o.record))
            .collect::<Result<Vec<_>, _>>()
    };
    let records = match cfg.jobs {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| ExperimentError::config("jobs", e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    let summaries = summarize(&records);
    Ok(RunOutput { records, summaries })
}

/// Groups consecutive rows sharing all parameter columns.
pub fn summarize(records: &[TrialRecord]) -> Vec<PointSummary> {
    let same_point = |a: &TrialRecord, b: &TrialRecord| {
        a.algorithm == b.algorithm
            && a.bound == b.bound
            && a.k == b.k
            && a.rho == b.rho
            && a.m == b.m
            && a.n == b.n
            && a.eps == b.eps
            && a.delta == b.delta
            && a.prior == b.prior
    };
    records
        .chunk_by(same_point)
        .map(|group| {
            let first = &group[0];
            let trials = group.len();
            let failures = group.iter().filter(|r| !r.success).count();
            let (lo, hi) = wilson_interval(failures, trials);
            PointSummary {
                algorithm: first.algorithm.clone(),
                bound: first.bound.clone(),
                k: first.k,
                rho: first.rho,
                m: first.m,
                n: first.n,
                eps: first.eps,
                delta: first.delta,
                prior: first.prior.clone(),
                trials,
                mean_samples: group.iter().map(|r| r.samples as f64).sum::<f64>() / trials as f64,
                failures,
                failure_rate: failures as f64 / trials as f64,
                wilson_low: lo,
                wilson_high: hi,
                pass: failure_rate_counts(failures, trials, first.delta)
                    .ok()
                    .map(|s| s.pass),
            }
        })
        .collect()
}

pub fn render_summary(summaries: &[PointSummary]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<11} {:<9} {:>4} {:>7} {:>9} {:>7} {:>7} {:>6} {:>14} {:>7} {:>17}  pac",
        "algorithm",
        "bound",
        "k",
        "rho",
        "m/n",
        "eps",
        "delta",
        "trials",
        "mean_samples",
        "fail",
        "wilson95"
    )
    .unwrap();
    for s in summaries {
        let mn = match (s.m, s.n) {
            (Some(m), Some(n)) => format!("{m}/{n}"),
            _ => "-".into(),
        };
        let pac = match s.pass {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "n/a",
        };
        writeln!(
            out,
            "{:<11} {:<9} {:>4} {:>7.4} {:>9} {:>7.4} {:>7.4} {:>6} {:>14.1} {:>7.4} [{:.4}, {:.4}]  {pac}",
            s.algorithm,
            s.bound,
            s.k,
            s.rho,
            mn,
            s.eps,
            s.delta,
            s.trials,
            s.mean_samples,
            s.failure_rate,
            s.wilson_low,
            s.wilson_high
        )
        .unwrap();
    }
    out
}
