use std::fmt::Write as _;

use rand::Rng;

use crate::rng::{split, stream};
use crate::verify::sign_test_p;

use super::config::ExperimentConfig;
use super::runner::{run, RunOutput};
use super::ExperimentError;

const RESAMPLES: usize = 2000;

/// Paired ratio `Σ candidate / Σ baseline` of per-trial sample counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEstimate {
    pub ratio: f64,
    /// Percentile bootstrap 95% interval over resampled trials.
    pub low: f64,
    pub high: f64,
    /// Trials where the candidate used strictly fewer / more samples.
    pub wins: usize,
    pub losses: usize,
    /// One-sided sign-test p-value for "candidate is cheaper".
    pub sign_p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparePoint {
    pub value: f64,
    pub labels: Vec<String>,
    pub mean_samples: Vec<f64>,
    /// Entry `i` compares config `i` against config 0.
    pub ratios: Vec<RatioEstimate>,
}

pub fn bootstrap_ratio(baseline: &[u64], candidate: &[u64], seed: u64) -> RatioEstimate {
    assert_eq!(baseline.len(), candidate.len(), "paired samples");
    assert!(!baseline.is_empty());
    let ratio_of = |idx: &mut dyn Iterator<Item = usize>| {
        let (mut a, mut b) = (0.0, 0.0);
        for i in idx {
            a += baseline[i] as f64;
            b += candidate[i] as f64;
        }
        b / a
    };
    let n = baseline.len();
    let ratio = ratio_of(&mut (0..n));
    let mut rng = stream(seed, 0);
    let mut boot: Vec<f64> = (0..RESAMPLES)
        .map(|_| ratio_of(&mut (0..n).map(|_| rng.random_range(0..n))))
        .collect();
    boot.sort_by(f64::total_cmp);
    let at = |q: f64| boot[((q * (RESAMPLES - 1) as f64).round() as usize).min(RESAMPLES - 1)];
    let wins = baseline
        .iter()
        .zip(candidate)
        .filter(|(a, b)| b < a)
        .count();
    let losses = baseline
        .iter()
        .zip(candidate)
        .filter(|(a, b)| b > a)
        .count();
    RatioEstimate {
        ratio,
        low: at(0.025),
        high: at(0.975),
        wins,
        losses,
        sign_p: sign_test_p(wins, losses),
    }
}

fn check_compatible(configs: &[ExperimentConfig]) -> Result<(), ExperimentError> {
    let Some(first) = configs.first() else {
        return Err(ExperimentError::Mismatch("no configs given".into()));
    };
    for (i, c) in configs.iter().enumerate().skip(1) {
        let field = if c.sweep != first.sweep {
            Some("sweep")
        } else if c.arms != first.arms {
            Some("arms")
        } else if c.problem != first.problem {
            Some("problem")
        } else if c.seed != first.seed {
            Some("seed")
        } else if c.trials != first.trials {
            Some("trials")
        } else if c.algorithm.variant().is_finite() != first.algorithm.variant().is_finite() {
            Some("algorithm")
        } else {
            None
        };
        if let Some(field) = field {
            return Err(ExperimentError::Mismatch(format!(
                "config {} differs from config 0 in `{field}`",
                i
            )));
        }
    }
    Ok(())
}

fn labels(configs: &[ExperimentConfig]) -> Vec<String> {
    let base: Vec<String> = configs
        .iter()
        .map(|c| match c.bound_label() {
            "none" => c.algorithm.name().to_owned(),
            b => format!("{}({b})", c.algorithm.name()),
        })
        .collect();
    base.iter()
        .enumerate()
        .map(|(i, l)| {
            if base.iter().filter(|o| *o == l).count() > 1 {
                format!("{l}#{i}")
            } else {
                l.clone()
            }
        })
        .collect()
}

/// Runs every config and pairs their trials per sweep point.
pub fn compare(configs: &[ExperimentConfig]) -> Result<Vec<ComparePoint>, ExperimentError> {
    check_compatible(configs)?;
    for c in configs {
        c.validate()?;
    }
    let outputs = configs.iter().map(run).collect::<Result<Vec<_>, _>>()?;
    compare_outputs(configs, &outputs)
}

/// Pairs already-computed runs of compatible configs.
pub fn compare_outputs(
    configs: &[ExperimentConfig],
    outputs: &[RunOutput],
) -> Result<Vec<ComparePoint>, ExperimentError> {
    check_compatible(configs)?;
    if configs.len() != outputs.len() {
        return Err(ExperimentError::Mismatch(
            "one run per config needed".into(),
        ));
    }
    let first = &configs[0];
    let trials = first.trials;
    let labels = labels(configs);
    let mut points = Vec::new();
    for (p, &value) in first.sweep.values.iter().enumerate() {
        let samples: Vec<Vec<u64>> = outputs
            .iter()
            .map(|o| {
                o.records[p * trials..(p + 1) * trials]
                    .iter()
                    .map(|r| r.samples)
                    .collect()
            })
            .collect();
        let seed = split(first.seed, value.to_bits(), 0xB007);
        points.push(ComparePoint {
            value,
            labels: labels.clone(),
            mean_samples: samples
                .iter()
                .map(|s| s.iter().map(|&x| x as f64).sum::<f64>() / s.len() as f64)
                .collect(),
            ratios: samples
                .iter()
                .map(|s| bootstrap_ratio(&samples[0], s, seed))
                .collect(),
        });
    }
    Ok(points)
}

pub fn render_comparison(param: &str, points: &[ComparePoint]) -> String {
    let mut out = String::new();
    for p in points {
        writeln!(out, "{param} = {}", p.value).unwrap();
        for (i, label) in p.labels.iter().enumerate() {
            let r = &p.ratios[i];
            if i == 0 {
                writeln!(
                    out,
                    "  {label:<24} mean {:>14.1}  (baseline)",
                    p.mean_samples[i]
                )
                .unwrap();
            } else {
                writeln!(
                    out,
                    "  {label:<24} mean {:>14.1}  ratio {:.4} [{:.4}, {:.4}]  cheaper {}/{}  sign p {:.3e}",
                    p.mean_samples[i],
                    r.ratio,
                    r.low,
                    r.high,
                    r.wins,
                    r.wins + r.losses,
                    r.sign_p
                )
                .unwrap();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples_give_exact_one() {
        let a = [10, 20, 35, 7];
        let r = bootstrap_ratio(&a, &a, 1);
        assert_eq!((r.ratio, r.low, r.high), (1.0, 1.0, 1.0));
        assert_eq!((r.wins, r.losses), (0, 0));
    }

    #[test]
    fn halved_samples() {
        let a = [10, 20, 30, 40];
        let b = [5, 10, 15, 20];
        let r = bootstrap_ratio(&a, &b, 1);
        assert_eq!(r.ratio, 0.5);
        assert_eq!(r.wins, 4);
        assert!((r.sign_p - 1.0 / 16.0).abs() < 1e-15);
    }
}
