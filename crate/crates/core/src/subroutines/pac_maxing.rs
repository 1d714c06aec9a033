use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::confidence::{BoundKind, BoundSchedule};
use crate::env::{Arm, ArmSource};
use crate::error::{check_open_unit, Error, Result};

/// One loop iteration of PACMaxing, recorded after the paired sample.
///
/// `a` and `b` are positions in the input arm list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacMaxStep {
    pub t: u64,
    pub a: usize,
    pub b: usize,
    pub stop_index: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PacMaxOutcome {
    pub arm: Arm,
    /// The budget ran out before the stopping index fell to `eps`; `arm` is
    /// then a uniformly random input arm.
    pub exhausted: bool,
    pub samples: u64,
    pub trace: Option<Vec<PacMaxStep>>,
}

/// Budget sufficient for PACMaxing under Hoeffding bounds with the default
/// schedule constants (`γ = 2`, `k₁ = 4`):
/// `3n + max{(8n/ε²)·ln(k₁n/δ), (8(1+e⁻¹)γn/ε²)·ln(4(1+e⁻¹)γ/ε²)}`, rounded up.
pub fn pac_budget(n: usize, eps: f64, delta: f64) -> u64 {
    let s = BoundSchedule::new(delta, n);
    pac_budget_with(n, eps, delta, s.gamma(), s.k1())
}

pub fn pac_budget_with(n: usize, eps: f64, delta: f64, gamma: f64, k1: f64) -> u64 {
    let n = n as f64;
    let c = 1.0 + (-1.0f64).exp();
    let first = 8.0 * n / (eps * eps) * (k1 * n / delta).ln();
    let second = 8.0 * c * gamma * n / (eps * eps) * (4.0 * c * gamma / (eps * eps)).ln();
    (3.0 * n + first.max(second)).ceil() as u64
}

/// PACMaxing: LUCB-style search for an `(eps, 1)`-optimal arm under a hard
/// sample budget.
///
/// Samples every arm once, then repeatedly samples the empirical leader `a`
/// and the strongest challenger `b` (highest upper bound among the rest)
/// until `U(b) − L(a) ≤ eps`. A pair is only drawn while `t + 2 ≤ budget`,
/// so the total never exceeds `budget`. Argmax ties go to the lowest index.
pub fn pac_maxing(
    arms: &[Arm],
    eps: f64,
    delta: f64,
    budget: u64,
    bound: BoundKind,
    src: &mut ArmSource,
) -> Result<PacMaxOutcome> {
    run(arms, eps, delta, budget, bound, src, false)
}

/// [`pac_maxing`] that also records one [`PacMaxStep`] per loop iteration.
pub fn pac_maxing_traced(
    arms: &[Arm],
    eps: f64,
    delta: f64,
    budget: u64,
    bound: BoundKind,
    src: &mut ArmSource,
) -> Result<PacMaxOutcome> {
    run(arms, eps, delta, budget, bound, src, true)
}

/// Writes a trace as CSV with header `t,a,b,stop_index`.
pub fn write_trace<W: Write>(out: W, steps: &[PacMaxStep]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in steps {
        w.serialize(s)?;
    }
    w.flush()?;
    Ok(())
}

struct Stats {
    counts: Vec<u64>,
    sums: Vec<f64>,
    upper: Vec<f64>,
    lower: Vec<f64>,
}

impl Stats {
    fn mean(&self, i: usize) -> f64 {
        self.sums[i] / self.counts[i] as f64
    }

    fn refresh(&mut self, i: usize, bound: BoundKind, schedule: &BoundSchedule) {
        let n = self.counts[i];
        let d = schedule.delta_at(n);
        let m = self.mean(i);
        self.upper[i] = bound.upper_unchecked(m, n, d);
        self.lower[i] = bound.lower_unchecked(m, n, d);
    }

    fn leader(&self) -> usize {
        let mut best = 0;
        for i in 1..self.counts.len() {
            if self.mean(i) > self.mean(best) {
                best = i;
            }
        }
        best
    }

    fn challenger(&self, leader: usize) -> usize {
        let mut best: Option<usize> = None;
        for i in 0..self.counts.len() {
            if i == leader {
                continue;
            }
            if best.is_none_or(|b| self.upper[i] > self.upper[b]) {
                best = Some(i);
            }
        }
        best.expect("at least two arms")
    }
}

fn run(
    arms: &[Arm],
    eps: f64,
    delta: f64,
    budget: u64,
    bound: BoundKind,
    src: &mut ArmSource,
    traced: bool,
) -> Result<PacMaxOutcome> {
    check_open_unit("eps", eps)?;
    check_open_unit("delta", delta)?;
    let n = arms.len();
    if n == 0 {
        return Err(Error::NotEnoughArms { k: 1, available: 0 });
    }
    if budget < n as u64 {
        return Err(Error::BudgetTooSmall { budget, arms: n });
    }
    let mut trace = traced.then(Vec::new);

    let mut stats = Stats {
        counts: vec![1; n],
        sums: arms.iter().map(|a| src.sample_once(a)).collect(),
        upper: vec![0.0; n],
        lower: vec![0.0; n],
    };
    let mut t = n as u64;
    if n == 1 {
        return Ok(PacMaxOutcome {
            arm: arms[0],
            exhausted: false,
            samples: t,
            trace,
        });
    }

    let schedule = BoundSchedule::new(delta, n);
    for i in 0..n {
        stats.refresh(i, bound, &schedule);
    }
    let mut a = stats.leader();
    let mut b = stats.challenger(a);
    let mut stop = f64::INFINITY;

    while stop > eps && t + 2 <= budget {
        for i in [a, b] {
            stats.sums[i] += src.sample_once(&arms[i]);
            stats.counts[i] += 1;
            stats.refresh(i, bound, &schedule);
        }
        t += 2;
        a = stats.leader();
        b = stats.challenger(a);
        stop = stats.upper[b] - stats.lower[a];
        if let Some(tr) = trace.as_mut() {
            tr.push(PacMaxStep {
                t,
                a,
                b,
                stop_index: stop,
            });
        }
    }

    let (arm, exhausted) = if stop <= eps {
        (arms[a], false)
    } else {
        (src.choose(arms), true)
    };
    Ok(PacMaxOutcome {
        arm,
        exhausted,
        samples: t,
        trace,
    })
}
