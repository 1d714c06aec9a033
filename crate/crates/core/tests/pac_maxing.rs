use qexplore::confidence::BoundSchedule;
use qexplore::rng::split;
use qexplore::subroutines::{pac_budget, pac_maxing, pac_maxing_traced, write_trace, PacMaxStep};
use qexplore::{ArmSource, BoundKind, MeanPrior, RewardDistribution};

/// Replays a trace on constant arms, whose empirical means are known, and
/// recomputes leader, challenger and stopping index from scratch.
fn replay(values: &[f64], eps: f64, delta: f64, bound: BoundKind, trace: &[PacMaxStep]) {
    let n = values.len();
    let schedule = BoundSchedule::new(delta, n);
    let mut counts = vec![1u64; n];
    let ucb = |i: usize, counts: &[u64]| {
        bound
            .upper(values[i], counts[i], schedule.delta_at(counts[i]))
            .unwrap()
    };
    let lcb = |i: usize, counts: &[u64]| {
        bound
            .lower(values[i], counts[i], schedule.delta_at(counts[i]))
            .unwrap()
    };
    let pick = |counts: &[u64]| {
        let a = (0..n).fold(0, |best, i| if values[i] > values[best] { i } else { best });
        let b = (0..n)
            .filter(|&i| i != a)
            .fold(None, |best: Option<usize>, i| match best {
                Some(j) if ucb(j, counts) >= ucb(i, counts) => Some(j),
                _ => Some(i),
            })
            .unwrap();
        (a, b)
    };
    let (mut a, mut b) = pick(&counts);
    for (step, s) in trace.iter().enumerate() {
        counts[a] += 1;
        counts[b] += 1;
        (a, b) = pick(&counts);
        let stop = ucb(b, &counts) - lcb(a, &counts);
        assert_eq!(s.t, n as u64 + 2 * (step as u64 + 1));
        assert_eq!((s.a, s.b), (a, b), "step {step}");
        // Running sums drift from the exact constant by a few ulps per step.
        assert!(
            (s.stop_index - stop).abs() < 1e-8,
            "step {step}: {} vs {stop}",
            s.stop_index
        );
        if step + 1 < trace.len() {
            assert!(s.stop_index > eps);
        }
    }
}

fn constant_source(values: &[f64]) -> ArmSource {
    let dists = values
        .iter()
        .map(|&v| RewardDistribution::Constant(v))
        .collect();
    ArmSource::finite(dists, 0)
}

#[test]
fn trace_replays_on_constant_arms() {
    let cases: [(&[f64], f64, BoundKind); 4] = [
        (&[0.9, 0.1], 0.1, BoundKind::Hoeffding),
        (&[0.3, 0.7, 0.5, 0.69], 0.05, BoundKind::Hoeffding),
        (&[0.3, 0.7, 0.5, 0.69], 0.05, BoundKind::Kl),
        (&[0.5, 0.5, 0.2], 0.2, BoundKind::Kl),
    ];
    for (values, eps, bound) in cases {
        let mut src = constant_source(values);
        let arms = src.finite_arms().unwrap().to_vec();
        let out = pac_maxing_traced(&arms, eps, 0.1, 10_000_000, bound, &mut src).unwrap();
        let trace = out.trace.unwrap();
        assert!(!out.exhausted);
        assert!(trace.last().unwrap().stop_index <= eps);
        replay(values, eps, 0.1, bound, &trace);
        assert_eq!(out.samples, values.len() as u64 + 2 * trace.len() as u64);
        assert_eq!(out.samples, src.samples());
    }
}

#[test]
fn ties_go_to_the_lowest_index() {
    let mut src = constant_source(&[0.5, 0.5, 0.2]);
    let arms = src.finite_arms().unwrap().to_vec();
    let out = pac_maxing(&arms, 0.2, 0.1, 1_000_000, BoundKind::Hoeffding, &mut src).unwrap();
    assert_eq!(out.arm.base_index(), Some(0));
}

#[test]
fn dominated_constant_is_preferred_correctly() {
    // The acceptance step of the confidence-bound solver: candidate at λ + ε
    // against a constant arm at λ − 7ε/8, tolerance ε/8.
    let (lambda, eps) = (0.6, 0.1);
    for (candidate, wins) in [(lambda + eps, true), (lambda - 2.0 * eps, false)] {
        let mut src = ArmSource::from_prior(MeanPrior::point(0.5).unwrap(), 0);
        let a = src.constant_arm(candidate).unwrap();
        let c = src.constant_arm(lambda - 0.875 * eps).unwrap();
        let budget = pac_budget(2, eps / 8.0, 0.1);
        let out = pac_maxing(&[a, c], eps / 8.0, 0.1, budget, BoundKind::Kl, &mut src).unwrap();
        assert!(!out.exhausted);
        assert_eq!(out.arm.id() == a.id(), wins);
    }
}

#[test]
fn budget_is_respected_on_hard_instances() {
    for seed in 0..20 {
        let mut src = ArmSource::finite_bernoulli(&[0.5; 6], seed).unwrap();
        let arms = src.finite_arms().unwrap().to_vec();
        for budget in [6, 7, 8, 51, 500] {
            let before = src.samples();
            let out = pac_maxing(&arms, 0.01, 0.1, budget, BoundKind::Kl, &mut src).unwrap();
            assert!(out.exhausted);
            assert!(out.samples <= budget);
            assert_eq!(src.samples() - before, out.samples);
        }
    }
}

#[test]
fn ten_arm_bernoulli_rarely_fails() {
    let means: Vec<f64> = (0..10).map(|i| 0.9 - 0.1 * i as f64).collect();
    let budget = pac_budget(10, 0.1, 0.1);
    let mut failures = 0;
    for t in 0..200 {
        let mut src = ArmSource::finite_bernoulli(&means, split(3, 0, t)).unwrap();
        let arms = src.finite_arms().unwrap().to_vec();
        let out = pac_maxing(&arms, 0.1, 0.1, budget, BoundKind::Hoeffding, &mut src).unwrap();
        failures += (out.arm.mean() < 0.8) as usize;
        assert!(out.samples <= budget + 2);
    }
    // δ + 3·SE at 200 trials
    assert!(failures as f64 / 200.0 <= 0.1 + 3.0 * (0.09f64 / 200.0).sqrt());
}

#[test]
fn trace_csv_parses_back() {
    let mut src = ArmSource::from_prior(MeanPrior::Uniform01, 4);
    let arms = src.draw_arms(5).unwrap();
    let out = pac_maxing_traced(
        &arms,
        0.1,
        0.1,
        pac_budget(5, 0.1, 0.1),
        BoundKind::Kl,
        &mut src,
    )
    .unwrap();
    let trace = out.trace.unwrap();
    let mut buf = Vec::new();
    write_trace(&mut buf, &trace).unwrap();
    let back: Vec<PacMaxStep> = csv::Reader::from_reader(buf.as_slice())
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap();
    assert_eq!(back, trace);
}
