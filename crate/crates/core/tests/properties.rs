use proptest::prelude::*;
use qexplore::confidence::{hoeffding_lower, hoeffding_upper, kl_bernoulli, kl_lower, kl_upper};
use qexplore::experiment::{read_records, write_records, TrialRecord};
use qexplore::{GroundTruth, MeanPrior};

/// Atoms on a 1/100 grid with small integer weights, so a brute-force CDF is exact.
fn discrete_support() -> impl Strategy<Value = Vec<(u32, u32)>> {
    prop::collection::vec((0u32..=100, 1u32..=9), 1..12)
}

fn prior_of(support: &[(u32, u32)]) -> MeanPrior {
    let pairs: Vec<(f64, f64)> = support
        .iter()
        .map(|&(a, w)| (a as f64 / 100.0, w as f64))
        .collect();
    MeanPrior::discrete(&pairs).unwrap()
}

/// First atom whose mass at-or-below exceeds `p·W`.
fn brute_force_quantile(support: &[(u32, u32)], p: f64) -> f64 {
    let total: u32 = support.iter().map(|s| s.1).sum();
    let mut atoms: Vec<u32> = support.iter().map(|s| s.0).collect();
    atoms.sort_unstable();
    atoms.dedup();
    for &a in &atoms {
        let le: u32 = support.iter().filter(|s| s.0 <= a).map(|s| s.1).sum();
        if le as f64 > p * total as f64 {
            return a as f64 / 100.0;
        }
    }
    *atoms.last().unwrap() as f64 / 100.0
}

proptest! {
    #[test]
    fn quantile_matches_brute_force(support in discrete_support(), p in 1e-6f64..0.999_999) {
        let prior = prior_of(&support);
        let q = prior.quantile(p).unwrap();
        prop_assert_eq!(q, brute_force_quantile(&support, p));

        let total: u32 = support.iter().map(|s| s.1).sum();
        let le: u32 = support.iter().filter(|s| (s.0 as f64 / 100.0) <= q).map(|s| s.1).sum();
        let ge: u32 = support.iter().filter(|s| (s.0 as f64 / 100.0) >= q).map(|s| s.1).sum();
        prop_assert!(le as f64 >= p * total as f64);
        prop_assert!(ge as f64 >= (1.0 - p) * total as f64);
    }

    #[test]
    fn cdf_matches_brute_force(support in discrete_support(), x in 0u32..=100) {
        let prior = prior_of(&support);
        let total: u32 = support.iter().map(|s| s.1).sum();
        let le: u32 = support.iter().filter(|s| s.0 <= x).map(|s| s.1).sum();
        let got = prior.cdf(x as f64 / 100.0);
        prop_assert!((got - le as f64 / total as f64).abs() < 1e-12);
    }

    #[test]
    fn threshold_nonincreasing_in_rho(support in discrete_support(), a in 0.01f64..0.99, b in 0.01f64..0.99) {
        let truth = GroundTruth::prior(prior_of(&support));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(truth.lambda_rho(lo).unwrap() >= truth.lambda_rho(hi).unwrap());
    }

    #[test]
    fn uniform_threshold_is_one_minus_rho(rho in 0.001f64..0.999) {
        let truth = GroundTruth::prior(MeanPrior::Uniform01);
        prop_assert!((truth.lambda_rho(rho).unwrap() - (1.0 - rho)).abs() < 1e-15);
    }

    #[test]
    fn kl_upper_solves_the_divergence_equation(mean in 0.0f64..=1.0, n in 1u64..100_000, delta in 1e-9f64..0.999) {
        let u = kl_upper(mean, n, delta).unwrap();
        let level = (1.0 / delta).ln();
        let nd = n as f64 * kl_bernoulli(mean, u);
        prop_assert!(u >= mean);
        prop_assert!(nd <= level + 1e-9, "overshoot: {nd} > {level}");
        prop_assert!(u == 1.0 || nd >= level - 1e-6, "undershoot: {nd} < {level}");

        let l = kl_lower(mean, n, delta).unwrap();
        let nd = n as f64 * kl_bernoulli(mean, l);
        prop_assert!(l <= mean);
        prop_assert!(nd <= level + 1e-9);
        prop_assert!(l == 0.0 || nd >= level - 1e-6);
    }

    #[test]
    fn kl_never_looser_than_hoeffding(mean in 0.0f64..=1.0, n in 1u64..10_000, delta in 1e-6f64..0.9) {
        prop_assert!(kl_upper(mean, n, delta).unwrap() <= hoeffding_upper(mean, n, delta).unwrap());
        prop_assert!(kl_lower(mean, n, delta).unwrap() >= hoeffding_lower(mean, n, delta).unwrap());
    }

    #[test]
    fn bounds_shrink_with_more_samples_and_larger_delta(
        mean in 0.0f64..=1.0,
        n in 1u64..5_000,
        extra in 1u64..5_000,
        d1 in 1e-6f64..0.9,
        d2 in 1e-6f64..0.9,
    ) {
        let (small, large) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        for upper in [kl_upper, hoeffding_upper] {
            prop_assert!(upper(mean, n + extra, small).unwrap() <= upper(mean, n, small).unwrap());
            prop_assert!(upper(mean, n, large).unwrap() <= upper(mean, n, small).unwrap());
        }
        for lower in [kl_lower, hoeffding_lower] {
            prop_assert!(lower(mean, n + extra, small).unwrap() >= lower(mean, n, small).unwrap());
            prop_assert!(lower(mean, n, large).unwrap() >= lower(mean, n, small).unwrap());
        }
    }

    #[test]
    fn csv_round_trip(rows in prop::collection::vec(record(), 0..20)) {
        let mut buf = Vec::new();
        write_records(&mut buf, &rows).unwrap();
        prop_assert_eq!(read_records(buf.as_slice()).unwrap(), rows);
    }
}

fn record() -> impl Strategy<Value = TrialRecord> {
    (
        prop::sample::select(vec!["al_q_ik", "cb_al_q_ik", "al_q_fk", "iur"]),
        1usize..50,
        0.0f64..1.0,
        prop::option::of((1usize..100, 100usize..400)),
        (1e-6f64..0.5, 1e-6f64..0.5),
        prop::sample::select(vec!["none", "kl", "hoeffding"]),
        "[a-z_]{1,8}(\\([0-9.;, ]{0,12}\\))?",
        (
            0usize..1000,
            any::<u64>(),
            1u64..u64::MAX / 2,
            any::<bool>(),
            0u64..100_000,
        ),
    )
        .prop_map(
            |(
                alg,
                k,
                rho,
                mn,
                (eps, delta),
                bound,
                prior,
                (trial, seed, samples, success, wall),
            )| {
                TrialRecord {
                    algorithm: alg.into(),
                    k,
                    rho,
                    m: mn.map(|x| x.0),
                    n: mn.map(|x| x.1),
                    eps,
                    delta,
                    bound: bound.into(),
                    prior,
                    trial,
                    seed,
                    samples,
                    success,
                    wall_ms: wall,
                }
            },
        )
}

#[test]
fn documented_quantile_examples() {
    assert_eq!(MeanPrior::Uniform01.quantile(0.95).unwrap(), 0.95);
    let hard = MeanPrior::two_point(0.05, 0.555, 0.445).unwrap();
    assert_eq!(hard.quantile(0.95).unwrap(), 0.555);
    let coin = MeanPrior::discrete(&[(0.2, 0.5), (0.8, 0.5)]).unwrap();
    assert_eq!(coin.quantile(0.5).unwrap(), 0.8);
}
