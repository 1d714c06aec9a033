//! Arms, reward laws, mean priors and the sample-counting arm source.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{check_open_unit, Error, Result};
use crate::rng;

/// Reward law of a single arm. Every law is supported on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RewardDistribution {
    Bernoulli(f64),
    Constant(f64),
}

impl RewardDistribution {
    pub fn bernoulli(p: f64) -> Result<Self> {
        check_unit_closed("p", p)?;
        Ok(RewardDistribution::Bernoulli(p))
    }

    pub fn constant(v: f64) -> Result<Self> {
        check_unit_closed("v", v)?;
        Ok(RewardDistribution::Constant(v))
    }

    pub fn mean(&self) -> f64 {
        match *self {
            RewardDistribution::Bernoulli(p) => p,
            RewardDistribution::Constant(v) => v,
        }
    }

    /// One reward draw.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            RewardDistribution::Bernoulli(p) => {
                if rng.random_bool(p) {
                    1.0
                } else {
                    0.0
                }
            }
            RewardDistribution::Constant(v) => v,
        }
    }

    /// Sum of `times` i.i.d. rewards.
    ///
    /// Bernoulli sums are drawn as a single binomial variate, which has exactly
    /// the law of the sum of `times` independent draws.
    pub fn draw_sum<R: Rng + ?Sized>(&self, rng: &mut R, times: u64) -> f64 {
        match *self {
            RewardDistribution::Bernoulli(p) => {
                if times == 1 {
                    return self.draw(rng);
                }
                let binomial = Binomial::new(times, p).expect("p validated in [0, 1]");
                binomial.sample(rng) as f64
            }
            RewardDistribution::Constant(v) => v * times as f64,
        }
    }
}

fn check_unit_closed(name: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::param(name, v, "must lie in [0, 1]"))
    }
}

/// Opaque arm handle identifier, unique within one [`ArmSource`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArmId(pub u64);

impl fmt::Display for ArmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A handle to an arm issued by an [`ArmSource`].
///
/// Arms of a finite set carry their position as `base_index`; handles drawn
/// from an infinite extension carry the index of the base arm they copy, so
/// several handles may share one base arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arm {
    id: ArmId,
    base: Option<usize>,
    dist: RewardDistribution,
}

impl Arm {
    pub fn id(&self) -> ArmId {
        self.id
    }

    pub fn base_index(&self) -> Option<usize> {
        self.base
    }

    pub fn distribution(&self) -> RewardDistribution {
        self.dist
    }

    /// True mean. Algorithms never read this; it is here for scoring.
    pub fn mean(&self) -> f64 {
        self.dist.mean()
    }
}

/// Law of the means of arms drawn from an infinite population.
#[derive(Debug, Clone, PartialEq)]
pub enum MeanPrior {
    Uniform01,
    /// Mean `hi` with probability `rho`, `lo` otherwise.
    TwoPoint {
        rho: f64,
        hi: f64,
        lo: f64,
    },
    Discrete(DiscretePrior),
}

/// Finitely supported prior: atoms sorted ascending with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePrior {
    atoms: Vec<f64>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
    total: f64,
}

impl DiscretePrior {
    /// Builds a prior from `(mean, weight)` pairs. Repeated means are merged.
    pub fn new(support: &[(f64, f64)]) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::Spec("discrete prior needs at least one atom".into()));
        }
        let mut pairs = Vec::with_capacity(support.len());
        for &(v, w) in support {
            check_unit_closed("atom", v)?;
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::param("weight", w, "must be positive and finite"));
            }
            pairs.push((v, w));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<f64> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        for (v, w) in pairs {
            if atoms.last() == Some(&v) {
                *weights.last_mut().unwrap() += w;
            } else {
                atoms.push(v);
                weights.push(w);
            }
        }
        let mut running = 0.0;
        let mut sums = Vec::with_capacity(weights.len());
        for w in &weights {
            running += w;
            sums.push(running);
        }
        let total = running;
        let cumulative = sums.iter().map(|s| s / total).collect();
        Ok(DiscretePrior {
            atoms,
            weights,
            cumulative,
            total,
        })
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn cdf(&self, x: f64) -> f64 {
        match self.atoms.partition_point(|&a| a <= x) {
            0 => 0.0,
            i => self.cumulative[i - 1],
        }
    }

    fn quantile(&self, p: f64) -> f64 {
        // sup{x : F(x) ≤ p} is the first atom whose cumulative mass exceeds p.
        let i = self.cumulative.partition_point(|&c| c <= p);
        self.atoms[i.min(self.atoms.len() - 1)]
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = rng.random::<f64>() * self.total;
        let mut acc = 0.0;
        for (a, w) in self.atoms.iter().zip(&self.weights) {
            acc += w;
            if u < acc {
                return *a;
            }
        }
        *self.atoms.last().unwrap()
    }
}

impl MeanPrior {
    pub fn two_point(rho: f64, hi: f64, lo: f64) -> Result<Self> {
        check_open_unit("rho", rho)?;
        check_unit_closed("hi", hi)?;
        check_unit_closed("lo", lo)?;
        if lo >= hi {
            return Err(Error::param("lo", lo, "must be below hi"));
        }
        Ok(MeanPrior::TwoPoint { rho, hi, lo })
    }

    pub fn discrete(support: &[(f64, f64)]) -> Result<Self> {
        Ok(MeanPrior::Discrete(DiscretePrior::new(support)?))
    }

    /// Every drawn arm has mean `v`.
    pub fn point(v: f64) -> Result<Self> {
        Self::discrete(&[(v, 1.0)])
    }

    /// The cumulative distribution function of the means.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            MeanPrior::Uniform01 => x.clamp(0.0, 1.0),
            MeanPrior::TwoPoint { rho, hi, lo } => {
                if x < *lo {
                    0.0
                } else if x < *hi {
                    1.0 - rho
                } else {
                    1.0
                }
            }
            MeanPrior::Discrete(d) => d.cdf(x),
        }
    }

    /// Generalised inverse `sup{x : F(x) ≤ p}` for `p ∈ (0, 1)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        check_open_unit("p", p)?;
        Ok(match self {
            MeanPrior::Uniform01 => p,
            MeanPrior::TwoPoint { rho, hi, lo } => {
                if 1.0 - rho > p {
                    *lo
                } else {
                    *hi
                }
            }
            MeanPrior::Discrete(d) => d.quantile(p),
        })
    }

    /// `λ_ρ`, the threshold of the top `rho` fraction.
    pub fn top_fraction_threshold(&self, rho: f64) -> Result<f64> {
        check_open_unit("rho", rho)?;
        self.quantile(1.0 - rho)
    }

    pub fn sample_mean<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            MeanPrior::Uniform01 => rng.random::<f64>(),
            MeanPrior::TwoPoint { rho, hi, lo } => {
                if rng.random::<f64>() < *rho {
                    *hi
                } else {
                    *lo
                }
            }
            MeanPrior::Discrete(d) => d.sample(rng),
        }
    }
}

/// What [`ArmSource::draw_arms`] draws from.
#[derive(Debug, Clone, PartialEq)]
pub enum Population {
    /// A fixed list of arms; exposed whole, never drawn from.
    Finite(Vec<Arm>),
    /// Bernoulli arms whose means are i.i.d. from a prior.
    Prior(MeanPrior),
    /// The infinite extension of a finite list: draws uniformly with replacement.
    Extension(Vec<Arm>),
}

impl Population {
    fn label(&self) -> &'static str {
        match self {
            Population::Finite(_) => "finite",
            Population::Prior(_) => "prior",
            Population::Extension(_) => "extension",
        }
    }
}

struct Slot {
    dist: RewardDistribution,
    rng: Option<ChaCha8Rng>,
}

/// The single gateway through which algorithms obtain arms and rewards.
///
/// Counts every reward observation. Draw randomness (which arms appear, random
/// fallbacks) uses stream 0 of the seed; arm `#i` rewards use stream `i + 1`.
pub struct ArmSource {
    population: Population,
    seed: u64,
    draw_rng: ChaCha8Rng,
    slots: Vec<Slot>,
    samples: u64,
}

impl fmt::Debug for ArmSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ArmSource")
            .field("population", &self.population.label())
            .field("seed", &self.seed)
            .field("arms_issued", &self.slots.len())
            .field("samples", &self.samples)
            .finish()
    }
}

impl ArmSource {
    fn empty(seed: u64) -> Self {
        ArmSource {
            population: Population::Finite(Vec::new()),
            seed,
            draw_rng: rng::stream(seed, 0),
            slots: Vec::new(),
            samples: 0,
        }
    }

    fn register(&mut self, dist: RewardDistribution, base: Option<usize>) -> Arm {
        let id = ArmId(self.slots.len() as u64);
        self.slots.push(Slot { dist, rng: None });
        Arm { id, base, dist }
    }

    fn register_base(&mut self, dists: Vec<RewardDistribution>) -> Vec<Arm> {
        dists
            .into_iter()
            .enumerate()
            .map(|(i, d)| self.register(d, Some(i)))
            .collect()
    }

    /// A finite arm set.
    pub fn finite(dists: Vec<RewardDistribution>, seed: u64) -> Self {
        let mut src = Self::empty(seed);
        let arms = src.register_base(dists);
        src.population = Population::Finite(arms);
        src
    }

    /// A finite set of Bernoulli arms with the given means.
    pub fn finite_bernoulli(means: &[f64], seed: u64) -> Result<Self> {
        let dists = means
            .iter()
            .map(|&p| RewardDistribution::bernoulli(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::finite(dists, seed))
    }

    /// An infinite population of Bernoulli arms with means drawn from `prior`.
    pub fn from_prior(prior: MeanPrior, seed: u64) -> Self {
        let mut src = Self::empty(seed);
        src.population = Population::Prior(prior);
        src
    }

    /// The infinite extension of a finite set.
    pub fn extension(dists: Vec<RewardDistribution>, seed: u64) -> Self {
        let mut src = Self::empty(seed);
        let arms = src.register_base(dists);
        src.population = Population::Extension(arms);
        src
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    /// Replaces the population, returning the old one. Counter, RNG state and
    /// issued handles are kept, so algorithms can restrict an extension to a
    /// subset of base arms mid-run.
    pub fn replace_population(&mut self, population: Population) -> Population {
        std::mem::replace(&mut self.population, population)
    }

    /// Total reward observations so far.
    pub fn samples(&self) -> u64 {
        self.samples
    }

    /// The arms of a finite population.
    pub fn finite_arms(&self) -> Result<&[Arm]> {
        match &self.population {
            Population::Finite(arms) => Ok(arms),
            other => Err(Error::Unsupported {
                op: "finite_arms",
                population: other.label(),
            }),
        }
    }

    /// Draws `count` fresh arm handles. Does not touch the sample counter.
    pub fn draw_arms(&mut self, count: usize) -> Result<Vec<Arm>> {
        let mut out = Vec::with_capacity(count);
        match &self.population {
            Population::Prior(prior) => {
                let prior = prior.clone();
                for _ in 0..count {
                    let mean = prior.sample_mean(&mut self.draw_rng);
                    out.push(self.register(RewardDistribution::Bernoulli(mean), None));
                }
            }
            Population::Extension(base) => {
                if base.is_empty() {
                    return Err(Error::NotEnoughArms {
                        k: count,
                        available: 0,
                    });
                }
                let base = base.clone();
                for _ in 0..count {
                    let pick = base[self.draw_rng.random_range(0..base.len())];
                    out.push(self.register(pick.dist, pick.base));
                }
            }
            Population::Finite(_) => {
                return Err(Error::Unsupported {
                    op: "draw_arms",
                    population: "finite",
                })
            }
        }
        Ok(out)
    }

    /// Issues an arm that always pays `value`.
    pub fn constant_arm(&mut self, value: f64) -> Result<Arm> {
        let dist = RewardDistribution::constant(value)?;
        Ok(self.register(dist, None))
    }

    fn slot_rng(&mut self, arm: &Arm) -> &mut ChaCha8Rng {
        let seed = self.seed;
        let id = arm.id.0;
        let slot = self
            .slots
            .get_mut(id as usize)
            .unwrap_or_else(|| panic!("arm {} was not issued by this source", arm.id));
        slot.rng.get_or_insert_with(|| rng::stream(seed, id + 1))
    }

    /// Mean of `times` fresh rewards of `arm`; the counter grows by `times`.
    ///
    /// # Panics
    /// If `times == 0` or the arm was issued by another source.
    pub fn sample(&mut self, arm: &Arm, times: u64) -> f64 {
        assert!(times > 0, "sample() needs times >= 1");
        let dist = self.slots[arm.id.0 as usize].dist;
        let sum = dist.draw_sum(self.slot_rng(arm), times);
        self.samples += times;
        sum / times as f64
    }

    /// One reward of `arm`.
    pub fn sample_once(&mut self, arm: &Arm) -> f64 {
        let dist = self.slots[arm.id.0 as usize].dist;
        let r = dist.draw(self.slot_rng(arm));
        self.samples += 1;
        r
    }

    /// Uniformly random element of `arms`, from the draw stream.
    pub fn choose(&mut self, arms: &[Arm]) -> Arm {
        arms[self.draw_rng.random_range(0..arms.len())]
    }
}

/// Known true means, used only for scoring.
#[derive(Debug, Clone, PartialEq)]
pub enum GroundTruth {
    /// Means indexed by base position, plus the same list sorted descending.
    Finite {
        means: Vec<f64>,
        sorted: Vec<f64>,
    },
    Prior(MeanPrior),
}

impl GroundTruth {
    pub fn finite(means: &[f64]) -> Self {
        let mut sorted = means.to_vec();
        sorted.sort_by(|a, b| b.total_cmp(a));
        GroundTruth::Finite {
            means: means.to_vec(),
            sorted,
        }
    }

    pub fn prior(prior: MeanPrior) -> Self {
        GroundTruth::Prior(prior)
    }

    /// `λ_[m]`, the m-th largest mean (1-based).
    pub fn lambda_rank(&self, m: usize) -> Result<f64> {
        match self {
            GroundTruth::Finite { sorted, .. } => {
                if m == 0 || m > sorted.len() {
                    Err(Error::RankOutOfRange { m, n: sorted.len() })
                } else {
                    Ok(sorted[m - 1])
                }
            }
            GroundTruth::Prior(_) => Err(Error::Unsupported {
                op: "lambda_rank",
                population: "prior",
            }),
        }
    }

    /// `λ_ρ`. A finite truth is read as its own infinite extension.
    pub fn lambda_rho(&self, rho: f64) -> Result<f64> {
        match self {
            GroundTruth::Prior(prior) => prior.top_fraction_threshold(rho),
            GroundTruth::Finite { means, .. } => {
                let support: Vec<(f64, f64)> = means.iter().map(|&m| (m, 1.0)).collect();
                MeanPrior::discrete(&support)?.top_fraction_threshold(rho)
            }
        }
    }

    /// True mean of a returned arm.
    pub fn mean_of(&self, arm: &Arm) -> Result<f64> {
        match self {
            GroundTruth::Prior(_) => Ok(arm.mean()),
            GroundTruth::Finite { means, .. } => arm
                .base_index()
                .and_then(|i| means.get(i).copied())
                .ok_or(Error::UnknownArm(arm.id().0)),
        }
    }
}

/// `mean ≥ λ_ρ − ε`.
pub fn is_quantile_optimal(mean: f64, truth: &GroundTruth, eps: f64, rho: f64) -> Result<bool> {
    Ok(mean >= truth.lambda_rho(rho)? - eps)
}

/// `mean + ε ≥ λ_[m]`.
pub fn is_top_m_optimal(mean: f64, truth: &GroundTruth, eps: f64, m: usize) -> Result<bool> {
    Ok(mean + eps >= truth.lambda_rank(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_quantile_is_identity() {
        assert_eq!(MeanPrior::Uniform01.quantile(0.95).unwrap(), 0.95);
    }

    #[test]
    fn two_point_quantile_picks_high_atom() {
        let prior = MeanPrior::two_point(0.05, 0.555, 0.445).unwrap();
        assert_eq!(prior.quantile(0.95).unwrap(), 0.555);
        assert_eq!(prior.quantile(0.9).unwrap(), 0.445);
    }

    #[test]
    fn discrete_quantile_at_atom_boundary() {
        let prior = MeanPrior::discrete(&[(0.2, 0.5), (0.8, 0.5)]).unwrap();
        assert_eq!(prior.quantile(0.5).unwrap(), 0.8);
        assert_eq!(prior.quantile(0.49).unwrap(), 0.2);
    }

    #[test]
    fn quantile_rejects_closed_endpoints() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(MeanPrior::Uniform01.quantile(p).is_err());
        }
    }

    #[test]
    fn quantile_optimality() {
        let truth = GroundTruth::prior(MeanPrior::Uniform01);
        let lambda = truth.lambda_rho(0.1).unwrap();
        assert!(is_quantile_optimal(lambda, &truth, 0.0, 0.1).unwrap());
        assert!(is_quantile_optimal(lambda, &truth, 0.3, 0.1).unwrap());
        assert!(is_quantile_optimal(0.86, &truth, 0.05, 0.1).unwrap());
        assert!(!is_quantile_optimal(0.84, &truth, 0.05, 0.1).unwrap());
    }

    #[test]
    fn top_m_optimality() {
        let truth = GroundTruth::finite(&[0.9, 0.5, 0.1]);
        assert!(is_top_m_optimal(0.9, &truth, 0.0, 1).unwrap());
        assert!(is_top_m_optimal(0.45, &truth, 0.1, 2).unwrap());
        assert!(!is_top_m_optimal(0.45, &truth, 0.04, 2).unwrap());
        assert!(matches!(
            is_top_m_optimal(0.45, &truth, 0.1, 4),
            Err(Error::RankOutOfRange { m: 4, n: 3 })
        ));
        assert!(is_top_m_optimal(0.45, &truth, 0.1, 0).is_err());
    }

    #[test]
    fn extension_draws_stay_in_base_support() {
        let dists = [0.1, 0.5, 0.9].map(RewardDistribution::Bernoulli).to_vec();
        let mut src = ArmSource::extension(dists, 3);
        let arms = src.draw_arms(5).unwrap();
        assert_eq!(arms.len(), 5);
        for a in &arms {
            let b = a.base_index().unwrap();
            assert_eq!(a.mean(), [0.1, 0.5, 0.9][b]);
        }
        assert_eq!(src.samples(), 0);
    }

    #[test]
    fn uniform_draws_center_on_half() {
        let mut src = ArmSource::from_prior(MeanPrior::Uniform01, 11);
        let arms = src.draw_arms(10_000).unwrap();
        let avg = arms.iter().map(Arm::mean).sum::<f64>() / 1e4;
        assert!((avg - 0.5).abs() < 0.02, "avg {avg}");
        assert_eq!(src.samples(), 0);
    }

    #[test]
    fn equal_seeds_draw_equal_arms() {
        let draw = || {
            let mut src = ArmSource::from_prior(MeanPrior::Uniform01, 99);
            src.draw_arms(20)
                .unwrap()
                .iter()
                .map(|a| (a.id(), a.mean().to_bits()))
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(), draw());
    }

    #[test]
    fn constant_and_degenerate_sampling() {
        let mut src = ArmSource::from_prior(MeanPrior::Uniform01, 0);
        let c = src.constant_arm(0.3).unwrap();
        assert_eq!(src.sample(&c, 7), 0.3);
        assert_eq!(src.samples(), 7);

        let mut src = ArmSource::finite_bernoulli(&[1.0], 0).unwrap();
        let arm = src.finite_arms().unwrap()[0];
        assert_eq!(src.sample(&arm, 50), 1.0);
        assert_eq!(src.samples(), 50);
    }

    #[test]
    fn fair_coin_mean_concentrates() {
        // Hoeffding radius at δ = 0.01 over 10⁵ draws is sqrt(ln(100) / 2e5) ≈ 0.0048.
        let mut src = ArmSource::finite_bernoulli(&[0.5], 5).unwrap();
        let arm = src.finite_arms().unwrap()[0];
        let m = src.sample(&arm, 100_000);
        assert!((m - 0.5).abs() <= 0.0063, "mean {m}");
        assert_eq!(src.samples(), 100_000);
    }

    #[test]
    fn finite_source_cannot_draw() {
        let mut src = ArmSource::finite_bernoulli(&[0.2, 0.4], 1).unwrap();
        assert!(src.draw_arms(1).is_err());
        let src = ArmSource::from_prior(MeanPrior::Uniform01, 1);
        assert!(src.finite_arms().is_err());
    }

    #[test]
    fn rewards_do_not_depend_on_interleaving() {
        let mut a = ArmSource::finite_bernoulli(&[0.5, 0.5], 4).unwrap();
        let arms = a.finite_arms().unwrap().to_vec();
        let x: Vec<f64> = (0..20).map(|_| a.sample_once(&arms[0])).collect();

        let mut b = ArmSource::finite_bernoulli(&[0.5, 0.5], 4).unwrap();
        let mut y = Vec::new();
        for _ in 0..20 {
            b.sample_once(&arms[1]);
            y.push(b.sample_once(&arms[0]));
        }
        assert_eq!(x, y);
    }

    #[test]
    fn finite_truth_reads_as_extension() {
        let truth = GroundTruth::finite(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(truth.lambda_rho(0.5).unwrap(), 0.3);
        assert_eq!(truth.lambda_rank(2).unwrap(), 0.3);
    }
}
