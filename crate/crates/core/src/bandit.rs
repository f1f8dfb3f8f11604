//! Bernoulli bandit environment and the agent's count-based beliefs.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::beta::BetaParams;
use crate::error::{check_unit, Error, Result};

/// Binary reward of one pull.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reward {
    Failure,
    Success,
}

impl Reward {
    pub fn as_u8(self) -> u8 {
        match self {
            Reward::Failure => 0,
            Reward::Success => 1,
        }
    }
}

impl Serialize for Reward {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.as_u8())
    }
}

/// Hidden success probabilities of every arm plus the QoS threshold `q`.
///
/// An arm violates the requirement when its true success probability is
/// at most `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditInstance {
    true_probs: Vec<f64>,
    qos_threshold: f64,
}

impl BanditInstance {
    pub fn new(true_probs: Vec<f64>, qos_threshold: f64) -> Result<Self> {
        if true_probs.is_empty() {
            return Err(Error::NoArms);
        }
        for &p in &true_probs {
            check_unit("p", p)?;
        }
        check_unit("q", qos_threshold)?;
        Ok(Self {
            true_probs,
            qos_threshold,
        })
    }

    pub fn n_arms(&self) -> usize {
        self.true_probs.len()
    }

    pub fn true_probs(&self) -> &[f64] {
        &self.true_probs
    }

    pub fn qos_threshold(&self) -> f64 {
        self.qos_threshold
    }

    pub fn true_prob(&self, arm: usize) -> Result<f64> {
        self.true_probs.get(arm).copied().ok_or(Error::ArmIndex {
            index: arm,
            n_arms: self.n_arms(),
        })
    }

    /// Whether `arm` truly violates the QoS requirement (`p_arm <= q`).
    pub fn violates(&self, arm: usize) -> Result<bool> {
        Ok(self.true_prob(arm)? <= self.qos_threshold)
    }
}

/// Pull `arm`: success with probability `p_arm`, using exactly one uniform draw.
pub fn draw_reward<R: Rng + ?Sized>(rng: &mut R, instance: &BanditInstance, arm: usize) -> Result<Reward> {
    let p = instance.true_prob(arm)?;
    let u: f64 = rng.random();
    Ok(if u < p { Reward::Success } else { Reward::Failure })
}

/// A fresh instance with each `p_i` drawn independently from `U[p_min, p_max]`.
pub fn sample_instance<R: Rng + ?Sized>(
    rng: &mut R,
    n_arms: usize,
    p_min: f64,
    p_max: f64,
    q: f64,
) -> Result<BanditInstance> {
    if n_arms == 0 {
        return Err(Error::NoArms);
    }
    check_unit("p_min", p_min)?;
    check_unit("p_max", p_max)?;
    check_unit("q", q)?;
    if p_min > p_max {
        return Err(Error::InvertedRange { p_min, p_max });
    }
    let width = p_max - p_min;
    let probs = (0..n_arms)
        .map(|_| {
            let u: f64 = rng.random();
            (p_min + width * u).min(p_max)
        })
        .collect();
    BanditInstance::new(probs, q)
}

/// Success/failure counts of one arm.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArmBelief {
    pub successes: u64,
    pub failures: u64,
}

impl ArmBelief {
    pub fn new(successes: u64, failures: u64) -> Self {
        Self { successes, failures }
    }

    pub fn pulls(&self) -> u64 {
        self.successes + self.failures
    }

    /// Posterior under a uniform prior: `Beta(s + 1, f + 1)`.
    pub fn posterior(&self) -> BetaParams {
        BetaParams::new(self.successes as f64 + 1.0, self.failures as f64 + 1.0)
            .expect("count-derived shapes are always >= 1")
    }

    #[must_use]
    pub fn observe(self, reward: Reward) -> Self {
        match reward {
            Reward::Success => Self {
                successes: self.successes + 1,
                ..self
            },
            Reward::Failure => Self {
                failures: self.failures + 1,
                ..self
            },
        }
    }
}

/// Beliefs over all arms. Transformed by value; nothing mutates it in place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeliefState {
    beliefs: Vec<ArmBelief>,
}

impl BeliefState {
    /// Fresh uniform-prior beliefs for `n_arms` arms.
    pub fn fresh(n_arms: usize) -> Result<Self> {
        if n_arms == 0 {
            return Err(Error::NoArms);
        }
        Ok(Self {
            beliefs: vec![ArmBelief::default(); n_arms],
        })
    }

    pub fn from_beliefs(beliefs: Vec<ArmBelief>) -> Result<Self> {
        if beliefs.is_empty() {
            return Err(Error::NoArms);
        }
        Ok(Self { beliefs })
    }

    pub fn n_arms(&self) -> usize {
        self.beliefs.len()
    }

    pub fn beliefs(&self) -> &[ArmBelief] {
        &self.beliefs
    }

    pub fn arm(&self, arm: usize) -> Result<ArmBelief> {
        self.beliefs.get(arm).copied().ok_or(Error::ArmIndex {
            index: arm,
            n_arms: self.n_arms(),
        })
    }

    /// Total decisions folded into the state so far.
    pub fn total_pulls(&self) -> u64 {
        self.beliefs.iter().map(ArmBelief::pulls).sum()
    }

    /// Returns the state with `reward` recorded against `arm`.
    pub fn update(mut self, arm: usize, reward: Reward) -> Result<Self> {
        let n_arms = self.n_arms();
        let slot = self
            .beliefs
            .get_mut(arm)
            .ok_or(Error::ArmIndex { index: arm, n_arms })?;
        *slot = slot.observe(reward);
        Ok(self)
    }
}

/// Free-function form of [`BeliefState::update`].
pub fn update_belief(state: BeliefState, arm: usize, reward: Reward) -> Result<BeliefState> {
    state.update(arm, reward)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn instance_validation() {
        assert_eq!(BanditInstance::new(vec![], 0.1), Err(Error::NoArms));
        assert!(BanditInstance::new(vec![0.5, 1.2], 0.1).is_err());
        assert!(BanditInstance::new(vec![0.5], -0.1).is_err());
        let inst = BanditInstance::new(vec![0.05, 0.1, 0.15], 0.1).unwrap();
        assert!(inst.violates(0).unwrap());
        assert!(inst.violates(1).unwrap());
        assert!(!inst.violates(2).unwrap());
        assert!(matches!(
            inst.violates(3),
            Err(Error::ArmIndex { index: 3, n_arms: 3 })
        ));
    }

    #[test]
    fn rewards_at_extreme_probabilities() {
        let inst = BanditInstance::new(vec![0.0, 1.0], 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            assert_eq!(draw_reward(&mut rng, &inst, 0).unwrap(), Reward::Failure);
            assert_eq!(draw_reward(&mut rng, &inst, 1).unwrap(), Reward::Success);
        }
        assert!(draw_reward(&mut rng, &inst, 2).is_err());
    }

    #[test]
    fn reward_rate_matches_probability() {
        let inst = BanditInstance::new(vec![0.2], 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let hits = (0..n)
            .filter(|_| draw_reward(&mut rng, &inst, 0).unwrap() == Reward::Success)
            .count();
        assert!((hits as f64 / n as f64 - 0.2).abs() < 0.005);
    }

    #[test]
    fn reward_draws_are_deterministic() {
        let inst = BanditInstance::new(vec![0.5], 0.1).unwrap();
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            (0..64)
                .map(|_| draw_reward(&mut rng, &inst, 0).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn update_increments_one_count() {
        let s = BeliefState::fresh(1).unwrap();
        let won = update_belief(s.clone(), 0, Reward::Success).unwrap();
        assert_eq!(won.arm(0).unwrap(), ArmBelief::new(1, 0));
        assert_eq!(
            won.arm(0).unwrap().posterior(),
            BetaParams::new(2.0, 1.0).unwrap()
        );
        let lost = update_belief(s, 0, Reward::Failure).unwrap();
        assert_eq!(lost.arm(0).unwrap(), ArmBelief::new(0, 1));
        assert_eq!(
            lost.arm(0).unwrap().posterior(),
            BetaParams::new(1.0, 2.0).unwrap()
        );
    }

    #[test]
    fn update_leaves_other_arms_alone() {
        let s = BeliefState::from_beliefs(vec![
            ArmBelief::new(3, 4),
            ArmBelief::new(1, 1),
            ArmBelief::new(0, 9),
        ])
        .unwrap();
        let next = s.clone().update(1, Reward::Success).unwrap();
        assert_eq!(next.arm(0), s.arm(0));
        assert_eq!(next.arm(2), s.arm(2));
        assert_eq!(next.arm(1).unwrap(), ArmBelief::new(2, 1));
        assert!(s.update(3, Reward::Success).is_err());
    }

    #[test]
    fn four_arm_instances_stay_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let inst = sample_instance(&mut rng, 4, 0.0, 0.2, 0.1).unwrap();
        assert_eq!(inst.n_arms(), 4);
        assert_eq!(inst.qos_threshold(), 0.1);
        assert!(inst.true_probs().iter().all(|p| (0.0..=0.2).contains(p)));
    }

    #[test]
    fn degenerate_range_is_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let inst = sample_instance(&mut rng, 5, 0.3, 0.3, 0.1).unwrap();
        assert!(inst.true_probs().iter().all(|&p| p == 0.3));
    }

    #[test]
    fn instance_mean_is_range_midpoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = 100_000;
        let mean = (0..n)
            .map(|_| sample_instance(&mut rng, 1, 0.0, 0.2, 0.1).unwrap().true_probs()[0])
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.1).abs() < 0.002, "{mean}");
    }

    #[test]
    fn sample_instance_validation() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            sample_instance(&mut rng, 4, 0.3, 0.2, 0.1),
            Err(Error::InvertedRange { .. })
        ));
        assert!(sample_instance(&mut rng, 4, -0.1, 0.2, 0.1).is_err());
        assert!(sample_instance(&mut rng, 4, 0.0, 1.2, 0.1).is_err());
        assert!(sample_instance(&mut rng, 4, 0.0, 0.2, 1.5).is_err());
        assert_eq!(sample_instance(&mut rng, 0, 0.0, 0.2, 0.1), Err(Error::NoArms));
    }
}
