//! Bernoulli multi-armed bandits with classic Thompson sampling and
//! QoS-aware Thompson sampling, plus a reproducible experiment harness.
//!
//! QoS-aware Thompson sampling targets a different goal from regret
//! minimisation: given a requirement that an arm's success probability must
//! exceed a threshold `q`, it tries to settle quickly on an arm that is
//! confidently above `q`. Each arm's posterior sample `p_hat` is scored by
//! the odds `P(X > p_hat) / P(X <= q)`, and the arm with the best odds is
//! played.
//!
//! ```
//! use qats::{BeliefState, PolicyKind, Reward};
//! use rand::SeedableRng;
//!
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let beliefs = BeliefState::fresh(3)?;
//! let pick = PolicyKind::Qats.select(&mut rng, &beliefs, 0.1)?;
//! let beliefs = beliefs.update(pick.chosen, Reward::Success)?;
//! assert_eq!(beliefs.total_pulls(), 1);
//! # Ok::<(), qats::Error>(())
//! ```
//!
//! See `examples/` for runnable walkthroughs of each piece.

pub mod bandit;
pub mod beta;
pub mod error;
pub mod experiment;
pub mod oracle;
pub mod output;
pub mod policy;
pub mod selftest;

pub use bandit::{
    draw_reward, sample_instance, update_belief, ArmBelief, BanditInstance, BeliefState, Reward,
};
pub use beta::{beta_cdf, beta_sample, BetaParams};
pub use error::{Error, Result};
pub use experiment::{
    aggregate_metrics, run_episode, run_experiment, run_experiment_with, ExperimentConfig, ExperimentOutput,
    RunOptions, RunTrace, StepMetrics, StepRecord, StepSeries,
};
pub use policy::{
    odds, qats_select, ts_select, underestimation_prob, violation_prob, PolicyKind, SelectionTrace,
    ODDS_EPSILON,
};
