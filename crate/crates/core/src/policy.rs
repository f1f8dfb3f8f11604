//! Arm-selection policies: classic Thompson sampling (TS) and QoS-aware
//! Thompson sampling (QATS).
//!
//! Both draw one posterior sample `p_hat_i` per arm. TS plays the largest
//! sample. QATS scores each arm by the odds `p_u / p_v`, where
//! `p_u = P(X > p_hat_i)` is the chance the sample underestimates the arm and
//! `p_v = P(X <= q)` is the chance the arm violates the QoS threshold `q`,
//! and plays the highest score.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bandit::{ArmBelief, BeliefState};
use crate::beta::beta_sample;
use crate::error::{check_unit, Error, Result};

/// Floor applied to `p_v` before dividing.
pub const ODDS_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Ts,
    Qats,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 2] = [PolicyKind::Ts, PolicyKind::Qats];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Ts => "ts",
            PolicyKind::Qats => "qats",
        }
    }

    /// Sample one estimate per arm and choose an arm. `q` feeds the QATS
    /// criterion and, for TS, only the diagnostic fields.
    pub fn select<R: Rng + ?Sized>(self, rng: &mut R, state: &BeliefState, q: f64) -> Result<SelectionTrace> {
        match self {
            PolicyKind::Ts => ts_select(rng, state, q),
            PolicyKind::Qats => qats_select(rng, state, q),
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ts" => Ok(PolicyKind::Ts),
            "qats" => Ok(PolicyKind::Qats),
            other => Err(Error::Config(format!(
                "unknown policy `{other}` (expected ts or qats)"
            ))),
        }
    }
}

/// Everything a policy looked at for one decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrace {
    pub p_hat: Vec<f64>,
    pub p_v: Vec<f64>,
    pub p_u: Vec<f64>,
    pub odds: Vec<f64>,
    pub chosen: usize,
}

impl SelectionTrace {
    /// Confidence that the chosen arm satisfies QoS: `1 - p_v`.
    pub fn chosen_confidence(&self) -> f64 {
        1.0 - self.p_v[self.chosen]
    }
}

/// `p_v = P(X <= q)` under the arm's posterior.
pub fn violation_prob(belief: ArmBelief, q: f64) -> Result<f64> {
    let q = check_unit("q", q)?;
    belief.posterior().cdf(q)
}

/// `p_u = P(X > p_hat) = 1 - P(X <= p_hat)` under the arm's posterior.
pub fn underestimation_prob(belief: ArmBelief, p_hat: f64) -> Result<f64> {
    let p_hat = check_unit("p_hat", p_hat)?;
    Ok(1.0 - belief.posterior().cdf(p_hat)?)
}

/// QATS criterion `p_u / max(p_v, ODDS_EPSILON)`.
pub fn odds(p_u: f64, p_v: f64) -> f64 {
    p_u / p_v.max(ODDS_EPSILON)
}

/// Classic Thompson sampling: play the arm with the largest posterior sample.
pub fn ts_select<R: Rng + ?Sized>(rng: &mut R, state: &BeliefState, q: f64) -> Result<SelectionTrace> {
    let p_hat = sample_estimates(rng, state);
    select_from_samples(rng, PolicyKind::Ts, state, q, p_hat)
}

/// QoS-aware Thompson sampling: play the arm with the largest odds `p_u / p_v`.
pub fn qats_select<R: Rng + ?Sized>(rng: &mut R, state: &BeliefState, q: f64) -> Result<SelectionTrace> {
    let p_hat = sample_estimates(rng, state);
    select_from_samples(rng, PolicyKind::Qats, state, q, p_hat)
}

/// One posterior draw per arm, in arm order.
pub fn sample_estimates<R: Rng + ?Sized>(rng: &mut R, state: &BeliefState) -> Vec<f64> {
    state
        .beliefs()
        .iter()
        .map(|b| beta_sample(rng, b.posterior()))
        .collect()
}

/// Decide from already-drawn estimates. `rng` is consumed only to break ties.
pub fn select_from_samples<R: Rng + ?Sized>(
    rng: &mut R,
    policy: PolicyKind,
    state: &BeliefState,
    q: f64,
    p_hat: Vec<f64>,
) -> Result<SelectionTrace> {
    if p_hat.len() != state.n_arms() {
        return Err(Error::Config(format!(
            "{} estimates for {} arms",
            p_hat.len(),
            state.n_arms()
        )));
    }
    let q = check_unit("q", q)?;
    let n = state.n_arms();
    let mut p_v = Vec::with_capacity(n);
    let mut p_u = Vec::with_capacity(n);
    let mut scores = Vec::with_capacity(n);
    for (belief, &estimate) in state.beliefs().iter().zip(&p_hat) {
        let violation = violation_prob(*belief, q)?;
        let under = underestimation_prob(*belief, estimate)?;
        p_v.push(violation);
        p_u.push(under);
        scores.push(odds(under, violation));
    }
    let chosen = match policy {
        PolicyKind::Ts => argmax_random_ties(rng, &p_hat),
        PolicyKind::Qats => argmax_random_ties(rng, &scores),
    };
    Ok(SelectionTrace {
        p_hat,
        p_v,
        p_u,
        odds: scores,
        chosen,
    })
}

/// Index of the maximum, with ties resolved uniformly at random
/// (reservoir style, so no randomness is used when the maximum is unique).
fn argmax_random_ties<R: Rng + ?Sized>(rng: &mut R, values: &[f64]) -> usize {
    let mut best = 0;
    let mut ties = 1u32;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
            ties = 1;
        } else if v == values[best] {
            ties += 1;
            if rng.random_range(0..ties) == 0 {
                best = i;
            }
        }
    }
    best
}
