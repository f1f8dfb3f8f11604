//! Monte-Carlo comparison of policies on freshly sampled bandit instances.
//!
//! Each `(policy, run)` pair gets its own ChaCha8 stream, derived from the
//! master seed by stream id, so results do not depend on how runs are
//! scheduled across threads. Per-run outcomes are collected in run order and
//! folded sequentially, which keeps the floating-point sums bit-identical for
//! any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandit::{draw_reward, sample_instance, BanditInstance, BeliefState, Reward};
use crate::error::{check_unit, Error, Result};
use crate::policy::{PolicyKind, SelectionTrace};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_arms: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub q: f64,
    pub horizon: usize,
    pub n_runs: usize,
    pub master_seed: u64,
    pub policies: Vec<PolicyKind>,
    /// Share instance and random streams between policies within a run.
    pub paired_streams: bool,
}

impl Default for ExperimentConfig {
    /// Four arms with `p ~ U[0, 0.2]`, `q = 0.1`, 1000 decisions, 350 runs,
    /// both policies.
    fn default() -> Self {
        Self {
            n_arms: 4,
            p_min: 0.0,
            p_max: 0.2,
            q: 0.1,
            horizon: 1000,
            n_runs: 350,
            master_seed: 42,
            policies: PolicyKind::ALL.to_vec(),
            paired_streams: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_arms == 0 {
            return Err(Error::NoArms);
        }
        check_unit("p_min", self.p_min)?;
        check_unit("p_max", self.p_max)?;
        check_unit("q", self.q)?;
        if self.p_min > self.p_max {
            return Err(Error::InvertedRange {
                p_min: self.p_min,
                p_max: self.p_max,
            });
        }
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if self.n_runs == 0 {
            return Err(Error::Config("run count must be at least 1".into()));
        }
        if self.policies.is_empty() {
            return Err(Error::Config("at least one policy is required".into()));
        }
        let mut seen = self.policies.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.policies.len() {
            return Err(Error::Config("policies must not repeat".into()));
        }
        Ok(())
    }
}

/// Execution knobs that do not affect results.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; 0 picks automatically.
    pub threads: usize,
    /// Keep every [`RunTrace`] in the output.
    pub keep_traces: bool,
}

/// Aggregates at one decision step (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepMetrics {
    pub step: usize,
    /// Mean over runs of `1 - p_v` for the chosen arm, from the pre-update posterior.
    pub mean_qos_confidence: f64,
    /// Fraction of runs whose chosen arm truly violates (`p <= q`).
    pub mean_step_violation: f64,
    /// Running sum of `mean_step_violation` up to this step.
    pub cum_violation_risk: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepSeries {
    pub policy: PolicyKind,
    pub steps: Vec<StepMetrics>,
}

impl StepSeries {
    pub fn last(&self) -> &StepMetrics {
        self.steps.last().expect("series always covers at least one step")
    }
}

/// One decision inside an episode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub reward: Reward,
    #[serde(flatten)]
    pub selection: SelectionTrace,
}

/// Full record of one episode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunTrace {
    pub run: usize,
    pub policy: PolicyKind,
    pub instance: BanditInstance,
    pub steps: Vec<StepRecord>,
    pub final_beliefs: BeliefState,
}

impl RunTrace {
    fn confidences(&self) -> impl Iterator<Item = f64> + '_ {
        self.steps.iter().map(|s| s.selection.chosen_confidence())
    }

    fn violations(&self) -> impl Iterator<Item = bool> + '_ {
        let inst = &self.instance;
        self.steps
            .iter()
            .map(move |s| inst.true_probs()[s.selection.chosen] <= inst.qos_threshold())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    /// One series per configured policy, in configuration order.
    pub series: Vec<StepSeries>,
    /// Populated only when [`RunOptions::keep_traces`] is set; ordered by
    /// policy, then run.
    pub traces: Vec<RunTrace>,
}

impl ExperimentOutput {
    pub fn series_for(&self, policy: PolicyKind) -> Option<&StepSeries> {
        self.series.iter().find(|s| s.policy == policy)
    }
}

/// Play `horizon` decisions with `policy` from fresh beliefs:
/// select, pull, update.
pub fn run_episode<R: Rng + ?Sized>(
    rng: &mut R,
    instance: &BanditInstance,
    policy: PolicyKind,
    horizon: usize,
) -> Result<RunTrace> {
    if horizon == 0 {
        return Err(Error::Config("horizon must be at least 1".into()));
    }
    let q = instance.qos_threshold();
    let mut beliefs = BeliefState::fresh(instance.n_arms())?;
    let mut steps = Vec::with_capacity(horizon);
    for step in 1..=horizon {
        let selection = policy.select(rng, &beliefs, q)?;
        let reward = draw_reward(rng, instance, selection.chosen)?;
        beliefs = beliefs.update(selection.chosen, reward)?;
        steps.push(StepRecord {
            step,
            reward,
            selection,
        });
    }
    Ok(RunTrace {
        run: 0,
        policy,
        instance: instance.clone(),
        steps,
        final_beliefs: beliefs,
    })
}

/// Per-step sums, folded one run at a time.
#[derive(Debug, Clone)]
struct SeriesAccumulator {
    confidence_sum: Vec<f64>,
    violation_count: Vec<u64>,
    runs: u64,
}

impl SeriesAccumulator {
    fn new(horizon: usize) -> Self {
        Self {
            confidence_sum: vec![0.0; horizon],
            violation_count: vec![0; horizon],
            runs: 0,
        }
    }

    fn add_trace(&mut self, trace: &RunTrace) -> Result<()> {
        let horizon = self.confidence_sum.len();
        if trace.steps.len() != horizon {
            return Err(Error::HorizonMismatch {
                expected: horizon,
                found: trace.steps.len(),
            });
        }
        for (sum, c) in self.confidence_sum.iter_mut().zip(trace.confidences()) {
            *sum += c;
        }
        for (count, v) in self.violation_count.iter_mut().zip(trace.violations()) {
            *count += v as u64;
        }
        self.runs += 1;
        Ok(())
    }

    fn finish(self, policy: PolicyKind) -> StepSeries {
        let runs = self.runs as f64;
        let mut cumulative = 0.0;
        let steps = self
            .confidence_sum
            .iter()
            .zip(&self.violation_count)
            .enumerate()
            .map(|(i, (&conf, &count))| {
                let mean_step_violation = count as f64 / runs;
                cumulative += mean_step_violation;
                StepMetrics {
                    step: i + 1,
                    mean_qos_confidence: conf / runs,
                    mean_step_violation,
                    cum_violation_risk: cumulative,
                }
            })
            .collect();
        StepSeries { policy, steps }
    }
}

/// Fold complete traces of one policy into per-step means.
pub fn aggregate_metrics(traces: &[RunTrace], q: f64) -> Result<StepSeries> {
    let first = traces
        .first()
        .ok_or_else(|| Error::Config("no traces to aggregate".into()))?;
    let horizon = first.steps.len();
    let mut acc = SeriesAccumulator::new(horizon);
    for trace in traces {
        if trace.policy != first.policy {
            return Err(Error::Config("traces mix several policies".into()));
        }
        let found = trace.instance.qos_threshold();
        if found != q {
            return Err(Error::ThresholdMismatch { expected: q, found });
        }
        acc.add_trace(trace)?;
    }
    Ok(acc.finish(first.policy))
}

#[derive(Debug, Clone, Copy)]
#[repr(u64)]
enum StreamPurpose {
    Instance = 0,
    Episode = 1,
}

/// Independent stream for one `(slot, run, purpose)` under `master_seed`.
/// `slot` is 0 for paired runs, otherwise one per policy.
fn child_stream(master_seed: u64, slot: u64, run: usize, purpose: StreamPurpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((run as u64) << 8) | (slot << 4) | purpose as u64);
    rng
}

fn stream_slot(policy: PolicyKind, paired: bool) -> u64 {
    match (paired, policy) {
        (true, _) => 0,
        (false, PolicyKind::Ts) => 1,
        (false, PolicyKind::Qats) => 2,
    }
}

/// Run with automatic threading and no retained traces.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    run_experiment_with(config, &RunOptions::default())
}

pub fn run_experiment_with(config: &ExperimentConfig, options: &RunOptions) -> Result<ExperimentOutput> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;

    let mut series = Vec::with_capacity(config.policies.len());
    let mut traces = Vec::new();
    for &policy in &config.policies {
        let slot = stream_slot(policy, config.paired_streams);
        let runs: Vec<RunTrace> = pool.install(|| {
            (0..config.n_runs)
                .into_par_iter()
                .map(|run| {
                    let mut inst_rng = child_stream(config.master_seed, slot, run, StreamPurpose::Instance);
                    let instance =
                        sample_instance(&mut inst_rng, config.n_arms, config.p_min, config.p_max, config.q)?;
                    let mut rng = child_stream(config.master_seed, slot, run, StreamPurpose::Episode);
                    let mut trace = run_episode(&mut rng, &instance, policy, config.horizon)?;
                    trace.run = run;
                    Ok(trace)
                })
                .collect::<Result<_>>()
        })?;

        let mut acc = SeriesAccumulator::new(config.horizon);
        for trace in &runs {
            acc.add_trace(trace)?;
        }
        series.push(acc.finish(policy));
        if options.keep_traces {
            traces.extend(runs);
        }
    }
    Ok(ExperimentOutput { series, traces })
}
