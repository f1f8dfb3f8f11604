//! Paired runs: both policies face the same bandit instance and the same
//! random streams, so per-run differences isolate the selection rule.
//!
//! ```bash
//! cargo run --release -p qats --example paired_comparison
//! ```

use qats::{run_experiment_with, ExperimentConfig, PolicyKind, RunOptions, RunTrace};

fn violations(trace: &RunTrace) -> usize {
    let inst = &trace.instance;
    trace
        .steps
        .iter()
        .filter(|s| inst.violates(s.selection.chosen).unwrap_or(false))
        .count()
}

fn main() -> Result<(), qats::Error> {
    let config = ExperimentConfig {
        n_runs: 100,
        paired_streams: true,
        master_seed: 7,
        ..ExperimentConfig::default()
    };
    let out = run_experiment_with(
        &config,
        &RunOptions {
            threads: 0,
            keep_traces: true,
        },
    )?;

    let (ts, qats): (Vec<&RunTrace>, Vec<&RunTrace>) =
        out.traces.iter().partition(|t| t.policy == PolicyKind::Ts);

    let mut qats_better = 0;
    let mut ties = 0;
    let mut total_diff = 0i64;
    for (a, b) in ts.iter().zip(&qats) {
        assert_eq!(a.instance, b.instance);
        let (vt, vq) = (violations(a), violations(b));
        total_diff += vt as i64 - vq as i64;
        match vq.cmp(&vt) {
            std::cmp::Ordering::Less => qats_better += 1,
            std::cmp::Ordering::Equal => ties += 1,
            std::cmp::Ordering::Greater => {}
        }
    }
    let n = ts.len();
    println!("{n} paired runs of {} decisions", config.horizon);
    println!("qats chose fewer violating arms in {qats_better} runs, tied in {ties}");
    println!(
        "mean violating decisions saved per run: {:.1}",
        total_diff as f64 / n as f64
    );
    Ok(())
}
