//! The reference comparison: four arms with p ~ U[0, 0.2], q = 0.1,
//! 1000 decisions, 350 runs per policy. Prints both curves at a few steps and
//! writes the results CSV (plus metadata sidecar) to the given path.
//!
//! ```bash
//! cargo run --release -p qats --example reproduce_experiment -- target/reference.csv
//! ```

use std::path::PathBuf;
use std::time::Instant;

use qats::output::OutputBundle;
use qats::{run_experiment, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("qats-reference.csv"));

    let config = ExperimentConfig::default();
    let started = Instant::now();
    let result = run_experiment(&config)?;
    let elapsed = started.elapsed();

    println!(
        "{:>6} {:>6} {:>12} {:>12}",
        "policy", "step", "confidence", "cum. risk"
    );
    for series in &result.series {
        for step in [1, 10, 100, 250, 500, 1000] {
            let m = &series.steps[step - 1];
            println!(
                "{:>6} {:>6} {:>12.4} {:>12.2}",
                series.policy, m.step, m.mean_qos_confidence, m.cum_violation_risk
            );
        }
    }

    OutputBundle {
        config: &config,
        series: &result.series,
        traces: None,
        wall_clock: elapsed,
    }
    .write(&out, None)?;
    println!("\nwrote {} ({:.1}s)", out.display(), elapsed.as_secs_f64());
    Ok(())
}
