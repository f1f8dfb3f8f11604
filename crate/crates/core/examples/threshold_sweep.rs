//! How the gap between the policies moves with the QoS threshold.
//!
//! ```bash
//! cargo run --release -p qats --example threshold_sweep
//! ```

use qats::{run_experiment, ExperimentConfig, PolicyKind};

fn main() -> Result<(), qats::Error> {
    println!(
        "{:>5} {:>10} {:>10} {:>10} {:>10}",
        "q", "conf ts", "conf qats", "risk ts", "risk qats"
    );
    for q in [0.0, 0.05, 0.1, 0.15, 0.2] {
        let config = ExperimentConfig {
            q,
            n_runs: 100,
            ..ExperimentConfig::default()
        };
        let out = run_experiment(&config)?;
        let ts = out.series_for(PolicyKind::Ts).expect("configured").last();
        let qats = out.series_for(PolicyKind::Qats).expect("configured").last();
        println!(
            "{q:>5} {:>10.4} {:>10.4} {:>10.1} {:>10.1}",
            ts.mean_qos_confidence, qats.mean_qos_confidence, ts.cum_violation_risk, qats.cum_violation_risk
        );
    }
    Ok(())
}
