//! One QoS-aware decision taken apart: posterior samples, underestimation and
//! violation probabilities, and the resulting odds per arm.
//!
//! ```bash
//! cargo run -p qats --example qats_decision
//! ```

use qats::{qats_select, ts_select, ArmBelief, BeliefState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), qats::Error> {
    let q = 0.1;
    // Arm 0 looks great but is barely explored; arm 1 is solidly above q;
    // arm 2 is probably below it.
    let state = BeliefState::from_beliefs(vec![
        ArmBelief::new(2, 3),
        ArmBelief::new(30, 150),
        ArmBelief::new(5, 95),
    ])?;

    for seed in 0..3 {
        // Same seed for both policies: identical samples, different choice rule.
        let ts = ts_select(&mut ChaCha8Rng::seed_from_u64(seed), &state, q)?;
        let qats = qats_select(&mut ChaCha8Rng::seed_from_u64(seed), &state, q)?;

        println!("seed {seed}");
        println!(
            "  {:>4} {:>8} {:>10} {:>10} {:>12}",
            "arm", "p_hat", "p_u", "p_v", "odds"
        );
        for i in 0..state.n_arms() {
            println!(
                "  {i:>4} {:>8.4} {:>10.4} {:>10.3e} {:>12.4e}",
                qats.p_hat[i], qats.p_u[i], qats.p_v[i], qats.odds[i]
            );
        }
        println!(
            "  ts picks arm {} (confidence {:.4}), qats picks arm {} (confidence {:.4})\n",
            ts.chosen,
            ts.chosen_confidence(),
            qats.chosen,
            qats.chosen_confidence()
        );
    }
    Ok(())
}
