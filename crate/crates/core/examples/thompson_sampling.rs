//! Classic Thompson sampling on one fixed four-armed bandit.
//!
//! ```bash
//! cargo run -p qats --example thompson_sampling
//! ```

use qats::{draw_reward, ts_select, BanditInstance, BeliefState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), qats::Error> {
    let instance = BanditInstance::new(vec![0.04, 0.09, 0.13, 0.18], 0.1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2016);
    let mut beliefs = BeliefState::fresh(instance.n_arms())?;

    for step in 1..=2000 {
        let pick = ts_select(&mut rng, &beliefs, instance.qos_threshold())?;
        let reward = draw_reward(&mut rng, &instance, pick.chosen)?;
        beliefs = beliefs.update(pick.chosen, reward)?;

        if step % 500 == 0 {
            let pulls: Vec<u64> = beliefs.beliefs().iter().map(|b| b.pulls()).collect();
            println!("step {step:>4}: pulls per arm {pulls:?}");
        }
    }

    println!();
    for (i, (belief, p)) in beliefs.beliefs().iter().zip(instance.true_probs()).enumerate() {
        let post = belief.posterior();
        println!(
            "arm {i}: true p {p:.2}, s = {:>4}, f = {:>4}, posterior mean {:.3}",
            belief.successes,
            belief.failures,
            post.mean()
        );
    }
    Ok(())
}
