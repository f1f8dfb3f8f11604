//! Beta CDF against the binomial-sum oracle, and sampler moments.
//!
//! ```bash
//! cargo run -p qats --example beta_numerics
//! ```

use qats::oracle::beta_cdf_oracle_integer;
use qats::{beta_cdf, BetaParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), qats::Error> {
    println!(
        "{:>6} {:>4} {:>4} {:>22} {:>22} {:>10}",
        "x", "a", "b", "continued fraction", "binomial sum", "|diff|"
    );
    for &(x, a, b) in &[
        (0.1, 1, 1),
        (0.3, 2, 1),
        (0.5, 3, 1),
        (0.1, 10, 2),
        (0.1, 2, 10),
        (0.42, 37, 51),
    ] {
        let fast = beta_cdf(x, BetaParams::new(a as f64, b as f64)?)?;
        let slow = beta_cdf_oracle_integer(x, a, b)?;
        println!(
            "{x:>6} {a:>4} {b:>4} {fast:>22.17} {slow:>22.17} {:>10.2e}",
            (fast - slow).abs()
        );
    }

    // A long-run posterior is far outside what the oracle grid covers.
    let long_run = BetaParams::new(101.0, 901.0)?;
    println!("\nBeta(101, 901): P(X <= 0.1) = {:.6}", long_run.cdf(0.1)?);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!("\n{:>12} {:>10} {:>10}", "params", "mean", "sample");
    for (a, b) in [(1.0, 1.0), (5.0, 1.0), (2.0, 30.0), (0.5, 0.5)] {
        let p = BetaParams::new(a, b)?;
        let n = 200_000;
        let sample_mean = (0..n).map(|_| p.sample(&mut rng)).sum::<f64>() / n as f64;
        println!(
            "{:>12} {:>10.5} {:>10.5}",
            format!("({a}, {b})"),
            p.mean(),
            sample_mean
        );
    }
    Ok(())
}
