//! Reference computations used to cross-check the fast numerics.
//!
//! Nothing here shares code with [`crate::beta`]: the binomial tail sum below
//! builds its log-coefficients from plain sums of `ln k` rather than the
//! log-gamma helper.

use crate::error::{check_unit, Error, Result};

/// `I_x(a, b)` for integer shapes as the binomial tail
/// `sum_{j=a}^{a+b-1} C(a+b-1, j) x^j (1-x)^(a+b-1-j)`, summed directly.
pub fn beta_cdf_oracle_integer(x: f64, a: u32, b: u32) -> Result<f64> {
    let x = check_unit("x", x)?;
    if a == 0 || b == 0 {
        return Err(Error::InvalidShape {
            alpha: a as f64,
            beta: b as f64,
        });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }

    let n = (a + b - 1) as usize;
    // ln_fact[k] = ln k!
    let mut ln_fact = Vec::with_capacity(n + 1);
    ln_fact.push(0.0_f64);
    for k in 1..=n {
        ln_fact.push(ln_fact[k - 1] + (k as f64).ln());
    }
    let ln_x = x.ln();
    let ln_1mx = (-x).ln_1p();

    let total: f64 = (a as usize..=n)
        .map(|j| {
            let ln_choose = ln_fact[n] - ln_fact[j] - ln_fact[n - j];
            (ln_choose + j as f64 * ln_x + (n - j) as f64 * ln_1mx).exp()
        })
        .sum();
    Ok(total.min(1.0))
}

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// `values` and Uniform(0, 1). Sorts `values` in place.
pub fn ks_uniform_statistic(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    values
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let u = u.clamp(0.0, 1.0);
            let above = (i + 1) as f64 / n - u;
            let below = u - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_closed_forms() {
        assert_eq!(beta_cdf_oracle_integer(0.5, 1, 1).unwrap(), 0.5);
        assert!((beta_cdf_oracle_integer(0.3, 2, 1).unwrap() - 0.09).abs() < 1e-15);
        // I_x(1, b) = 1 - (1 - x)^b
        let got = beta_cdf_oracle_integer(0.2, 1, 5).unwrap();
        assert!((got - (1.0 - 0.8_f64.powi(5))).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(beta_cdf_oracle_integer(0.5, 0, 3).is_err());
        assert!(beta_cdf_oracle_integer(1.5, 1, 3).is_err());
    }

    #[test]
    fn ks_of_perfect_grid_is_half_step() {
        let n = 1000;
        let mut v: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_uniform_statistic(&mut v);
        assert!((d - 0.5 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn ks_detects_skew() {
        let mut v: Vec<f64> = (0..1000).map(|i| (i as f64 / 1000.0).powi(2)).collect();
        assert!(ks_uniform_statistic(&mut v) > 0.2);
    }
}
