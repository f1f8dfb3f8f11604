//! Beta distribution numerics: the CDF (regularized incomplete beta function)
//! and random sampling.
//!
//! The CDF uses a modified-Lentz continued fraction with the usual symmetry
//! switch `I_x(a, b) = 1 - I_{1-x}(b, a)` once `x` passes `(a+1)/(a+b+2)`.
//! Sampling draws two Gamma variates (Marsaglia-Tsang) and returns
//! `G(a) / (G(a) + G(b))`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};

/// Lanczos approximation parameters (g = 7, n = 9).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const CF_MAX_ITER: usize = 10_000;
const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;

/// Shape parameters of a Beta distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaParams {
    alpha: f64,
    beta: f64,
}

impl BetaParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let valid = |v: f64| v.is_finite() && v > 0.0;
        if valid(alpha) && valid(beta) {
            Ok(Self { alpha, beta })
        } else {
            Err(Error::InvalidShape { alpha, beta })
        }
    }

    /// Beta(1, 1), the uniform prior.
    pub fn uniform() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    /// Shorthand for [`beta_cdf`] with these parameters.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        beta_cdf(x, *self)
    }

    /// Shorthand for [`beta_sample`] with these parameters.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        beta_sample(rng, *self)
    }
}

/// Natural log of the gamma function for `z > 0`.
pub fn ln_gamma(z: f64) -> f64 {
    if z < 0.5 {
        // Reflection: Γ(z) Γ(1 - z) = π / sin(πz)
        let pi = std::f64::consts::PI;
        return (pi / (pi * z).sin()).ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `P(X <= x)` for `X ~ Beta(alpha, beta)`, i.e. the regularized incomplete
/// beta function `I_x(alpha, beta)`.
///
/// Exactly 0 at `x = 0` and exactly 1 at `x = 1`. Fails if `x` is outside
/// `[0, 1]`.
pub fn beta_cdf(x: f64, params: BetaParams) -> Result<f64> {
    let x = check_unit("x", x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let (a, b) = (params.alpha, params.beta);
    let ln_front = a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b);
    let front = ln_front.exp();

    let value = if x < (a + 1.0) / (a + b + 2.0) {
        front * continued_fraction(a, b, x) / a
    } else {
        1.0 - front * continued_fraction(b, a, 1.0 - x) / b
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Continued fraction for `I_x(a, b)` evaluated with the modified Lentz method.
fn continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let guard = |v: f64| if v.abs() < CF_TINY { CF_TINY } else { v };

    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - qab * x / qap);
    let mut h = d;

    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let even = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / guard(1.0 + even * d);
        c = guard(1.0 + even / c);
        h *= d * c;

        let odd = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / guard(1.0 + odd * d);
        c = guard(1.0 + odd / c);
        let delta = d * c;
        h *= delta;

        if (delta - 1.0).abs() <= CF_EPS {
            break;
        }
    }
    h
}

/// One draw from `Beta(alpha, beta)`.
///
/// Deterministic for a given stream state. The result is strictly inside
/// `(0, 1)`: an exact 0 or 1 from floating underflow is moved to the nearest
/// interior value.
pub fn beta_sample<R: Rng + ?Sized>(rng: &mut R, params: BetaParams) -> f64 {
    let x = gamma_sample(rng, params.alpha);
    let y = gamma_sample(rng, params.beta);
    let total = x + y;
    let p = if total > 0.0 { x / total } else { 0.5 };
    clamp_interior(p)
}

fn clamp_interior(p: f64) -> f64 {
    const LOWEST: f64 = 5e-324; // smallest positive subnormal
    const HIGHEST: f64 = 1.0 - f64::EPSILON / 2.0;
    if p <= 0.0 {
        LOWEST
    } else if p >= 1.0 {
        HIGHEST
    } else {
        p
    }
}

/// Gamma(shape, 1) draw via Marsaglia-Tsang squeeze/rejection. Shapes below
/// one are boosted: `G(a) = G(a + 1) * U^(1/a)`.
fn gamma_sample<R: Rng + ?Sized>(rng: &mut R, shape: f64) -> f64 {
    if shape < 1.0 {
        let u: f64 = rng.random();
        return gamma_sample(rng, shape + 1.0) * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let z: f64 = StandardNormal.sample(rng);
        let v = 1.0 + c * z;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u: f64 = rng.random();
        let z2 = z * z;
        if u < 1.0 - 0.0331 * z2 * z2 || u.ln() < 0.5 * z2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}
