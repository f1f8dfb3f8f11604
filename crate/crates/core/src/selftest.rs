//! In-process numerical health check: the Beta CDF against the binomial-sum
//! oracle on a dense grid, and probability-integral-transform uniformity of
//! sampled values pushed through the CDF.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::beta::{beta_cdf, beta_sample, BetaParams};
use crate::error::Result;
use crate::oracle::{beta_cdf_oracle_integer, ks_uniform_statistic};

pub const CDF_TOLERANCE: f64 = 1e-10;
pub const KS_THRESHOLD: f64 = 0.01;
pub const MAX_INTEGER_SHAPE: u32 = 64;
pub const GRID_POINTS: usize = 1001;
pub const PIT_DRAWS: usize = 100_000;
pub const PIT_SHAPES: [(f64, f64); 3] = [(1.0, 1.0), (3.0, 2.0), (20.0, 5.0)];

const PIT_SEED: u64 = 0x5EED_B37A;

#[derive(Debug, Clone, PartialEq)]
pub struct CdfCheck {
    pub max_error: f64,
    /// `(x, a, b)` at which `max_error` occurred.
    pub worst: (f64, u32, u32),
    /// Points where the CDF failed outright or returned NaN.
    pub faults: usize,
}

impl CdfCheck {
    pub fn passed(&self) -> bool {
        self.faults == 0 && self.max_error <= CDF_TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PitCheck {
    pub params: (f64, f64),
    pub ks: f64,
}

impl PitCheck {
    pub fn passed(&self) -> bool {
        self.ks < KS_THRESHOLD
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub cdf: CdfCheck,
    pub pit: Vec<PitCheck>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.cdf.passed() && self.pit.iter().all(PitCheck::passed)
    }
}

/// Run both checks against the library's own CDF.
pub fn run_selftest() -> SelftestReport {
    run_selftest_with(beta_cdf)
}

/// Run both checks against an arbitrary CDF implementation.
pub fn run_selftest_with<F>(cdf: F) -> SelftestReport
where
    F: Fn(f64, BetaParams) -> Result<f64> + Sync,
{
    SelftestReport {
        cdf: check_cdf_grid(&cdf),
        pit: PIT_SHAPES.iter().map(|&(a, b)| check_pit(&cdf, a, b)).collect(),
    }
}

/// Max `|cdf - oracle|` over `a, b in 1..=64` and a 1001-point grid on `[0, 1]`.
pub fn check_cdf_grid<F>(cdf: &F) -> CdfCheck
where
    F: Fn(f64, BetaParams) -> Result<f64> + Sync,
{
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|i| i as f64 / (GRID_POINTS - 1) as f64)
        .collect();
    (1..=MAX_INTEGER_SHAPE)
        .into_par_iter()
        .map(|a| {
            let mut local = CdfCheck {
                max_error: 0.0,
                worst: (0.0, a, 1),
                faults: 0,
            };
            for b in 1..=MAX_INTEGER_SHAPE {
                let params = BetaParams::new(a as f64, b as f64).expect("integer shapes are valid");
                for &x in &grid {
                    let want = beta_cdf_oracle_integer(x, a, b).expect("grid points are in range");
                    match cdf(x, params) {
                        Ok(got) if got.is_finite() => {
                            let err = (got - want).abs();
                            if err > local.max_error {
                                local.max_error = err;
                                local.worst = (x, a, b);
                            }
                        }
                        _ => local.faults += 1,
                    }
                }
            }
            local
        })
        .reduce_with(|l, r| CdfCheck {
            faults: l.faults + r.faults,
            ..if r.max_error > l.max_error {
                r.clone()
            } else {
                l.clone()
            }
        })
        .expect("shape range is nonempty")
}

/// KS distance from uniform of `cdf(X)` for `PIT_DRAWS` draws `X ~ Beta(a, b)`.
pub fn check_pit<F>(cdf: &F, a: f64, b: f64) -> PitCheck
where
    F: Fn(f64, BetaParams) -> Result<f64>,
{
    let params = BetaParams::new(a, b).expect("PIT shapes are valid");
    let mut rng = ChaCha8Rng::seed_from_u64(PIT_SEED);
    let mut values: Vec<f64> = (0..PIT_DRAWS)
        .map(|_| cdf(beta_sample(&mut rng, params), params).unwrap_or(f64::NAN))
        .collect();
    let ks = if values.iter().any(|v| !v.is_finite()) {
        f64::INFINITY
    } else {
        ks_uniform_statistic(&mut values)
    };
    PitCheck { params: (a, b), ks }
}
