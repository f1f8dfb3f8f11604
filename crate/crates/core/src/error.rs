use thiserror::Error;

/// Errors raised by the library surface.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Beta shape parameters (alpha = {alpha}, beta = {beta}); both must be finite and > 0")]
    InvalidShape { alpha: f64, beta: f64 },

    #[error("{name} = {value} is outside [0, 1]")]
    OutOfUnitInterval { name: &'static str, value: f64 },

    #[error("arm index {index} out of range for {n_arms} arm(s)")]
    ArmIndex { index: usize, n_arms: usize },

    #[error("a bandit needs at least one arm")]
    NoArms,

    #[error("probability range is inverted: p_min = {p_min} > p_max = {p_max}")]
    InvertedRange { p_min: f64, p_max: f64 },

    #[error("trace horizon mismatch: expected {expected} steps, found {found}")]
    HorizonMismatch { expected: usize, found: usize },

    #[error("trace QoS threshold mismatch: expected {expected}, found {found}")]
    ThresholdMismatch { expected: f64, found: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfUnitInterval { name, value })
    }
}
