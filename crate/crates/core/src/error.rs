use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("non-finite value {0}")]
    NonFiniteValue(f64),
    #[error("negative weight {0}")]
    NegativeWeight(f64),
    #[error("total weight is zero")]
    ZeroTotalWeight,
    #[error("weights sum to {0}, expected 1")]
    WeightSum(f64),
    #[error("{name} out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("invalid moment order {0} (need p >= 1)")]
    InvalidOrder(f64),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid generator set: {0}")]
    InvalidGeneratorSet(String),
    #[error("operation requires {expected} generator set")]
    WrongMode { expected: &'static str },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid mixture: {0}")]
    InvalidMixture(String),
    #[error("bad solver options: {0}")]
    BadOptions(String),
}

impl Error {
    pub(crate) fn out_of_range(name: &'static str, value: impl Into<f64>) -> Self {
        Error::OutOfRange {
            name,
            value: value.into(),
        }
    }
}
