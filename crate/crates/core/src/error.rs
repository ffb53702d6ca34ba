use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A generic subgroup pairs to zero with a compass character.
    #[error("precondition violated: subgroup pairs to zero with character {character}")]
    NonGenericSubgroup { character: String },

    #[error("resource exhausted: {0}")]
    ResourceExhausted(String),

    #[error("no closed form available for a = {0} (supported: 1..=12)")]
    UnsupportedFormula(u32),

    /// Extra interpolation samples do not lie on the interpolating polynomial.
    #[error("inconsistent sample at n = {n}: expected {expected}, polynomial gives {actual}")]
    InconsistentSample {
        n: i64,
        expected: String,
        actual: String,
    },

    /// An internal invariant failed. Always a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
