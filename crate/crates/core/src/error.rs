use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 1")]
    ZeroModulus,

    #[error("value {0} is outside the supported range 1..=2^63-1")]
    OutOfRange(u128),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("domain error: {0}")]
    Domain(&'static str),

    /// The hypothesis of a bound or lifting rule does not hold for the input.
    #[error("not applicable: {0}")]
    Inapplicable(&'static str),

    #[error("arity {arity} is below the default arity {minimum} for exponent {exponent}; no characterization is known there")]
    ArityBelowDefault {
        exponent: u32,
        arity: usize,
        minimum: usize,
    },

    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}
