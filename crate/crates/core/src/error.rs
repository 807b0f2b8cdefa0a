use std::fmt;

use num_bigint::BigInt;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} does not divide {1}")]
    NotDivisor(String, String),

    #[error("offset {0} does not lie in (1/{1})Z")]
    BadDenominator(String, String),

    #[error("level mismatch: {0}")]
    LevelMismatch(String),

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix does not define a morphism: {0}")]
    NotAMorphism(String),

    #[error("map does not descend to the quotient: kernel element {element:?} maps to {image:?}, which is nonzero")]
    NotWellDefined {
        element: Vec<BigInt>,
        image: Vec<BigInt>,
    },

    #[error("projection is not surjective: {0}")]
    NotSurjective(String),

    #[error("division by {divisor} not integral at index {index}")]
    NonIntegral { index: u64, divisor: BigInt },

    #[error("division by {divisor} at index {index} is ambiguous in a ring with torsion")]
    TorsionRing { index: u64, divisor: BigInt },

    #[error("universal polynomial has a non-integral coefficient at index {index}: {coefficient}")]
    IntegralityFailure { index: u64, coefficient: String },

    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),

    #[error("unsupported ring for this operation: {0}")]
    UnsupportedRing(String),

    #[error("level {level} exceeds the bound {bound}")]
    OutOfBound { level: u64, bound: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("morphism is not invertible: {0}")]
    NotInvertible(String),

    #[error("derived restriction depends on the factorization order for {m}|{n}")]
    OrderDependent { m: u64, n: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn not_divisor(a: impl fmt::Display, b: impl fmt::Display) -> Self {
        Error::NotDivisor(a.to_string(), b.to_string())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
