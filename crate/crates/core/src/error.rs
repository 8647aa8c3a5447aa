use thiserror::Error;

use crate::series::CoeffRing;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in [2, 2^31)")]
    NotPrime(u64),
    #[error("coefficient ring mismatch: {left} vs {right}")]
    RingMismatch { left: CoeffRing, right: CoeffRing },
    #[error("truncation mismatch: {left} vs {right}")]
    TruncMismatch { left: usize, right: usize },
    #[error("degree {index} is beyond truncation {trunc}")]
    OutOfRange { index: usize, trunc: usize },
    #[error("not a unit series: the constant term must be 1")]
    NotUnit,
    #[error("not a Nottingham series: need c0 = 0 and c1 = 1")]
    NotNottingham,
    #[error("substituted series must have zero constant term")]
    NonzeroConstant,
    #[error("empty coefficient list")]
    Empty,
    #[error("malformed literal: {0}")]
    Literal(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumerating {requested} elements exceeds the cap of {cap}")]
    TooLarge { requested: u128, cap: u64 },
    #[error("p = {0} is unsupported here: the lower central series formula needs p > 2")]
    UnsupportedPrime(u64),
    #[error("structural error: {0}")]
    Structural(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
