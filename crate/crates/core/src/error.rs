use thiserror::Error;

/// Errors produced by the arithmetic and calculus layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("{value} is not a unit modulo {modulus}")]
    NotUnit { value: i128, modulus: u64 },
    #[error("{value} is not a generator modulo {modulus}")]
    NotGenerator { value: u64, modulus: u64 },
    #[error("modulus overflow: {0}")]
    Overflow(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("function is not representable: {0}")]
    NotRepresentable(String),
    #[error("unknown claim id {0}")]
    UnknownClaim(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
