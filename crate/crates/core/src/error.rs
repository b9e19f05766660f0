use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The adjacency data does not describe a unitrivalent tree.
    #[error("malformed tree: {0}")]
    Structure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("capacity exceeded: {what} would exceed the limit of {limit}")]
    Capacity { what: &'static str, limit: usize },

    /// Modular ranks kept disagreeing after every retry.
    #[error("unlucky primes: ranks {ranks:?} over primes {primes:?} disagree after {attempts} attempts")]
    UnluckyPrime {
        primes: Vec<u64>,
        ranks: Vec<usize>,
        attempts: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no finite crossing for k = {0}: the relation/diagram ratio never drops to 1")]
    NoCrossing(u32),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
