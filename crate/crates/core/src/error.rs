use thiserror::Error;

use crate::graph::{GraphKind, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("infeasible degree sequence: {0}")]
    Infeasible(Violation),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("not a permutation of 0..{0}")]
    NotPermutation(usize),

    #[error("canonical form search visited more than {limit} partial permutations")]
    SizeLimitExceeded { limit: u64 },

    #[error("state space has more than {cap} states")]
    CapExceeded { cap: usize },

    #[error("operation requires a {expected} graph, got {found}")]
    WrongKind { expected: GraphKind, found: GraphKind },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("chain is not lumpable (deviation {deviation:e})")]
    NotLumpable { deviation: f64 },

    #[error("chain is not reversible (deviation {deviation:e})")]
    NotReversible { deviation: f64 },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("lifted mixing time requires a uniform stationary distribution")]
    NonUniformPi,

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
}
