//! Degree sequences of two bipartite families with known projected chains.

use crate::graph::DegreeSequence;
use crate::{Error, Result};

/// Rows `(2, ..., 2)` of length `n`, columns `(n-1, n-1, 1, 1)`.
///
/// The state space has `n(2n-1)` states in two isomorphism classes of sizes
/// `n` and `2n(n-1)`, so it grows quadratically while the projected chain
/// stays two-dimensional.
pub fn quadratic_family(n: usize) -> Result<DegreeSequence> {
    if n < 2 {
        return Err(Error::ParameterOutOfRange(format!("quadratic family needs n >= 2, got {n}")));
    }
    DegreeSequence::bipartite(vec![2; n], vec![n - 1, n - 1, 1, 1])
}

/// Two rows of sum `l` over `2l` columns of sum 1: `binom(2l, l)` states,
/// all isomorphic.
pub fn binomial_family(l: usize) -> Result<DegreeSequence> {
    if l < 1 {
        return Err(Error::ParameterOutOfRange(format!("binomial family needs l >= 1, got {l}")));
    }
    DegreeSequence::bipartite(vec![l, l], vec![1; 2 * l])
}
