//! Random relabelling within equal-degree groups.
//!
//! Applying a uniform group-respecting relabelling to a state yields a
//! uniform draw from its isomorphism class, so a chain started after this
//! step starts from the uniform distribution on that class.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{apply_relabelling, degree_groups, BinaryMatrix, DegreeSequence, GraphKind, NodePartition};
use crate::{Error, Result};

fn shuffled_within_groups<R: Rng + ?Sized>(p: &NodePartition, len: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..len).collect();
    for group in &p.groups {
        let mut images = group.clone();
        images.shuffle(rng);
        for (&pos, &img) in group.iter().zip(&images) {
            perm[pos] = img;
        }
    }
    perm
}

/// Shuffles rows within equal-row-sum groups and columns within
/// equal-column-sum groups.
pub fn preprocess_bipartite<R: Rng + ?Sized>(a: &BinaryMatrix, rng: &mut R) -> BinaryMatrix {
    let k = DegreeSequence::of_matrix(a, GraphKind::Bipartite).expect("every matrix is a bipartite state");
    let (rows, cols) = degree_groups(&k);
    let rho = shuffled_within_groups(&rows, a.n_rows(), rng);
    let sigma = shuffled_within_groups(&cols, a.n_cols(), rng);
    apply_relabelling(a, &rho, &sigma).expect("group shuffles are permutations")
}

/// Permutes nodes uniformly within equal-degree classes (equal (out, in)
/// pairs for directed graphs), applying the same permutation to rows and
/// columns.
pub fn preprocess_graph<R: Rng + ?Sized>(a: &BinaryMatrix, kind: GraphKind, rng: &mut R) -> Result<BinaryMatrix> {
    if kind == GraphKind::Bipartite {
        return Err(Error::WrongKind {
            expected: GraphKind::Undirected,
            found: kind,
        });
    }
    let k = DegreeSequence::of_matrix(a, kind)?;
    let (nodes, _) = degree_groups(&k);
    let rho = shuffled_within_groups(&nodes, a.n_rows(), rng);
    apply_relabelling(a, &rho, &rho)
}

pub fn preprocess<R: Rng + ?Sized>(a: &BinaryMatrix, kind: GraphKind, rng: &mut R) -> Result<BinaryMatrix> {
    match kind {
        GraphKind::Bipartite => Ok(preprocess_bipartite(a, rng)),
        _ => preprocess_graph(a, kind, rng),
    }
}
