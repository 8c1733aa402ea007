use std::collections::BTreeMap;

use serde::Serialize;

use super::{BinaryMatrix, DegreeSequence, GraphKind, Side};
use crate::{Error, Result};

/// Partition of one side's indices into groups of equal degree.
///
/// Groups are listed in order of their smallest index; each group is sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodePartition {
    pub side: Side,
    pub groups: Vec<Vec<usize>>,
}

impl NodePartition {
    fn by_key<K: Ord + Copy>(side: Side, keys: impl Iterator<Item = K>) -> Self {
        let mut first_seen: BTreeMap<K, usize> = BTreeMap::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (idx, key) in keys.enumerate() {
            let g = *first_seen.entry(key).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(idx);
        }
        NodePartition { side, groups }
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Group id of every index.
    pub fn group_of(&self) -> Vec<usize> {
        let mut of = vec![0; self.len()];
        for (g, members) in self.groups.iter().enumerate() {
            for &i in members {
                of[i] = g;
            }
        }
        of
    }
}

/// Equal-degree groups on the row side and the column side.
///
/// Directed sequences group nodes by their (out, in) pair and report the same
/// grouping for both sides; undirected sequences have an empty column side.
pub fn degree_groups(k: &DegreeSequence) -> (NodePartition, NodePartition) {
    match k.kind() {
        GraphKind::Bipartite => (
            NodePartition::by_key(Side::Row, k.rows().iter().copied()),
            NodePartition::by_key(Side::Column, k.cols().iter().copied()),
        ),
        GraphKind::Undirected => (
            NodePartition::by_key(Side::Row, k.rows().iter().copied()),
            NodePartition {
                side: Side::Column,
                groups: Vec::new(),
            },
        ),
        GraphKind::Directed => {
            let pairs = || k.rows().iter().copied().zip(k.cols().iter().copied());
            (
                NodePartition::by_key(Side::Row, pairs()),
                NodePartition::by_key(Side::Column, pairs()),
            )
        }
    }
}

fn check_permutation(perm: &[usize], len: usize) -> Result<()> {
    if perm.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            found: perm.len(),
        });
    }
    let mut seen = vec![false; len];
    for &p in perm {
        if p >= len || std::mem::replace(&mut seen[p], true) {
            return Err(Error::NotPermutation(len));
        }
    }
    Ok(())
}

/// `B[i][j] = A[rho[i]][sigma[j]]`.
pub fn apply_relabelling(a: &BinaryMatrix, rho: &[usize], sigma: &[usize]) -> Result<BinaryMatrix> {
    check_permutation(rho, a.n_rows())?;
    check_permutation(sigma, a.n_cols())?;
    Ok(BinaryMatrix::from_fn(a.n_rows(), a.n_cols(), |i, j| a.get(rho[i], sigma[j])))
}

/// Relabels the nodes of a square adjacency matrix: `B[i][j] = A[rho[i]][rho[j]]`.
pub fn relabel_nodes(a: &BinaryMatrix, rho: &[usize]) -> Result<BinaryMatrix> {
    apply_relabelling(a, rho, rho)
}
