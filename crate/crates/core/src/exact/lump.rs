use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{StateSpace, TransitionMatrix};
use crate::graph::canonical_form;
use crate::{Error, Result};

const SUM_TOL: f64 = 1e-12;
const LUMP_TOL: f64 = 1e-9;

/// Probability weights over states or classes.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    /// Checks that the weights are non-negative and sum to 1 within 1e-12.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| w.is_nan() || **w < 0.0) {
            return Err(Error::VerificationFailed(format!("invalid weight {w}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::VerificationFailed(format!("weights sum to {sum}")));
        }
        Ok(Distribution { weights })
    }

    pub fn point(dim: usize, idx: usize) -> Self {
        let mut weights = vec![0.0; dim];
        weights[idx] = 1.0;
        Distribution { weights }
    }

    pub fn uniform(dim: usize) -> Self {
        Distribution {
            weights: vec![1.0 / dim as f64; dim],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// One step of `p` applied to this distribution.
    pub fn evolve(&self, p: &TransitionMatrix) -> Result<Distribution> {
        same_dim(self.len(), p.dim())?;
        Ok(Distribution { weights: p.step(&self.weights) })
    }

    pub(crate) fn is_uniform(&self) -> bool {
        let u = 1.0 / self.len() as f64;
        self.weights.iter().all(|w| (w - u).abs() <= SUM_TOL)
    }
}

fn same_dim(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// Half the L1 distance between two distributions.
pub fn variation_distance(mu: &Distribution, nu: &Distribution) -> Result<f64> {
    same_dim(mu.len(), nu.len())?;
    Ok(0.5 * mu.weights.iter().zip(&nu.weights).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// States grouped into isomorphism classes, numbered by their lowest
/// member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoPartition {
    class_of: Vec<usize>,
    class_sizes: Vec<usize>,
    representatives: Vec<usize>,
}

impl IsoPartition {
    /// Partition from a class label per state; labels are renumbered in
    /// order of first appearance.
    pub fn from_labels<T: Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut ids: HashMap<&T, usize> = HashMap::new();
        let mut part = IsoPartition {
            class_of: Vec::with_capacity(labels.len()),
            class_sizes: Vec::new(),
            representatives: Vec::new(),
        };
        for (idx, label) in labels.iter().enumerate() {
            let c = *ids.entry(label).or_insert_with(|| {
                part.representatives.push(idx);
                part.class_sizes.push(0);
                part.class_sizes.len() - 1
            });
            part.class_of.push(c);
            part.class_sizes[c] += 1;
        }
        part
    }

    pub fn singletons(dim: usize) -> Self {
        Self::from_labels(&(0..dim).collect::<Vec<_>>())
    }

    /// Number of states.
    pub fn dim(&self) -> usize {
        self.class_of.len()
    }

    /// Number of classes.
    pub fn len(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_sizes.is_empty()
    }

    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn members(&self, class: usize) -> impl Iterator<Item = usize> + '_ {
        self.class_of.iter().enumerate().filter(move |(_, &c)| c == class).map(|(i, _)| i)
    }
}

/// Classes of `space` under degree-preserving isomorphism, found by
/// comparing canonical forms.
pub fn iso_partition(space: &StateSpace) -> Result<IsoPartition> {
    let kind = space.kind();
    let forms: Vec<_> = space
        .states()
        .par_iter()
        .map(|s| canonical_form(s, kind))
        .collect::<Result<_>>()?;
    Ok(IsoPartition::from_labels(&forms))
}

/// `P[x][class]` for every state `x`, as a `dim x classes` row-major array.
fn class_sums(p: &TransitionMatrix, part: &IsoPartition) -> Vec<f64> {
    let classes = part.len();
    let mut sums = vec![0.0; p.dim() * classes];
    for x in 0..p.dim() {
        for &(z, q) in p.row_nonzeros(x) {
            sums[x * classes + part.class_of[z]] += q;
        }
    }
    sums
}

/// Largest difference `|P[x][C] - P[x'][C]|` over classes `C` and pairs of
/// states `x, x'` in a common class; zero exactly when the chain is
/// lumpable with respect to `part`.
pub fn check_lumpability(p: &TransitionMatrix, part: &IsoPartition) -> Result<f64> {
    same_dim(p.dim(), part.dim())?;
    let classes = part.len();
    let sums = class_sums(p, part);
    let mut lo = vec![f64::INFINITY; classes * classes];
    let mut hi = vec![f64::NEG_INFINITY; classes * classes];
    for x in 0..p.dim() {
        let c = part.class_of[x];
        for d in 0..classes {
            let v = sums[x * classes + d];
            lo[c * classes + d] = lo[c * classes + d].min(v);
            hi[c * classes + d] = hi[c * classes + d].max(v);
        }
    }
    Ok(hi.iter().zip(&lo).map(|(h, l)| h - l).filter(|d| d.is_finite()).fold(0.0, f64::max))
}

/// The projected chain on classes: `P̄[C][D] = P[rep(C)][D]`.
pub fn project(p: &TransitionMatrix, part: &IsoPartition) -> Result<TransitionMatrix> {
    let deviation = check_lumpability(p, part)?;
    if deviation > LUMP_TOL {
        return Err(Error::NotLumpable { deviation });
    }
    let classes = part.len();
    let sums = class_sums(p, part);
    let entries = part
        .representatives
        .iter()
        .flat_map(|&r| sums[r * classes..(r + 1) * classes].to_vec())
        .collect();
    TransitionMatrix::new(classes, entries)
}

/// Stationary distribution of an original chain (`part = None`), which must
/// be doubly stochastic, or of a projected chain, which must satisfy
/// detailed balance with respect to the class sizes.
pub fn stationary(p: &TransitionMatrix, part: Option<&IsoPartition>) -> Result<Distribution> {
    match part {
        None => {
            let deviation = p.column_sum_deviation();
            if deviation > SUM_TOL {
                return Err(Error::VerificationFailed(format!(
                    "column sums deviate from 1 by {deviation:e}; the uniform distribution is not stationary"
                )));
            }
            Ok(Distribution::uniform(p.dim()))
        }
        Some(part) => {
            same_dim(p.dim(), part.len())?;
            let total = part.dim() as f64;
            let pi: Vec<f64> = part.class_sizes.iter().map(|&s| s as f64 / total).collect();
            let worst = super::detailed_balance(p, &pi);
            if worst > SUM_TOL {
                return Err(Error::VerificationFailed(format!(
                    "detailed balance violated by {worst:e} for class-size weights"
                )));
            }
            Distribution::new(pi)
        }
    }
}

/// Class totals of a distribution over states.
pub fn project_distribution(mu: &Distribution, part: &IsoPartition) -> Result<Distribution> {
    same_dim(mu.len(), part.dim())?;
    let mut weights = vec![0.0; part.len()];
    for (x, w) in mu.weights.iter().enumerate() {
        weights[part.class_of[x]] += w;
    }
    Ok(Distribution { weights })
}

/// Spreads each class weight uniformly over the class members.
pub fn lift_distribution(mu: &Distribution, part: &IsoPartition) -> Result<Distribution> {
    same_dim(mu.len(), part.len())?;
    let weights = part
        .class_of
        .iter()
        .map(|&c| mu.weights[c] / part.class_sizes[c] as f64)
        .collect();
    Ok(Distribution { weights })
}
