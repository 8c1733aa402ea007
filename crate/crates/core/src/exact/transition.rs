use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::StateSpace;
use crate::chains::{apply_trade, binomial, rewire_edges, selection_count, switch_entries, trade_context, ChainKind};
use crate::graph::GraphKind;
use crate::{Error, Result};

const ROW_SUM_TOL: f64 = 1e-12;

/// Dense row-stochastic matrix. A sparse copy of the rows is kept for fast
/// vector products.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    dim: usize,
    entries: Vec<f64>,
    nonzeros: Vec<Vec<(usize, f64)>>,
}

impl TransitionMatrix {
    /// Builds a matrix from row-major entries, checking that every entry is
    /// in `[0, 1]` and every row sums to 1 within 1e-12.
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: entries.len(),
            });
        }
        for (i, row) in entries.chunks(dim.max(1)).enumerate().take(dim) {
            if let Some(p) = row.iter().find(|p| !(0.0..=1.0 + ROW_SUM_TOL).contains(*p)) {
                return Err(Error::VerificationFailed(format!("row {i} has entry {p} outside [0, 1]")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::VerificationFailed(format!("row {i} sums to {sum}")));
            }
        }
        let nonzeros = (0..dim)
            .map(|i| (0..dim).filter_map(|j| Some((j, entries[i * dim + j])).filter(|e| e.1 != 0.0)).collect())
            .collect();
        Ok(TransitionMatrix { dim, entries, nonzeros })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad.len(),
            });
        }
        Self::new(dim, rows.concat())
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(dim, (0..dim * dim).map(|e| if e / dim == e % dim { 1.0 } else { 0.0 }).collect())
            .expect("identity is stochastic")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    /// Positive entries of row `i` as `(column, probability)`.
    pub fn row_nonzeros(&self, i: usize) -> &[(usize, f64)] {
        &self.nonzeros[i]
    }

    /// The row vector `mu * P`.
    pub fn step(&self, mu: &[f64]) -> Vec<f64> {
        assert_eq!(mu.len(), self.dim, "distribution length");
        let mut out = vec![0.0; self.dim];
        for (i, &m) in mu.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            for &(j, p) in &self.nonzeros[i] {
                out[j] += m * p;
            }
        }
        out
    }

    /// `max |P[i][j] - P[j][i]|`.
    pub fn asymmetry(&self) -> f64 {
        (0..self.dim)
            .flat_map(|i| (i + 1..self.dim).map(move |j| (i, j)))
            .map(|(i, j)| (self.get(i, j) - self.get(j, i)).abs())
            .fold(0.0, f64::max)
    }

    /// `max |column sum - 1|`; zero for doubly stochastic matrices.
    pub fn column_sum_deviation(&self) -> f64 {
        (0..self.dim)
            .map(|j| ((0..self.dim).map(|i| self.get(i, j)).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Calls `f(target, weight_denominator)` once per equally weighted kernel
/// outcome from state `idx`: the outcome has probability
/// `1 / weight_denominator`.
fn for_each_move(space: &StateSpace, chain: ChainKind, idx: usize, mut f: impl FnMut(usize, u128)) -> Result<()> {
    let kind = space.kind();
    let state = space.state(idx);
    let mut locate = |b: &crate::graph::BinaryMatrix, den: u128| -> Result<()> {
        let t = space
            .index_of(b)
            .ok_or_else(|| Error::VerificationFailed(format!("kernel left the state space at {b:?}")))?;
        f(t, den);
        Ok(())
    };
    match chain {
        ChainKind::Switch => {
            let entries: Vec<_> = match kind {
                GraphKind::Undirected => state.ones().filter(|&(u, v)| u < v).collect(),
                _ => state.ones().collect(),
            };
            if entries.len() < 2 {
                return locate(state, 1);
            }
            let den = u128::from(selection_count(kind, entries.len()));
            for (&e1, &e2) in entries.iter().tuple_combinations() {
                let rewirings: &[bool] = if kind == GraphKind::Undirected { &[false, true] } else { &[false] };
                for &cross in rewirings {
                    let mut b = state.clone();
                    let applied = match kind {
                        GraphKind::Undirected => rewire_edges(&mut b, e1, e2, cross),
                        _ => switch_entries(&mut b, kind, e1, e2),
                    };
                    if applied.is_none() {
                        b = state.clone();
                    }
                    locate(&b, den)?;
                }
            }
        }
        ChainKind::Curveball => {
            let n = state.n_rows();
            if n < 2 {
                return locate(state, 1);
            }
            let pairs = u128::from(binomial(n as u64, 2));
            for (i, j) in (0..n).tuple_combinations() {
                let ctx = trade_context(state, i, j, kind);
                let pool = ctx.tradeable();
                let den = pairs * u128::from(ctx.allocations());
                for to_i in pool.iter().copied().combinations(ctx.s_i.len()) {
                    let mut b = state.clone();
                    apply_trade(&mut b, &ctx, &to_i, kind);
                    locate(&b, den)?;
                }
            }
        }
    }
    Ok(())
}

/// Exact one-step transition matrix of `chain` on `space`, matching the
/// sampling law of the chain kernels.
pub fn transition_matrix(space: &StateSpace, chain: ChainKind) -> Result<TransitionMatrix> {
    let dim = space.len();
    let rows: Vec<Vec<f64>> = (0..dim)
        .into_par_iter()
        .map(|idx| {
            // Sum outcomes per (target, weight) before dividing, so equal
            // weights add up exactly.
            let mut counts: BTreeMap<(usize, u128), u64> = BTreeMap::new();
            for_each_move(space, chain, idx, |t, den| *counts.entry((t, den)).or_default() += 1)?;
            let mut row = vec![0.0; dim];
            for ((t, den), c) in counts {
                row[t] += c as f64 / den as f64;
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    TransitionMatrix::new(dim, rows.concat())
}

pub fn switch_matrix(space: &StateSpace) -> Result<TransitionMatrix> {
    transition_matrix(space, ChainKind::Switch)
}

pub fn curveball_matrix(space: &StateSpace) -> Result<TransitionMatrix> {
    transition_matrix(space, ChainKind::Curveball)
}

/// Row `idx` of the transition matrix in exact rational arithmetic, as
/// `target -> probability` for the positive entries.
pub fn exact_row(space: &StateSpace, chain: ChainKind, idx: usize) -> Result<BTreeMap<usize, BigRational>> {
    let mut row: BTreeMap<usize, BigRational> = BTreeMap::new();
    for_each_move(space, chain, idx, |t, den| {
        let p = BigRational::new(BigInt::from(1), BigInt::from(den));
        *row.entry(t).or_insert_with(|| BigRational::from_integer(BigInt::from(0))) += p;
    })?;
    Ok(row)
}
