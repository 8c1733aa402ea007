use std::collections::HashMap;

use crate::graph::{erdos_gallai_failure, gale_ryser_failure, validate, BinaryMatrix, DegreeSequence, GraphKind};
use crate::{Error, Result};

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// All realizations of a degree sequence, in ascending row-major bit order.
#[derive(Debug, Clone)]
pub struct StateSpace {
    degrees: DegreeSequence,
    states: Vec<BinaryMatrix>,
    index: HashMap<Vec<u8>, usize>,
}

impl StateSpace {
    pub fn degrees(&self) -> &DegreeSequence {
        &self.degrees
    }

    pub fn kind(&self) -> GraphKind {
        self.degrees.kind()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[BinaryMatrix] {
        &self.states
    }

    pub fn state(&self, idx: usize) -> &BinaryMatrix {
        &self.states[idx]
    }

    pub fn index_of(&self, a: &BinaryMatrix) -> Option<usize> {
        self.index.get(&a.to_key()).copied()
    }
}

/// Enumerates every state with margins `k` by row-major backtracking,
/// trying 0 before 1 in each cell, with Gale-Ryser (Erdős-Gallai for
/// undirected graphs) checks on the residual margins after each row.
pub fn enumerate(k: &DegreeSequence, cap: usize) -> Result<StateSpace> {
    validate(k).map_err(Error::Infeasible)?;
    let (n, n2) = k.shape();
    let mut search = Enumerator {
        kind: k.kind(),
        n,
        row_left: k.rows().to_vec(),
        col_left: match k.kind() {
            GraphKind::Undirected => Vec::new(),
            _ => k.cols().to_vec(),
        },
        current: BinaryMatrix::zeros(n, n2),
        states: Vec::new(),
        cap,
    };
    search.row(0)?;
    let states = search.states;
    let index = states.iter().enumerate().map(|(i, s)| (s.to_key(), i)).collect();
    Ok(StateSpace {
        degrees: k.clone(),
        states,
        index,
    })
}

struct Enumerator {
    kind: GraphKind,
    n: usize,
    row_left: Vec<usize>,
    /// Residual column sums; unused for undirected graphs, whose residual
    /// degrees all live in `row_left`.
    col_left: Vec<usize>,
    current: BinaryMatrix,
    states: Vec<BinaryMatrix>,
    cap: usize,
}

impl Enumerator {
    fn cells(&self, i: usize) -> Vec<usize> {
        match self.kind {
            GraphKind::Bipartite => (0..self.current.n_cols()).collect(),
            GraphKind::Undirected => (i + 1..self.n).collect(),
            GraphKind::Directed => (0..self.n).filter(|&j| j != i).collect(),
        }
    }

    /// Ones column `j` (node `j` for undirected graphs) can still receive
    /// after cell `(i, j)` is decided.
    fn capacity_after(&self, i: usize, j: usize) -> usize {
        match self.kind {
            GraphKind::Bipartite => self.n - 1 - i,
            GraphKind::Directed => self.n - 1 - i - usize::from(j > i),
            GraphKind::Undirected => (j - i - 1) + (self.n - 1 - j),
        }
    }

    fn target_left(&mut self, j: usize) -> &mut usize {
        match self.kind {
            GraphKind::Undirected => &mut self.row_left[j],
            _ => &mut self.col_left[j],
        }
    }

    fn row(&mut self, i: usize) -> Result<()> {
        if i == self.n {
            if self.states.len() == self.cap {
                return Err(Error::CapExceeded { cap: self.cap });
            }
            self.states.push(self.current.clone());
            return Ok(());
        }
        let cells = self.cells(i);
        self.cell(i, &cells, 0)
    }

    fn cell(&mut self, i: usize, cells: &[usize], pos: usize) -> Result<()> {
        if pos == cells.len() {
            if self.row_left[i] != 0 || !self.residual_feasible(i) {
                return Ok(());
            }
            return self.row(i + 1);
        }
        let j = cells[pos];
        let remaining = cells.len() - pos - 1;
        if self.row_left[i] <= remaining && *self.target_left(j) <= self.capacity_after(i, j) {
            self.cell(i, cells, pos + 1)?;
        }
        if self.row_left[i] >= 1 && *self.target_left(j) >= 1 {
            self.row_left[i] -= 1;
            *self.target_left(j) -= 1;
            self.current.set(i, j, true);
            if self.kind == GraphKind::Undirected {
                self.current.set(j, i, true);
            }
            let out = self.cell(i, cells, pos + 1);
            self.current.set(i, j, false);
            if self.kind == GraphKind::Undirected {
                self.current.set(j, i, false);
            }
            self.row_left[i] += 1;
            *self.target_left(j) += 1;
            out?;
        }
        Ok(())
    }

    /// Necessary conditions for completing rows `i + 1..` (exact for
    /// bipartite and undirected states).
    fn residual_feasible(&self, i: usize) -> bool {
        let rest = &self.row_left[i + 1..];
        match self.kind {
            GraphKind::Undirected => rest.iter().sum::<usize>() % 2 == 0 && erdos_gallai_failure(rest).is_none(),
            _ => rest.iter().sum::<usize>() == self.col_left.iter().sum::<usize>() && gale_ryser_failure(rest, &self.col_left).is_none(),
        }
    }
}
