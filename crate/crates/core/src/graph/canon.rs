//! Canonical forms under degree-preserving relabelling.
//!
//! The canonical form of a state is the lexicographically smallest row-major
//! bit string among all relabellings that permute nodes only within their
//! equal-degree groups. Graph isomorphisms preserve degrees, so two states are
//! isomorphic iff their canonical forms coincide.
//!
//! The search places one row position at a time. Unplaced positions are kept
//! in cells (a set of positions together with the nodes that may still go
//! there). Once a row is placed, the smallest possible bits for that row are
//! obtained by putting the zeros of every cell first, and the cells split
//! accordingly. Siblings that produce a larger row than the best sibling are
//! dropped, as are branches whose prefix exceeds the best complete form.
//! Interchangeable nodes (twins) are explored once, and leaves that
//! reproduce the best form yield automorphisms whose orbits prune later
//! siblings.

use std::cmp::Ordering;

use super::{degree_groups, BinaryMatrix, DegreeSequence, GraphKind, NodePartition};
use crate::{Error, Result};

/// Default bound on visited partial permutations.
pub const DEFAULT_SEARCH_LIMIT: u64 = 10_000_000;

pub fn canonical_form(a: &BinaryMatrix, kind: GraphKind) -> Result<BinaryMatrix> {
    canonical_form_with_limit(a, kind, DEFAULT_SEARCH_LIMIT)
}

pub fn canonical_form_with_limit(a: &BinaryMatrix, kind: GraphKind, limit: u64) -> Result<BinaryMatrix> {
    let k = DegreeSequence::of_matrix(a, kind)?;
    let (row_groups, col_groups) = degree_groups(&k);
    let mut search = Search {
        a,
        limit,
        visited: 0,
        prefix: Vec::with_capacity(a.n_rows()),
        path: Vec::with_capacity(a.n_rows()),
        best: None,
        best_path: Vec::new(),
        automorphisms: Vec::new(),
    };
    match kind {
        GraphKind::Bipartite => {
            let mut avail = row_groups.groups.clone();
            let group_of = row_groups.group_of();
            search.bipartite(0, &initial_cells(&col_groups), &group_of, &mut avail)?;
        }
        GraphKind::Undirected | GraphKind::Directed => {
            search.graph(0, &initial_cells(&row_groups))?;
        }
    }
    let best = search.best.unwrap_or_default();
    Ok(BinaryMatrix::from_fn(a.n_rows(), a.n_cols(), |i, j| best[i][j] == 1))
}

#[derive(Clone, Debug)]
struct Cell {
    /// Sorted ascending.
    positions: Vec<usize>,
    nodes: Vec<usize>,
}

fn initial_cells(p: &NodePartition) -> Vec<Cell> {
    p.groups
        .iter()
        .map(|g| Cell {
            positions: g.clone(),
            nodes: g.clone(),
        })
        .collect()
}

/// Smallest row obtainable under `cells` when node `u` contributes `bit(u)`.
fn row_bits(cells: &[Cell], width: usize, bit: impl Fn(usize) -> bool) -> Vec<u8> {
    let mut row = vec![0u8; width];
    for cell in cells {
        let zeros = cell.nodes.iter().filter(|&&u| !bit(u)).count();
        for &p in &cell.positions[zeros..] {
            row[p] = 1;
        }
    }
    row
}

fn refine(cells: &[Cell], bit: impl Fn(usize) -> bool) -> Vec<Cell> {
    let mut out = Vec::with_capacity(cells.len() + 4);
    for cell in cells {
        let (zeros, ones): (Vec<usize>, Vec<usize>) = cell.nodes.iter().partition(|&&u| !bit(u));
        let z = zeros.len();
        if !zeros.is_empty() {
            out.push(Cell {
                positions: cell.positions[..z].to_vec(),
                nodes: zeros,
            });
        }
        if !ones.is_empty() {
            out.push(Cell {
                positions: cell.positions[z..].to_vec(),
                nodes: ones,
            });
        }
    }
    out
}

struct Search<'a> {
    a: &'a BinaryMatrix,
    limit: u64,
    visited: u64,
    prefix: Vec<Vec<u8>>,
    /// Row (bipartite) or node (graph) placed at each depth.
    path: Vec<usize>,
    best: Option<Vec<Vec<u8>>>,
    best_path: Vec<usize>,
    /// Automorphisms found from leaves equal to the best form, as maps on
    /// rows (bipartite) or nodes (graphs).
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.limit {
            return Err(Error::SizeLimitExceeded { limit: self.limit });
        }
        Ok(())
    }

    /// True when the current prefix is already larger than the best form.
    fn dominated(&self) -> bool {
        match &self.best {
            Some(best) => self.prefix[..] > best[..self.prefix.len()],
            None => false,
        }
    }

    fn record(&mut self) {
        match self.best.as_ref().map(|b| self.prefix.cmp(b)) {
            None | Some(Ordering::Less) => {
                self.best = Some(self.prefix.clone());
                self.best_path = self.path.clone();
            }
            Some(Ordering::Equal) => {
                let mut gamma: Vec<usize> = (0..self.a.n_rows()).collect();
                for (&from, &to) in self.best_path.iter().zip(&self.path) {
                    gamma[from] = to;
                }
                if gamma.iter().enumerate().any(|(i, &g)| i != g) {
                    self.automorphisms.push(gamma);
                }
            }
            Some(Ordering::Greater) => {}
        }
    }

    /// Whether `c` lies in the orbit of an already explored sibling under the
    /// known automorphisms that fix the current path pointwise.
    fn in_explored_orbit(&self, explored: &[usize], c: usize) -> bool {
        if explored.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.a.n_rows()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for gamma in &self.automorphisms {
            if self.path.iter().all(|&p| gamma[p] == p) {
                for (x, &y) in gamma.iter().enumerate() {
                    let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                    parent[rx] = ry;
                }
            }
        }
        let rc = find(&mut parent, c);
        explored.iter().any(|&e| find(&mut parent, e) == rc)
    }

    /// Keeps the candidates whose row is minimal, skipping twins of already
    /// examined candidates.
    fn minimal_candidates(
        candidates: &[usize],
        twins: impl Fn(usize, usize) -> bool,
        row_of: impl Fn(usize) -> Vec<u8>,
    ) -> (Vec<u8>, Vec<usize>) {
        let mut min_row: Option<Vec<u8>> = None;
        let mut kept = Vec::new();
        let mut examined: Vec<usize> = Vec::new();
        for &c in candidates {
            if examined.iter().any(|&e| twins(e, c)) {
                continue;
            }
            examined.push(c);
            let row = row_of(c);
            match min_row.as_ref().map(|m| row.cmp(m)) {
                None | Some(Ordering::Less) => {
                    min_row = Some(row);
                    kept.clear();
                    kept.push(c);
                }
                Some(Ordering::Equal) => kept.push(c),
                Some(Ordering::Greater) => {}
            }
        }
        (min_row.unwrap_or_default(), kept)
    }

    fn bipartite(&mut self, depth: usize, cells: &[Cell], group_of: &[usize], avail: &mut [Vec<usize>]) -> Result<()> {
        let a = self.a;
        if depth == a.n_rows() {
            self.record();
            return Ok(());
        }
        let g = group_of[depth];
        let identical_rows = |r: usize, s: usize| (0..a.n_cols()).all(|j| a.get(r, j) == a.get(s, j));
        let (row, kept) = Self::minimal_candidates(&avail[g], identical_rows, |r| {
            row_bits(cells, a.n_cols(), |c| a.get(r, c))
        });
        self.prefix.push(row);
        let mut explored = Vec::with_capacity(kept.len());
        for r in kept {
            if self.dominated() {
                break;
            }
            if self.in_explored_orbit(&explored, r) {
                continue;
            }
            explored.push(r);
            self.tick()?;
            let refined = refine(cells, |c| a.get(r, c));
            let slot = avail[g].iter().position(|&x| x == r).expect("candidate is available");
            avail[g].remove(slot);
            self.path.push(r);
            let res = self.bipartite(depth + 1, &refined, group_of, avail);
            self.path.pop();
            avail[g].insert(slot, r);
            res?;
        }
        self.prefix.pop();
        Ok(())
    }

    fn graph(&mut self, depth: usize, cells: &[Cell]) -> Result<()> {
        let a = self.a;
        let n = a.n_rows();
        if depth == n {
            self.record();
            return Ok(());
        }
        let ci = cells
            .iter()
            .position(|c| c.positions[0] == depth)
            .expect("every unplaced position heads or belongs to a cell");

        let individualize = |v: usize| -> Vec<Cell> {
            let mut out = Vec::with_capacity(cells.len() + 1);
            for (idx, cell) in cells.iter().enumerate() {
                if idx != ci {
                    out.push(cell.clone());
                    continue;
                }
                out.push(Cell {
                    positions: vec![depth],
                    nodes: vec![v],
                });
                if cell.nodes.len() > 1 {
                    out.push(Cell {
                        positions: cell.positions[1..].to_vec(),
                        nodes: cell.nodes.iter().copied().filter(|&u| u != v).collect(),
                    });
                }
            }
            out
        };
        // u and v are twins when transposing them is an automorphism.
        let twins = |u: usize, v: usize| {
            a.get(u, v) == a.get(v, u)
                && (0..n)
                    .filter(|&w| w != u && w != v)
                    .all(|w| a.get(u, w) == a.get(v, w) && a.get(w, u) == a.get(w, v))
        };
        let (row, kept) = Self::minimal_candidates(&cells[ci].nodes, twins, |v| {
            row_bits(&individualize(v), n, |u| a.get(v, u))
        });
        self.prefix.push(row);
        let mut explored = Vec::with_capacity(kept.len());
        for v in kept {
            if self.dominated() {
                break;
            }
            if self.in_explored_orbit(&explored, v) {
                continue;
            }
            explored.push(v);
            self.tick()?;
            let refined = refine(&individualize(v), |u| a.get(v, u));
            self.path.push(v);
            let res = self.graph(depth + 1, &refined);
            self.path.pop();
            res?;
        }
        self.prefix.pop();
        Ok(())
    }
}
