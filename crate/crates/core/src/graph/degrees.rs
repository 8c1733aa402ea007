use std::fmt;

use serde::{Deserialize, Serialize};

use super::{BinaryMatrix, GraphKind};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Row,
    Column,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Row => "row",
            Side::Column => "column",
        })
    }
}

/// Margins of a state.
///
/// * bipartite: `rows` are the row sums, `cols` the column sums;
/// * undirected: `rows` are the degrees, `cols` is empty;
/// * directed: `rows` are the out-degrees, `cols` the in-degrees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDegrees")]
pub struct DegreeSequence {
    kind: GraphKind,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

#[derive(Deserialize)]
struct RawDegrees {
    kind: GraphKind,
    rows: Vec<usize>,
    #[serde(default)]
    cols: Vec<usize>,
}

impl TryFrom<RawDegrees> for DegreeSequence {
    type Error = Error;

    fn try_from(raw: RawDegrees) -> Result<Self> {
        DegreeSequence::new(raw.kind, raw.rows, raw.cols)
    }
}

impl DegreeSequence {
    /// Checks only the shape: undirected sequences carry no column part and
    /// directed sequences have as many in-degrees as out-degrees.
    /// Feasibility is the job of [`validate`].
    pub fn new(kind: GraphKind, rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        match kind {
            GraphKind::Undirected if !cols.is_empty() => {
                return Err(Error::LengthMismatch {
                    expected: 0,
                    found: cols.len(),
                })
            }
            GraphKind::Directed if cols.len() != rows.len() => {
                return Err(Error::LengthMismatch {
                    expected: rows.len(),
                    found: cols.len(),
                })
            }
            _ => {}
        }
        Ok(DegreeSequence { kind, rows, cols })
    }

    pub fn bipartite(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        Self::new(GraphKind::Bipartite, rows, cols)
    }

    pub fn undirected(degrees: Vec<usize>) -> Result<Self> {
        Self::new(GraphKind::Undirected, degrees, Vec::new())
    }

    pub fn directed(out_degrees: Vec<usize>, in_degrees: Vec<usize>) -> Result<Self> {
        Self::new(GraphKind::Directed, out_degrees, in_degrees)
    }

    /// Margins of `a` read as a state of `kind`.
    pub fn of_matrix(a: &BinaryMatrix, kind: GraphKind) -> Result<Self> {
        a.check_kind(kind)?;
        let cols = match kind {
            GraphKind::Undirected => Vec::new(),
            _ => a.col_sums(),
        };
        Self::new(kind, a.row_sums(), cols)
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    /// Matrix shape of a realization.
    pub fn shape(&self) -> (usize, usize) {
        match self.kind {
            GraphKind::Bipartite => (self.rows.len(), self.cols.len()),
            _ => (self.rows.len(), self.rows.len()),
        }
    }

    /// Number of ones in a realization.
    pub fn ones(&self) -> usize {
        self.rows.iter().sum()
    }

    /// Column sums a realization must have.
    pub fn column_targets(&self) -> &[usize] {
        match self.kind {
            GraphKind::Undirected => &self.rows,
            _ => &self.cols,
        }
    }

    pub fn is_realized_by(&self, a: &BinaryMatrix) -> bool {
        let (n, n2) = self.shape();
        a.n_rows() == n
            && a.n_cols() == n2
            && a.check_kind(self.kind).is_ok()
            && a.row_sums() == self.rows
            && a.col_sums() == self.column_targets()
    }
}

/// Why a degree sequence has no realization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum Violation {
    SumMismatch { rows: usize, cols: usize },
    OddDegreeSum { sum: usize },
    DegreeTooLarge { side: Side, index: usize, degree: usize, bound: usize },
    GaleRyser { k: usize },
    ErdosGallai { k: usize },
    Fulkerson { k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SumMismatch { rows, cols } => write!(f, "row sums total {rows} but column sums total {cols}"),
            Violation::OddDegreeSum { sum } => write!(f, "degree sum {sum} is odd"),
            Violation::DegreeTooLarge { side, index, degree, bound } => {
                write!(f, "{side} {index} has degree {degree}, more than the {bound} available")
            }
            Violation::GaleRyser { k } => write!(f, "Gale-Ryser inequality fails for the {k} largest rows"),
            Violation::ErdosGallai { k } => write!(f, "Erdos-Gallai inequality fails at k = {k}"),
            Violation::Fulkerson { k } => write!(f, "Fulkerson-Chen-Anstee inequality fails at k = {k}"),
        }
    }
}

/// Returns `Ok(())` iff `k` has at least one realization.
pub fn validate(k: &DegreeSequence) -> Result<(), Violation> {
    let rows = k.rows();
    let cols = k.cols();
    match k.kind() {
        GraphKind::Bipartite => {
            check_sums(rows, cols)?;
            check_bound(rows, Side::Row, cols.len())?;
            check_bound(cols, Side::Column, rows.len())?;
            match gale_ryser_failure(rows, cols) {
                Some(k) => Err(Violation::GaleRyser { k }),
                None => Ok(()),
            }
        }
        GraphKind::Undirected => {
            let sum: usize = rows.iter().sum();
            if sum % 2 == 1 {
                return Err(Violation::OddDegreeSum { sum });
            }
            check_bound(rows, Side::Row, rows.len().saturating_sub(1))?;
            match erdos_gallai_failure(rows) {
                Some(k) => Err(Violation::ErdosGallai { k }),
                None => Ok(()),
            }
        }
        GraphKind::Directed => {
            check_sums(rows, cols)?;
            let bound = rows.len().saturating_sub(1);
            check_bound(rows, Side::Row, bound)?;
            check_bound(cols, Side::Column, bound)?;
            match fulkerson_failure(rows, cols) {
                Some(k) => Err(Violation::Fulkerson { k }),
                None => Ok(()),
            }
        }
    }
}

fn check_sums(rows: &[usize], cols: &[usize]) -> Result<(), Violation> {
    let (r, c) = (rows.iter().sum(), cols.iter().sum());
    if r != c {
        return Err(Violation::SumMismatch { rows: r, cols: c });
    }
    Ok(())
}

fn check_bound(degrees: &[usize], side: Side, bound: usize) -> Result<(), Violation> {
    match degrees.iter().position(|&d| d > bound) {
        Some(index) => Err(Violation::DegreeTooLarge {
            side,
            index,
            degree: degrees[index],
            bound,
        }),
        None => Ok(()),
    }
}

/// First `k` (1-based) at which the Gale-Ryser inequality fails, assuming
/// equal totals.
pub(crate) fn gale_ryser_failure(rows: &[usize], cols: &[usize]) -> Option<usize> {
    let mut sorted = rows.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut lhs = 0;
    for (idx, r) in sorted.iter().enumerate() {
        let k = idx + 1;
        lhs += r;
        let rhs: usize = cols.iter().map(|&c| c.min(k)).sum();
        if lhs > rhs {
            return Some(k);
        }
    }
    None
}

pub(crate) fn erdos_gallai_failure(degrees: &[usize]) -> Option<usize> {
    let mut d = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    let n = d.len();
    let mut lhs = 0;
    for k in 1..=n {
        lhs += d[k - 1];
        let rhs = k * (k - 1) + d[k..].iter().map(|&x| x.min(k)).sum::<usize>();
        if lhs > rhs {
            return Some(k);
        }
    }
    None
}

/// Fulkerson-Chen-Anstee test for zero-diagonal digraphs, with the
/// (out, in) pairs in non-increasing lexicographic order.
pub(crate) fn fulkerson_failure(outs: &[usize], ins: &[usize]) -> Option<usize> {
    let mut pairs: Vec<(usize, usize)> = outs.iter().copied().zip(ins.iter().copied()).collect();
    pairs.sort_unstable_by(|a, b| b.cmp(a));
    let n = pairs.len();
    let mut lhs = 0;
    for k in 1..=n {
        lhs += pairs[k - 1].0;
        let rhs: usize = pairs[..k].iter().map(|p| p.1.min(k - 1)).sum::<usize>()
            + pairs[k..].iter().map(|p| p.1.min(k)).sum::<usize>();
        if lhs > rhs {
            return Some(k);
        }
    }
    None
}

/// Builds one realization of `k`: greedy Gale-Ryser filling for bipartite
/// sequences, Havel-Hakimi for undirected and Kleitman-Wang for directed.
pub fn realize(k: &DegreeSequence) -> Result<BinaryMatrix> {
    validate(k).map_err(Error::Infeasible)?;
    let a = match k.kind() {
        GraphKind::Bipartite => realize_bipartite(k.rows(), k.cols()),
        GraphKind::Undirected => realize_undirected(k.rows()),
        GraphKind::Directed => realize_directed(k.rows(), k.cols()),
    };
    if !k.is_realized_by(&a) {
        return Err(Error::VerificationFailed(format!("realization {a:?} does not match its margins")));
    }
    Ok(a)
}

/// Indices of the `count` largest entries of `residual` among `candidates`,
/// ties broken by `tiebreak` (larger first) and then by lower index.
fn largest(residual: &[usize], candidates: impl Iterator<Item = usize>, count: usize, tiebreak: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = candidates.collect();
    order.sort_by(|&a, &b| {
        residual[b]
            .cmp(&residual[a])
            .then(tiebreak[b].cmp(&tiebreak[a]))
            .then(a.cmp(&b))
    });
    order.truncate(count);
    order
}

fn realize_bipartite(rows: &[usize], cols: &[usize]) -> BinaryMatrix {
    let mut a = BinaryMatrix::zeros(rows.len(), cols.len());
    let mut residual = cols.to_vec();
    let zeros = vec![0; cols.len()];
    for (i, &r) in rows.iter().enumerate() {
        for j in largest(&residual, 0..cols.len(), r, &zeros) {
            a.set(i, j, true);
            residual[j] -= 1;
        }
    }
    a
}

fn realize_undirected(degrees: &[usize]) -> BinaryMatrix {
    let n = degrees.len();
    let mut a = BinaryMatrix::zeros(n, n);
    let mut residual = degrees.to_vec();
    let zeros = vec![0; n];
    while let Some(v) = (0..n).filter(|&v| residual[v] > 0).max_by(|&x, &y| residual[x].cmp(&residual[y]).then(y.cmp(&x))) {
        let d = residual[v];
        residual[v] = 0;
        for u in largest(&residual, (0..n).filter(|&u| u != v), d, &zeros) {
            a.set(v, u, true);
            a.set(u, v, true);
            residual[u] = residual[u].saturating_sub(1);
        }
    }
    a
}

fn realize_directed(outs: &[usize], ins: &[usize]) -> BinaryMatrix {
    let n = outs.len();
    let mut a = BinaryMatrix::zeros(n, n);
    let mut in_residual = ins.to_vec();
    let mut out_residual = outs.to_vec();
    // Kleitman-Wang: any vertex may be laid off, provided its arcs go to the
    // vertices of largest remaining in-degree (ties: larger out-degree).
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| outs[y].cmp(&outs[x]).then(ins[y].cmp(&ins[x])).then(x.cmp(&y)));
    for v in order {
        let d = out_residual[v];
        out_residual[v] = 0;
        for u in largest(&in_residual, (0..n).filter(|&u| u != v), d, &out_residual) {
            a.set(v, u, true);
            in_residual[u] = in_residual[u].saturating_sub(1);
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use std::collections::HashSet;

    fn bip(r: &[usize], c: &[usize]) -> DegreeSequence {
        DegreeSequence::bipartite(r.to_vec(), c.to_vec()).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert_eq!(validate(&bip(&[2, 2, 2, 2], &[2, 2, 2, 2])), Ok(()));
        assert_eq!(validate(&bip(&[0], &[0])), Ok(()));
        assert!(matches!(
            validate(&bip(&[3], &[1, 1])),
            Err(Violation::SumMismatch { .. }) | Err(Violation::DegreeTooLarge { .. })
        ));
        assert_eq!(
            validate(&bip(&[3], &[2, 1])),
            Err(Violation::DegreeTooLarge {
                side: Side::Row,
                index: 0,
                degree: 3,
                bound: 2
            })
        );
        assert_eq!(validate(&bip(&[2, 0], &[2, 0])), Err(Violation::GaleRyser { k: 1 }));
        assert_eq!(
            validate(&DegreeSequence::undirected(vec![1, 1, 1]).unwrap()),
            Err(Violation::OddDegreeSum { sum: 3 })
        );
        assert_eq!(
            validate(&DegreeSequence::undirected(vec![3, 3, 1, 1]).unwrap()),
            Err(Violation::ErdosGallai { k: 2 })
        );
    }

    #[test]
    fn shape_checks() {
        assert!(DegreeSequence::undirected(vec![1, 1]).is_ok());
        assert!(DegreeSequence::new(GraphKind::Undirected, vec![1, 1], vec![1]).is_err());
        assert!(DegreeSequence::directed(vec![1, 1], vec![1]).is_err());
    }

    #[test]
    fn json_form() {
        let k: DegreeSequence = serde_json::from_str(r#"{"kind":"bipartite","rows":[2,2],"cols":[1,1,1,1]}"#).unwrap();
        assert_eq!(k, bip(&[2, 2], &[1, 1, 1, 1]));
        let u: DegreeSequence = serde_json::from_str(r#"{"kind":"undirected","rows":[1,1]}"#).unwrap();
        assert_eq!(u.kind(), GraphKind::Undirected);
        assert!(serde_json::from_str::<DegreeSequence>(r#"{"kind":"directed","rows":[1,1],"cols":[1]}"#).is_err());
        assert_eq!(serde_json::to_string(&u).unwrap(), r#"{"kind":"undirected","rows":[1,1],"cols":[]}"#);
    }

    #[test]
    fn realize_examples() {
        let k = bip(&[2, 2, 2, 2], &[2, 2, 2, 2]);
        assert!(k.is_realized_by(&realize(&k).unwrap()));

        let u = DegreeSequence::undirected(vec![2, 2, 3, 2, 1]).unwrap();
        let a = realize(&u).unwrap();
        a.check_kind(GraphKind::Undirected).unwrap();
        assert_eq!(a.row_sums(), vec![2, 2, 3, 2, 1]);

        let d = DegreeSequence::directed(vec![1, 1, 1], vec![1, 1, 1]).unwrap();
        let c = realize(&d).unwrap();
        // one of the two 3-cycles
        let cycles = [
            BinaryMatrix::from_rows(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]).unwrap(),
            BinaryMatrix::from_rows(&[[0, 0, 1], [1, 0, 0], [0, 1, 0]]).unwrap(),
        ];
        assert!(cycles.contains(&c));

        assert!(matches!(realize(&bip(&[3], &[1, 1])), Err(Error::Infeasible(_))));
    }

    /// Every 0/1 matrix of the given shape, filtered by `keep`.
    fn all_matrices(n: usize, n2: usize, keep: impl Fn(&BinaryMatrix) -> bool) -> Vec<BinaryMatrix> {
        (0u32..1 << (n * n2))
            .map(|bits| BinaryMatrix::from_fn(n, n2, |i, j| bits >> (i * n2 + j) & 1 == 1))
            .filter(|m| keep(m))
            .collect()
    }

    #[test]
    fn bipartite_feasibility_matches_enumeration() {
        for n in 1..=4usize {
            for n2 in 1..=4usize {
                let realizable: HashSet<(Vec<usize>, Vec<usize>)> = all_matrices(n, n2, |_| true)
                    .iter()
                    .map(|m| (m.row_sums(), m.col_sums()))
                    .collect();
                for rows in (0..n).map(|_| 0..=3usize).multi_cartesian_product() {
                    for cols in (0..n2).map(|_| 0..=3usize).multi_cartesian_product() {
                        let k = bip(&rows, &cols);
                        let expected = realizable.contains(&(rows.clone(), cols.clone()));
                        assert_eq!(validate(&k).is_ok(), expected, "{rows:?} {cols:?}");
                        if expected {
                            assert!(k.is_realized_by(&realize(&k).unwrap()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn undirected_feasibility_matches_enumeration() {
        for n in 1..=5usize {
            let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
            let realizable: HashSet<Vec<usize>> = (0u32..1 << pairs.len())
                .map(|bits| {
                    let mut deg = vec![0; n];
                    for (e, &(u, v)) in pairs.iter().enumerate() {
                        if bits >> e & 1 == 1 {
                            deg[u] += 1;
                            deg[v] += 1;
                        }
                    }
                    deg
                })
                .collect();
            for degrees in (0..n).map(|_| 0..=4usize).multi_cartesian_product() {
                let k = DegreeSequence::undirected(degrees.clone()).unwrap();
                let expected = realizable.contains(&degrees);
                assert_eq!(validate(&k).is_ok(), expected, "{degrees:?}");
                if expected {
                    assert!(k.is_realized_by(&realize(&k).unwrap()));
                }
            }
        }
    }

    #[test]
    fn directed_feasibility_matches_enumeration() {
        for n in 1..=4usize {
            let realizable: HashSet<(Vec<usize>, Vec<usize>)> =
                all_matrices(n, n, |m| m.check_kind(GraphKind::Directed).is_ok())
                    .iter()
                    .map(|m| (m.row_sums(), m.col_sums()))
                    .collect();
            for outs in (0..n).map(|_| 0..=3usize).multi_cartesian_product() {
                for ins in (0..n).map(|_| 0..=3usize).multi_cartesian_product() {
                    let k = DegreeSequence::directed(outs.clone(), ins.clone()).unwrap();
                    let expected = realizable.contains(&(outs.clone(), ins.clone()));
                    assert_eq!(validate(&k).is_ok(), expected, "{outs:?} {ins:?}");
                    if expected {
                        assert!(k.is_realized_by(&realize(&k).unwrap()), "{outs:?} {ins:?}");
                    }
                }
            }
        }
    }
}
