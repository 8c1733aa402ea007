use rand::Rng;

use crate::graph::{BinaryMatrix, GraphKind};
use crate::Result;

use super::Walker;

pub type Entry = (usize, usize);

/// Tries the switch defined by two 1-entries `(i, j)` and `(k, l)`: if the
/// submatrix on rows `i, k` and columns `j, l` is `[[1,0],[0,1]]`, it becomes
/// `[[0,1],[1,0]]`. Directed states additionally refuse switches that would
/// set a diagonal entry.
///
/// Returns the two new 1-entries `(i, l)` and `(k, j)` when the switch is
/// applied; otherwise `a` is untouched.
pub fn switch_entries(a: &mut BinaryMatrix, kind: GraphKind, (i, j): Entry, (k, l): Entry) -> Option<(Entry, Entry)> {
    debug_assert!(a.get(i, j) && a.get(k, l));
    if i == k || j == l || a.get(i, l) || a.get(k, j) {
        return None;
    }
    if kind == GraphKind::Directed && (i == l || k == j) {
        return None;
    }
    a.set(i, j, false);
    a.set(k, l, false);
    a.set(i, l, true);
    a.set(k, j, true);
    Some(((i, l), (k, j)))
}

/// Tries to rewire the undirected edges `{p, q}` and `{r, s}` into
/// `{p, r}, {q, s}` (or `{p, s}, {q, r}` when `cross` is set). Applied only
/// when all four endpoints are distinct and neither new edge exists yet.
pub fn rewire_edges(a: &mut BinaryMatrix, (p, q): Entry, (r, s): Entry, cross: bool) -> Option<(Entry, Entry)> {
    debug_assert!(a.get(p, q) && a.get(r, s));
    let (x, y) = if cross { ((p, s), (q, r)) } else { ((p, r), (q, s)) };
    let distinct = p != r && p != s && q != r && q != s;
    if !distinct || a.get(x.0, x.1) || a.get(y.0, y.1) {
        return None;
    }
    for (u, v, value) in [(p, q, false), (r, s, false), (x.0, x.1, true), (y.0, y.1, true)] {
        a.set(u, v, value);
        a.set(v, u, value);
    }
    Some((x, y))
}

/// Number of equally likely selections the switch kernel draws from a state
/// with `m` ones (bipartite, directed) or `m` edges (undirected).
pub fn selection_count(kind: GraphKind, m: usize) -> u64 {
    let pairs = (m as u64) * (m as u64).saturating_sub(1) / 2;
    match kind {
        GraphKind::Undirected => 2 * pairs,
        _ => pairs,
    }
}

/// One step of the switch chain.
///
/// Bipartite and directed states draw an unordered pair of distinct 1-entries;
/// undirected states draw an unordered pair of distinct edges and one of the
/// two rewirings. Selections that do not give a valid state leave it
/// unchanged.
pub fn switch_step<R: Rng + ?Sized>(a: &BinaryMatrix, kind: GraphKind, rng: &mut R) -> Result<BinaryMatrix> {
    let mut walker = Walker::new(a.clone(), kind)?;
    walker.switch(rng);
    Ok(walker.into_state())
}
