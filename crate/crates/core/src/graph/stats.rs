use super::{BinaryMatrix, GraphKind};
use crate::{Error, Result};

/// Whether the underlying undirected graph has a single connected component.
///
/// Bipartite states have `n_rows + n_cols` nodes; isolated nodes count as
/// components of their own. The graph with no nodes is connected.
pub fn is_connected(a: &BinaryMatrix, kind: GraphKind) -> bool {
    let (n, offset) = match kind {
        GraphKind::Bipartite => (a.n_rows() + a.n_cols(), a.n_rows()),
        _ => (a.n_rows(), 0),
    };
    if n == 0 {
        return true;
    }
    let mut adj = vec![Vec::new(); n];
    for (i, j) in a.ones() {
        let (u, v) = (i, j + offset);
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                stack.push(v);
            }
        }
    }
    reached == n
}

/// Number of triangles in a simple undirected graph.
pub fn triangle_count(a: &BinaryMatrix, kind: GraphKind) -> Result<usize> {
    if kind != GraphKind::Undirected {
        return Err(Error::WrongKind {
            expected: GraphKind::Undirected,
            found: kind,
        });
    }
    a.check_kind(kind)?;
    let n = a.n_rows();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            if !a.get(i, j) {
                continue;
            }
            count += (j + 1..n).filter(|&k| a.get(i, k) && a.get(j, k)).count();
        }
    }
    Ok(count)
}
