use rand::Rng;
use serde::Serialize;

use crate::graph::{BinaryMatrix, GraphKind};
use crate::Result;

use super::Walker;

/// Tradeable ones of a row pair.
///
/// `s_i` holds the columns where row `row_i` has a one and row `row_j` a
/// zero; `s_j` the reverse. For simple graphs the columns `row_i` and `row_j`
/// are never tradeable, which keeps the diagonal empty (and, for undirected
/// graphs, the edge between the two nodes fixed).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TradeContext {
    pub row_i: usize,
    pub row_j: usize,
    pub s_i: Vec<usize>,
    pub s_j: Vec<usize>,
}

impl TradeContext {
    /// `s_i` followed by `s_j`.
    pub fn tradeable(&self) -> Vec<usize> {
        self.s_i.iter().chain(&self.s_j).copied().collect()
    }

    /// Number of ways to hand `s_i.len()` of the tradeable columns to row `i`.
    pub fn allocations(&self) -> u64 {
        binomial((self.s_i.len() + self.s_j.len()) as u64, self.s_i.len() as u64)
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, t| acc * (n - t) / (t + 1))
}

pub fn trade_context(a: &BinaryMatrix, i: usize, j: usize, kind: GraphKind) -> TradeContext {
    debug_assert_ne!(i, j);
    let excluded = |c: usize| kind != GraphKind::Bipartite && (c == i || c == j);
    let mut ctx = TradeContext {
        row_i: i,
        row_j: j,
        s_i: Vec::new(),
        s_j: Vec::new(),
    };
    for c in (0..a.n_cols()).filter(|&c| !excluded(c)) {
        match (a.get(i, c), a.get(j, c)) {
            (true, false) => ctx.s_i.push(c),
            (false, true) => ctx.s_j.push(c),
            _ => {}
        }
    }
    ctx
}

/// Rewrites rows `row_i` and `row_j` so that `row_i` holds ones exactly on
/// `to_i` among the tradeable columns and `row_j` on the rest. Undirected
/// states are updated symmetrically.
pub fn apply_trade(a: &mut BinaryMatrix, ctx: &TradeContext, to_i: &[usize], kind: GraphKind) {
    debug_assert_eq!(to_i.len(), ctx.s_i.len());
    let (i, j) = (ctx.row_i, ctx.row_j);
    for c in ctx.s_i.iter().chain(&ctx.s_j).copied() {
        let gets_i = to_i.contains(&c);
        a.set(i, c, gets_i);
        a.set(j, c, !gets_i);
        if kind == GraphKind::Undirected {
            a.set(c, i, gets_i);
            a.set(c, j, !gets_i);
        }
    }
}

/// Draws the columns row `i` keeps after a trade: `s_i.len()` of the
/// tradeable columns, uniformly, by a partial Fisher-Yates shuffle.
pub fn draw_allocation<R: Rng + ?Sized>(ctx: &TradeContext, rng: &mut R) -> Vec<usize> {
    let mut pool = ctx.tradeable();
    let take = ctx.s_i.len();
    for t in 0..take {
        let r = rng.gen_range(t..pool.len());
        pool.swap(t, r);
    }
    pool.truncate(take);
    pool
}

/// One step of the Curveball chain: a uniformly drawn unordered row pair
/// trades its tradeable ones, every allocation (including the current one)
/// being equally likely.
pub fn curveball_step<R: Rng + ?Sized>(a: &BinaryMatrix, kind: GraphKind, rng: &mut R) -> Result<BinaryMatrix> {
    let mut walker = Walker::new(a.clone(), kind)?;
    walker.trade(rng);
    Ok(walker.into_state())
}
