//! Monte Carlo kernels and seeded chain runners.
//!
//! Randomness comes from [`ChainRng`] (ChaCha8) seeded with a `u64`. Given
//! the seed, a trajectory is reproducible bit for bit. Replica `r` of a
//! sample with master seed `s` uses the seed [`replica_seed`]`(s, r)`, the
//! `r + 1`-th output of a SplitMix64 stream started at `s`, so replicas can
//! run in any order or in parallel without changing the output.

mod curveball;
mod preprocess;
mod switch;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use curveball::{apply_trade, curveball_step, draw_allocation, trade_context, TradeContext};
pub use preprocess::{preprocess, preprocess_bipartite, preprocess_graph};
pub use switch::{rewire_edges, selection_count, switch_entries, switch_step, Entry};

pub(crate) use curveball::binomial;

use crate::graph::{realize, BinaryMatrix, DegreeSequence, GraphKind};
use crate::{Error, Result};

pub type ChainRng = rand_chacha::ChaCha8Rng;

pub fn chain_rng(seed: u64) -> ChainRng {
    ChainRng::seed_from_u64(seed)
}

/// Seed of replica `index` under master seed `master` (SplitMix64).
pub fn replica_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainKind {
    Switch,
    Curveball,
}

impl fmt::Display for ChainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainKind::Switch => "switch",
            ChainKind::Curveball => "curveball",
        })
    }
}

impl FromStr for ChainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "switch" => Ok(ChainKind::Switch),
            "curveball" => Ok(ChainKind::Curveball),
            other => Err(Error::Parse(format!("unknown chain `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub chain: ChainKind,
    pub steps: u64,
    pub preprocess: bool,
    pub seed: u64,
}

/// A state under a chain, with a cached list of its ones (or edges) for the
/// switch kernel.
#[derive(Debug, Clone)]
pub struct Walker {
    state: BinaryMatrix,
    kind: GraphKind,
    /// 1-entries for bipartite and directed states, edges `(u, v)` with
    /// `u < v` for undirected states. `None` after a trade.
    edges: Option<Vec<Entry>>,
    #[cfg(debug_assertions)]
    margins: (Vec<usize>, Vec<usize>),
}

impl Walker {
    pub fn new(state: BinaryMatrix, kind: GraphKind) -> Result<Self> {
        state.check_kind(kind)?;
        Ok(Walker {
            #[cfg(debug_assertions)]
            margins: (state.row_sums(), state.col_sums()),
            state,
            kind,
            edges: None,
        })
    }

    pub fn state(&self) -> &BinaryMatrix {
        &self.state
    }

    pub fn into_state(self) -> BinaryMatrix {
        self.state
    }

    fn edges(&mut self) -> &mut Vec<Entry> {
        let (state, kind) = (&self.state, self.kind);
        self.edges.get_or_insert_with(|| match kind {
            GraphKind::Undirected => state.ones().filter(|&(u, v)| u < v).collect(),
            _ => state.ones().collect(),
        })
    }

    #[cfg(debug_assertions)]
    fn check_margins(&self) {
        debug_assert_eq!(self.state.row_sums(), self.margins.0);
        debug_assert_eq!(self.state.col_sums(), self.margins.1);
    }

    /// One switch-chain step; returns whether the state changed.
    pub fn switch<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let kind = self.kind;
        let m = self.edges().len();
        if m < 2 {
            return false;
        }
        let x = rng.gen_range(0..m);
        let mut y = rng.gen_range(0..m - 1);
        if y >= x {
            y += 1;
        }
        let (e1, e2) = {
            let edges = self.edges();
            (edges[x], edges[y])
        };
        let applied = match kind {
            GraphKind::Undirected => {
                let cross = rng.gen::<bool>();
                rewire_edges(&mut self.state, e1, e2, cross)
            }
            _ => switch_entries(&mut self.state, kind, e1, e2),
        };
        let Some((f1, f2)) = applied else {
            return false;
        };
        let norm = |(u, v): Entry| if kind == GraphKind::Undirected { (u.min(v), u.max(v)) } else { (u, v) };
        let edges = self.edges();
        edges[x] = norm(f1);
        edges[y] = norm(f2);
        #[cfg(debug_assertions)]
        self.check_margins();
        true
    }

    /// One Curveball step; returns whether the state changed.
    pub fn trade<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let n = self.state.n_rows();
        if n < 2 {
            return false;
        }
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let ctx = trade_context(&self.state, i, j, self.kind);
        let mut to_i = draw_allocation(&ctx, rng);
        apply_trade(&mut self.state, &ctx, &to_i, self.kind);
        #[cfg(debug_assertions)]
        self.check_margins();
        to_i.sort_unstable();
        let changed = to_i != ctx.s_i;
        if changed {
            self.edges = None;
        }
        changed
    }

    pub fn step<R: Rng + ?Sized>(&mut self, chain: ChainKind, rng: &mut R) -> bool {
        match chain {
            ChainKind::Switch => self.switch(rng),
            ChainKind::Curveball => self.trade(rng),
        }
    }
}

/// Runs the preprocessing step (if enabled) and then `cfg.steps` kernel steps
/// from `start`, with a generator seeded from `cfg.seed`.
pub fn run_chain(start: &BinaryMatrix, cfg: &ChainConfig, kind: GraphKind) -> Result<BinaryMatrix> {
    start.check_kind(kind)?;
    let mut rng = chain_rng(cfg.seed);
    let state = if cfg.preprocess {
        preprocess(start, kind, &mut rng)?
    } else {
        start.clone()
    };
    let mut walker = Walker::new(state, kind)?;
    for _ in 0..cfg.steps {
        walker.step(cfg.chain, &mut rng);
    }
    Ok(walker.into_state())
}

/// Independent replicas from one realization of a degree sequence.
#[derive(Debug, Clone)]
pub struct Samples {
    start: BinaryMatrix,
    kind: GraphKind,
    cfg: ChainConfig,
    next: u64,
    count: u64,
}

impl Samples {
    pub fn start(&self) -> &BinaryMatrix {
        &self.start
    }

    fn replica(&self, index: u64) -> BinaryMatrix {
        let cfg = ChainConfig {
            seed: replica_seed(self.cfg.seed, index),
            ..self.cfg
        };
        run_chain(&self.start, &cfg, self.kind).expect("start state was validated")
    }

    /// All remaining replicas, computed in parallel, in replica order.
    pub fn collect_parallel(self) -> Vec<BinaryMatrix> {
        (self.next..self.count).into_par_iter().map(|r| self.replica(r)).collect()
    }
}

impl Iterator for Samples {
    type Item = BinaryMatrix;

    fn next(&mut self) -> Option<BinaryMatrix> {
        if self.next >= self.count {
            return None;
        }
        let out = self.replica(self.next);
        self.next += 1;
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.count - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Samples {}

/// `count` replicas, each the result of [`run_chain`] from the same
/// realization of `k` with seed [`replica_seed`]`(cfg.seed, r)`.
pub fn sample(k: &DegreeSequence, count: u64, cfg: &ChainConfig) -> Result<Samples> {
    sample_from(realize(k)?, k.kind(), count, cfg)
}

/// Like [`sample`], starting every replica from `start`.
pub fn sample_from(start: BinaryMatrix, kind: GraphKind, count: u64, cfg: &ChainConfig) -> Result<Samples> {
    start.check_kind(kind)?;
    Ok(Samples {
        start,
        kind,
        cfg: *cfg,
        next: 0,
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn cfg(chain: ChainKind, steps: u64, preprocess: bool, seed: u64) -> ChainConfig {
        ChainConfig {
            chain,
            steps,
            preprocess,
            seed,
        }
    }

    fn k2222() -> DegreeSequence {
        DegreeSequence::bipartite(vec![2; 4], vec![2; 4]).unwrap()
    }

    #[test]
    fn zero_steps_is_identity() {
        let a = realize(&k2222()).unwrap();
        for chain in [ChainKind::Switch, ChainKind::Curveball] {
            assert_eq!(run_chain(&a, &cfg(chain, 0, false, 1), GraphKind::Bipartite).unwrap(), a);
        }
    }

    #[test]
    fn same_seed_same_output() {
        let a = realize(&k2222()).unwrap();
        for chain in [ChainKind::Switch, ChainKind::Curveball] {
            let c = cfg(chain, 100, true, 42);
            assert_eq!(
                run_chain(&a, &c, GraphKind::Bipartite).unwrap(),
                run_chain(&a, &c, GraphKind::Bipartite).unwrap()
            );
        }
        let serial: Vec<_> = sample(&k2222(), 20, &cfg(ChainKind::Switch, 10, true, 3)).unwrap().collect();
        let parallel = sample(&k2222(), 20, &cfg(ChainKind::Switch, 10, true, 3)).unwrap().collect_parallel();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn empty_sample() {
        assert_eq!(sample(&k2222(), 0, &cfg(ChainKind::Switch, 5, false, 0)).unwrap().count(), 0);
        let bad = DegreeSequence::bipartite(vec![3], vec![1, 1]).unwrap();
        assert!(matches!(sample(&bad, 1, &cfg(ChainKind::Switch, 5, false, 0)), Err(Error::Infeasible(_))));
    }

    #[test]
    fn replica_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|r| replica_seed(5, r)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(replica_seed(5, 0), replica_seed(6, 0));
    }

    #[test]
    fn parse_chain() {
        assert_eq!("switch".parse::<ChainKind>().unwrap(), ChainKind::Switch);
        assert_eq!("curveball".parse::<ChainKind>().unwrap(), ChainKind::Curveball);
        assert!("hex".parse::<ChainKind>().is_err());
    }

    fn arb_state() -> impl Strategy<Value = (GraphKind, BinaryMatrix)> {
        (0usize..3, 2usize..7, 2usize..7, any::<u64>()).prop_map(|(k, n, n2, bits)| match k {
            0 => (GraphKind::Bipartite, BinaryMatrix::from_fn(n, n2, |i, j| bits >> ((i * n2 + j) % 64) & 1 == 1)),
            1 => (
                GraphKind::Undirected,
                BinaryMatrix::from_fn(n, n, |i, j| i != j && bits >> (i.min(j) * n + i.max(j)) & 1 == 1),
            ),
            _ => (GraphKind::Directed, BinaryMatrix::from_fn(n, n, |i, j| i != j && bits >> (i * n + j) & 1 == 1)),
        })
    }

    proptest! {
        #[test]
        fn kernels_preserve_margins_and_kind((kind, a) in arb_state(), seed in any::<u64>(), preprocess in any::<bool>()) {
            for chain in [ChainKind::Switch, ChainKind::Curveball] {
                let b = run_chain(&a, &cfg(chain, 30, preprocess, seed), kind).unwrap();
                prop_assert_eq!(b.row_sums(), a.row_sums());
                prop_assert_eq!(b.col_sums(), a.col_sums());
                prop_assert!(b.check_kind(kind).is_ok());
            }
        }

        #[test]
        fn trade_touches_only_its_rows((kind, a) in arb_state(), seed in any::<u64>()) {
            let mut rng = chain_rng(seed);
            let n = a.n_rows();
            let i = rng.gen_range(0..n);
            let j = (i + 1 + rng.gen_range(0..n - 1)) % n;
            let ctx = trade_context(&a, i, j, kind);
            let mut b = a.clone();
            let to_i = draw_allocation(&ctx, &mut rng);
            apply_trade(&mut b, &ctx, &to_i, kind);
            let tradeable = ctx.tradeable();
            for r in 0..a.n_rows() {
                for c in 0..a.n_cols() {
                    let inside = (r == i || r == j) && tradeable.contains(&c)
                        || kind == GraphKind::Undirected && (c == i || c == j) && tradeable.contains(&r);
                    if !inside {
                        prop_assert_eq!(a.get(r, c), b.get(r, c), "({}, {})", r, c);
                    }
                }
            }
        }
    }
}
