//! Brute-force transitive closure: the ground truth every index is tested against.

use fixedbitset::FixedBitSet;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{BfsScratch, Dag, Direction, Vertex};
use crate::{rng_from_seed, Reachability};

/// Largest graph the oracle agrees to materialize by default.
pub const DEFAULT_VERTEX_CAP: usize = 1 << 17;

/// Self-inclusive predecessor sets: `pred[v]` holds every `u` with a path `u ⇝ v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitiveClosure {
    pred: Vec<FixedBitSet>,
    total_size: u64,
}

impl TransitiveClosure {
    pub fn n(&self) -> usize {
        self.pred.len()
    }

    pub fn pred(&self, v: Vertex) -> &FixedBitSet {
        &self.pred[v as usize]
    }

    pub fn pred_size(&self, v: Vertex) -> u64 {
        self.pred[v as usize].count_ones(..) as u64
    }

    /// Σ_v |pred(v)|, i.e. the number of reachable pairs including `(v, v)`.
    pub fn total_size(&self) -> u64 {
        self.total_size
    }

    /// Successor set of `u` (self-inclusive), computed by scanning all columns.
    pub fn succ(&self, u: Vertex) -> Vec<Vertex> {
        (0..self.n() as Vertex)
            .filter(|&v| self.pred[v as usize].contains(u as usize))
            .collect()
    }
}

impl Reachability for TransitiveClosure {
    #[inline]
    fn reaches(&self, u: Vertex, v: Vertex) -> bool {
        reach(self, u, v)
    }
}

/// Computes the closure with the default vertex cap.
pub fn compute_tc(g: &Dag) -> Result<TransitiveClosure> {
    compute_tc_with_cap(g, DEFAULT_VERTEX_CAP)
}

pub fn compute_tc_with_cap(g: &Dag, cap: usize) -> Result<TransitiveClosure> {
    let n = g.n();
    if n > cap {
        return Err(Error::OracleCap { n, cap });
    }
    let mut pred = vec![FixedBitSet::new(); n];
    for &v in g.topo() {
        let mut set = FixedBitSet::with_capacity(n);
        set.insert(v as usize);
        for &p in g.in_neighbors(v) {
            set.union_with(&pred[p as usize]);
        }
        pred[v as usize] = set;
    }
    let total_size = pred.iter().map(|s| s.count_ones(..) as u64).sum();
    Ok(TransitiveClosure { pred, total_size })
}

/// `u ⇝ v` according to the closure; always true for `u == v`.
#[inline]
pub fn reach(tc: &TransitiveClosure, u: Vertex, v: Vertex) -> bool {
    tc.pred[v as usize].contains(u as usize)
}

/// First pair, in `(u, v)` row-major order, where `answer` disagrees with the
/// closure, together with the correct answer.
pub fn first_mismatch(
    tc: &TransitiveClosure,
    mut answer: impl FnMut(Vertex, Vertex) -> bool,
) -> Option<(Vertex, Vertex, bool)> {
    let n = tc.n() as Vertex;
    for u in 0..n {
        for v in 0..n {
            let want = reach(tc, u, v);
            if answer(u, v) != want {
                return Some((u, v, want));
            }
        }
    }
    None
}

/// Plain forward search, for graphs too large for the closure.
pub fn bfs_reach(g: &Dag, scratch: &mut BfsScratch, u: Vertex, v: Vertex) -> bool {
    if u == v {
        return true;
    }
    if g.rank(u) > g.rank(v) {
        return false;
    }
    let target_rank = g.rank(v);
    scratch.run_with(g, u, u32::MAX, Direction::Forward, |x| {
        g.rank(x) < target_rank
    });
    scratch.dist(v).is_some()
}

/// Draws `count` reachable pairs `(u, v)` with `u != v`.
///
/// Graphs within the oracle cap are sampled uniformly over the closure;
/// larger graphs fall back to [`sample_positive_pairs_bfs`].
pub fn sample_positive_pairs(g: &Dag, count: usize, seed: u64) -> Result<Vec<(Vertex, Vertex)>> {
    if g.m() == 0 {
        return Err(Error::NoPositivePairs);
    }
    if g.n() <= DEFAULT_VERTEX_CAP && g.n() <= 1 << 15 {
        let tc = compute_tc(g)?;
        sample_positive_pairs_tc(&tc, count, seed)
    } else {
        sample_positive_pairs_bfs(g, count, seed)
    }
}

/// Uniform sampling over the non-trivial pairs of a materialized closure.
pub fn sample_positive_pairs_tc(
    tc: &TransitiveClosure,
    count: usize,
    seed: u64,
) -> Result<Vec<(Vertex, Vertex)>> {
    let n = tc.n();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0u64);
    for v in 0..n as Vertex {
        let last = *prefix.last().unwrap();
        prefix.push(last + tc.pred_size(v) - 1);
    }
    let total = prefix[n];
    if total == 0 {
        return Err(Error::NoPositivePairs);
    }
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let r = rng.gen_range(0..total);
        let v = prefix.partition_point(|&p| p <= r) - 1;
        let k = (r - prefix[v]) as usize;
        let u = tc.pred[v]
            .ones()
            .filter(|&u| u != v)
            .nth(k)
            .expect("prefix sums match set sizes");
        out.push((u as Vertex, v as Vertex));
    }
    Ok(out)
}

/// Visit budget for one sampling search in [`sample_positive_pairs_bfs`].
pub const BFS_SAMPLE_LIMIT: usize = 1 << 14;

/// Picks a random source, runs a forward search that stops after
/// [`BFS_SAMPLE_LIMIT`] visits, and picks one visited vertex uniformly.
/// Pairs are always reachable, but not uniform over the closure.
pub fn sample_positive_pairs_bfs(
    g: &Dag,
    count: usize,
    seed: u64,
) -> Result<Vec<(Vertex, Vertex)>> {
    if g.m() == 0 {
        return Err(Error::NoPositivePairs);
    }
    let n = g.n();
    let mut rng = rng_from_seed(seed);
    let mut scratch = BfsScratch::new(n);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = rng.gen_range(0..n) as Vertex;
        if g.out_degree(u) == 0 {
            continue;
        }
        let mut budget = BFS_SAMPLE_LIMIT;
        let visited = scratch.run_with(g, u, u32::MAX, Direction::Forward, |_| {
            budget = budget.saturating_sub(1);
            budget > 0
        });
        let pick = rng.gen_range(1..visited.len());
        out.push((u, visited[pick]));
    }
    Ok(out)
}
