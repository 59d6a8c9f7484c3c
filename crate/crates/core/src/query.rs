//! Query answering on top of the indexes: GRAIL-pruned online search, the
//! two backbone query schemes, and query workload generation.

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::backbone::{access_side, AccessScratch, Backbone, BackboneGraph, Mode};
use crate::error::{Error, Result};
use crate::graph::{BfsScratch, Dag, Direction, Vertex};
use crate::tc::{bfs_reach, compute_tc, sample_positive_pairs, TransitiveClosure};
use crate::{rng_from_seed, Reachability};

pub use crate::labels::{query_hop, query_hop_exhaustive};

/// `c` random post-order interval labels per vertex.
///
/// In every traversal `low(u)` is the smallest post-order number among
/// everything `u` reaches, so `u ⇝ v` forces `[low(v), post(v)] ⊆ [low(u), post(u)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrailLabels {
    pub c: usize,
    /// `intervals[v * c + t] = (low, post)` of vertex `v` in traversal `t`.
    pub intervals: Vec<(u32, u32)>,
}

impl GrailLabels {
    pub fn n(&self) -> usize {
        self.intervals.len() / self.c.max(1)
    }

    #[inline]
    pub fn of(&self, v: Vertex) -> &[(u32, u32)] {
        let s = v as usize * self.c;
        &self.intervals[s..s + self.c]
    }

    /// `I_v ⊆ I_u` in every traversal. False proves `u` cannot reach `v`.
    #[inline]
    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        self.of(u)
            .iter()
            .zip(self.of(v))
            .all(|(a, b)| a.0 <= b.0 && b.1 <= a.1)
    }
}

pub fn grail_build(g: &Dag, c: usize, seed: u64) -> Result<GrailLabels> {
    if c == 0 {
        return Err(Error::InvalidParameter("c must be at least 1".into()));
    }
    let n = g.n();
    let mut intervals = vec![(0u32, 0u32); n * c];
    let mut visited = vec![false; n];
    for t in 0..c {
        let mut rng = rng_from_seed(seed ^ t as u64);
        visited.iter_mut().for_each(|x| *x = false);
        let mut roots: Vec<Vertex> = g.vertices().filter(|&v| g.in_degree(v) == 0).collect();
        roots.shuffle(&mut rng);
        let mut counter = 0u32;
        let mut stack: Vec<(Vertex, Vec<Vertex>, usize)> = Vec::new();
        for r in roots {
            visited[r as usize] = true;
            let mut kids = g.out_neighbors(r).to_vec();
            kids.shuffle(&mut rng);
            stack.push((r, kids, 0));
            while let Some(top) = stack.last_mut() {
                if top.2 < top.1.len() {
                    let w = top.1[top.2];
                    top.2 += 1;
                    if !visited[w as usize] {
                        visited[w as usize] = true;
                        let mut kids = g.out_neighbors(w).to_vec();
                        kids.shuffle(&mut rng);
                        stack.push((w, kids, 0));
                    }
                } else {
                    let (v, _, _) = stack.pop().expect("non-empty");
                    counter += 1;
                    let low = g
                        .out_neighbors(v)
                        .iter()
                        .map(|&w| intervals[w as usize * c + t].0)
                        .fold(counter, u32::min);
                    intervals[v as usize * c + t] = (low, counter);
                }
            }
        }
    }
    Ok(GrailLabels { c, intervals })
}

/// Reusable depth-first searcher with GRAIL pruning.
pub struct OnlineSearcher {
    stamp: Vec<u32>,
    epoch: u32,
    stack: Vec<Vertex>,
    /// Vertices whose neighbors were scanned by the last query.
    pub expansions: usize,
}

impl OnlineSearcher {
    pub fn new(n: usize) -> Self {
        OnlineSearcher {
            stamp: vec![0; n],
            epoch: 0,
            stack: Vec::new(),
            expansions: 0,
        }
    }

    fn next_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
    }

    pub fn query(&mut self, g: &Dag, gl: &GrailLabels, u: Vertex, v: Vertex) -> bool {
        self.expansions = 0;
        if u == v {
            return true;
        }
        if !gl.contains(u, v) {
            return false;
        }
        self.next_epoch();
        self.stack.clear();
        self.stack.push(u);
        self.stamp[u as usize] = self.epoch;
        while let Some(x) = self.stack.pop() {
            self.expansions += 1;
            for &w in g.out_neighbors(x) {
                if w == v {
                    return true;
                }
                if self.stamp[w as usize] != self.epoch {
                    self.stamp[w as usize] = self.epoch;
                    if gl.contains(w, v) {
                        self.stack.push(w);
                    }
                }
            }
        }
        false
    }
}

/// One-off GRAIL-pruned search; allocates its own scratch.
pub fn query_online(g: &Dag, gl: &GrailLabels, u: Vertex, v: Vertex) -> bool {
    OnlineSearcher::new(g.n()).query(g, gl, u, v)
}

/// Which index answers reachability among backbone vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerKind {
    Brute,
    Dl,
    Tree,
}

impl InnerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InnerKind::Brute => "brute",
            InnerKind::Dl => "dl",
            InnerKind::Tree => "tree",
        }
    }

    pub fn parse(s: &str) -> Option<InnerKind> {
        match s {
            "brute" => Some(InnerKind::Brute),
            "dl" => Some(InnerKind::Dl),
            "tree" => Some(InnerKind::Tree),
            _ => None,
        }
    }
}

/// Builds an index of the given kind over the backbone graph (local ids).
pub fn build_inner(
    bg: &BackboneGraph,
    kind: InnerKind,
) -> Result<Box<dyn Reachability + Send + Sync>> {
    let g = &bg.dag;
    Ok(match kind {
        InnerKind::Brute => Box::new(compute_tc(g)?) as Box<dyn Reachability + Send + Sync>,
        InnerKind::Dl => Box::new(crate::dl::dl_build(g, &crate::dl::rank_vertices(g))),
        InnerKind::Tree => {
            let t =
                crate::tree_cover::build_tree(g, &crate::tree_cover::exact_weights_streaming(g));
            Box::new(crate::tree_cover::TreeIndex::build(g, t))
        }
    })
}

/// Everything the backbone query schemes need besides the graph itself.
pub struct ScarabIndex {
    pub backbone: Backbone,
    pub bg: BackboneGraph,
    pub member: FixedBitSet,
    /// Access vertices per original vertex, ascending original ids.
    pub b_out: Vec<Vec<Vertex>>,
    pub b_in: Vec<Vec<Vertex>>,
    pub inner: Box<dyn Reachability + Send + Sync>,
    pub inner_kind: InnerKind,
    pub grail: GrailLabels,
}

impl std::fmt::Debug for ScarabIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScarabIndex")
            .field("backbone", &self.backbone)
            .field("inner_kind", &self.inner_kind)
            .finish_non_exhaustive()
    }
}

impl ScarabIndex {
    /// Materializes access sets (dominated members removed when `reduce`)
    /// and the inner index. The backbone must be two-side.
    pub fn build(
        g: &Dag,
        backbone: Backbone,
        inner_kind: InnerKind,
        grail: GrailLabels,
        reduce: bool,
    ) -> Result<ScarabIndex> {
        if backbone.mode != Mode::TwoSide {
            return Err(Error::InvalidParameter(
                "query schemes need a two-side backbone".into(),
            ));
        }
        let bg = backbone.graph(g.n());
        let inner = build_inner(&bg, inner_kind)?;
        let member = backbone.is_member_mask(g.n());
        let mut acc = AccessScratch::new(g.n());
        let eps = backbone.epsilon;
        let mut b_out = Vec::with_capacity(g.n());
        let mut b_in = Vec::with_capacity(g.n());
        for v in g.vertices() {
            b_out.push(access_side(
                g,
                &member,
                eps,
                v,
                Direction::Forward,
                reduce,
                &mut acc,
            ));
            b_in.push(access_side(
                g,
                &member,
                eps,
                v,
                Direction::Reverse,
                reduce,
                &mut acc,
            ));
        }
        Ok(ScarabIndex {
            backbone,
            bg,
            member,
            b_out,
            b_in,
            inner,
            inner_kind,
            grail,
        })
    }

    pub fn epsilon(&self) -> u32 {
        self.backbone.epsilon
    }

    #[inline]
    fn is_backbone(&self, v: Vertex) -> bool {
        self.member.contains(v as usize)
    }

    pub fn access_entries(&self) -> usize {
        self.b_out.iter().chain(&self.b_in).map(Vec::len).sum()
    }
}

/// How a backbone query was settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    SameVertex,
    GrailReject,
    LocalSearch,
    Join,
}

/// Per-thread scratch for [`scarab_query`] and [`scarab_online_search`].
pub struct ScarabScratch {
    fwd: BfsScratch,
    rev: BfsScratch,
    target: Vec<u32>,
    seen: Vec<u32>,
    epoch: u32,
    stack: Vec<u32>,
}

impl ScarabScratch {
    pub fn new(idx: &ScarabIndex) -> Self {
        let n = idx.member.len();
        let k = idx.bg.global.len();
        ScarabScratch {
            fwd: BfsScratch::new(n),
            rev: BfsScratch::new(n),
            target: vec![0; k],
            seen: vec![0; k],
            epoch: 0,
            stack: Vec::new(),
        }
    }

    fn next_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.target.iter_mut().for_each(|s| *s = 0);
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
    }
}

/// Local search first, then the pairwise join over access vertices.
pub fn scarab_query(
    g: &Dag,
    idx: &ScarabIndex,
    s: &mut ScarabScratch,
    u: Vertex,
    v: Vertex,
) -> bool {
    scarab_query_traced(g, idx, s, u, v).0
}

pub fn scarab_query_traced(
    g: &Dag,
    idx: &ScarabIndex,
    s: &mut ScarabScratch,
    u: Vertex,
    v: Vertex,
) -> (bool, Resolution) {
    if u == v {
        return (true, Resolution::SameVertex);
    }
    let gl = &idx.grail;
    if !gl.contains(u, v) {
        return (false, Resolution::GrailReject);
    }
    let eps = idx.epsilon();
    let halt = |x: Vertex| !idx.is_backbone(x);
    s.fwd
        .run_with(g, u, eps.div_ceil(2), Direction::Forward, halt);
    let back = s.rev.run_with(g, v, eps / 2, Direction::Reverse, halt);
    if back.iter().any(|&x| s.fwd.dist(x).is_some()) {
        return (true, Resolution::LocalSearch);
    }
    for &x in &idx.b_out[u as usize] {
        if !gl.contains(x, v) {
            continue;
        }
        let lx = idx
            .bg
            .local(x)
            .expect("access vertices are backbone members");
        for &y in &idx.b_in[v as usize] {
            if gl.contains(x, y) && idx.inner.reaches(lx, idx.bg.local(y).expect("member")) {
                return (true, Resolution::Join);
            }
        }
    }
    (false, Resolution::Join)
}

/// Online variant: flag backbone vertices near `v`, then run one shared
/// search through the backbone from the backbone vertices near `u`.
pub fn scarab_online_search(
    g: &Dag,
    idx: &ScarabIndex,
    s: &mut ScarabScratch,
    u: Vertex,
    v: Vertex,
) -> bool {
    if u == v {
        return true;
    }
    let gl = &idx.grail;
    if !gl.contains(u, v) {
        return false;
    }
    let eps = idx.epsilon();
    s.next_epoch();
    let epoch = s.epoch;

    // Upstream of v: only vertices u might reach matter.
    let up_ok = |y: Vertex| gl.contains(u, y);
    let back = s.rev.run_with(g, v, eps, Direction::Reverse, |y| {
        up_ok(y) && !idx.is_backbone(y)
    });
    for &y in back {
        if !up_ok(y) {
            continue;
        }
        if y == u {
            return true;
        }
        if let Some(l) = idx.bg.local(y) {
            s.target[l as usize] = epoch;
        }
    }

    // Downstream of u: only vertices that might reach v matter.
    let down_ok = |x: Vertex| gl.contains(x, v);
    let fwd = s.fwd.run_with(g, u, eps, Direction::Forward, |x| {
        down_ok(x) && !idx.is_backbone(x)
    });
    let bdag = &idx.bg.dag;
    for &x in fwd {
        if !down_ok(x) {
            continue;
        }
        if x == v {
            return true;
        }
        let Some(lx) = idx.bg.local(x) else { continue };
        if s.seen[lx as usize] == epoch {
            continue;
        }
        s.seen[lx as usize] = epoch;
        s.stack.clear();
        s.stack.push(lx);
        while let Some(l) = s.stack.pop() {
            if s.target[l as usize] == epoch {
                return true;
            }
            for &w in bdag.out_neighbors(l) {
                if s.seen[w as usize] != epoch && down_ok(idx.bg.global[w as usize]) {
                    s.seen[w as usize] = epoch;
                    s.stack.push(w);
                }
            }
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WorkloadKind {
    Equal,
    Random,
}

impl WorkloadKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WorkloadKind::Equal => "equal",
            WorkloadKind::Random => "random",
        }
    }

    pub fn parse(s: &str) -> Option<WorkloadKind> {
        match s {
            "equal" => Some(WorkloadKind::Equal),
            "random" => Some(WorkloadKind::Random),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryWorkload {
    pub pairs: Vec<(Vertex, Vertex)>,
    pub kind: WorkloadKind,
    pub seed: u64,
}

/// Attempts allowed per requested negative pair before giving up.
const NEGATIVE_ATTEMPTS: usize = 1000;

/// `Random`: uniform id pairs. `Equal`: `⌈count/2⌉` reachable pairs from the
/// closure sampler and the rest unreachable pairs found by rejection, shuffled.
pub fn make_workload(
    g: &Dag,
    kind: WorkloadKind,
    count: usize,
    seed: u64,
) -> Result<QueryWorkload> {
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    let n = g.n();
    let mut rng = rng_from_seed(seed);
    let pairs = match kind {
        WorkloadKind::Random => (0..count)
            .map(|_| (rng.gen_range(0..n) as Vertex, rng.gen_range(0..n) as Vertex))
            .collect(),
        WorkloadKind::Equal => {
            let positives = count.div_ceil(2);
            let mut pairs = sample_positive_pairs(g, positives, seed)?;
            let tc: Option<TransitiveClosure> = if n <= 1 << 15 {
                Some(compute_tc(g)?)
            } else {
                None
            };
            let mut bfs = BfsScratch::new(n);
            let mut attempts = 0;
            while pairs.len() < count {
                attempts += 1;
                if attempts > NEGATIVE_ATTEMPTS * count {
                    return Err(Error::InvalidParameter(
                        "graph has too few unreachable pairs for an equal workload".into(),
                    ));
                }
                let a = rng.gen_range(0..n) as Vertex;
                let b = rng.gen_range(0..n) as Vertex;
                let reachable = match &tc {
                    Some(tc) => tc.reaches(a, b),
                    None => bfs_reach(g, &mut bfs, a, b),
                };
                if !reachable {
                    pairs.push((a, b));
                }
            }
            pairs.shuffle(&mut rng);
            pairs
        }
    };
    Ok(QueryWorkload { pairs, kind, seed })
}

/// Cost figures of one build-and-query run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub build_ms: u64,
    pub index_entries: u64,
    pub index_bytes: u64,
    pub query_ns_total: u64,
    pub positives_answered: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backbone::{discover_backbone, DiscoveryParams};
    use crate::fixtures::{all, chain3, chain4, diamond, v};
    use crate::graph::random_dag;
    use crate::tc::reach;

    fn chain4_index(reduce: bool) -> (Dag, ScarabIndex) {
        let g = chain4();
        let b = Backbone {
            epsilon: 1,
            mode: Mode::TwoSide,
            vertices: vec![v(2), v(3)],
            edges: vec![(v(2), v(3))],
        };
        let gl = grail_build(&g, 2, 0).unwrap();
        let idx = ScarabIndex::build(&g, b, InnerKind::Brute, gl, reduce).unwrap();
        (g, idx)
    }

    #[test]
    fn grail_chain3() {
        let gl = grail_build(&chain3(), 1, 9).unwrap();
        assert_eq!(gl.of(v(3)), &[(1, 1)]);
        assert_eq!(gl.of(v(2)), &[(1, 2)]);
        assert_eq!(gl.of(v(1)), &[(1, 3)]);
        assert!(gl.contains(v(1), v(3)) && gl.contains(v(2), v(3)));
        assert!(grail_build(&chain3(), 0, 0).is_err());
    }

    #[test]
    fn grail_diamond_contains_sink() {
        for seed in 0..16 {
            let gl = grail_build(&diamond(), 1, seed).unwrap();
            assert!(gl.contains(v(1), v(4)));
            assert!((0..4).all(|x| gl.contains(x, x)));
        }
    }

    #[test]
    fn grail_is_sound() {
        for seed in 0..10 {
            let g = random_dag(128, 2.0, seed);
            let tc = compute_tc(&g).unwrap();
            let gl = grail_build(&g, 3, seed).unwrap();
            for a in g.vertices() {
                for b in g.vertices() {
                    if !gl.contains(a, b) {
                        assert!(!reach(&tc, a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn online_examples() {
        let d = diamond();
        let gl = grail_build(&d, 1, 3).unwrap();
        assert!(query_online(&d, &gl, v(1), v(4)));
        let mut s = OnlineSearcher::new(4);
        assert!(!s.query(&d, &gl, v(2), v(3)));
        if !gl.contains(v(2), v(3)) {
            assert_eq!(s.expansions, 0);
        }
        let c = chain4();
        assert!(!query_online(
            &c,
            &grail_build(&c, 2, 0).unwrap(),
            v(4),
            v(1)
        ));
    }

    #[test]
    fn chain4_scarab() {
        let (g, idx) = chain4_index(true);
        let mut s = ScarabScratch::new(&idx);
        assert_eq!(
            scarab_query_traced(&g, &idx, &mut s, v(1), v(4)),
            (true, Resolution::Join)
        );
        assert!(!scarab_query(&g, &idx, &mut s, v(4), v(1)));
        assert!(idx.b_out[v(4) as usize].is_empty());
        assert_eq!(
            scarab_query_traced(&g, &idx, &mut s, v(1), v(2)),
            (true, Resolution::LocalSearch)
        );
        assert!(scarab_online_search(&g, &idx, &mut s, v(1), v(4)));
        assert!(!scarab_online_search(&g, &idx, &mut s, v(2), v(1)));
        assert!(scarab_online_search(&g, &idx, &mut s, v(3), v(3)));
    }

    #[test]
    fn scarab_agrees_with_oracle() {
        let mut graphs: Vec<Dag> = all().into_iter().map(|(_, g)| g).collect();
        graphs.extend((0..6).map(|s| random_dag(200, 2.0, s)));
        for g in &graphs {
            let tc = compute_tc(g).unwrap();
            let gl = grail_build(g, 5, 1).unwrap();
            for eps in 1..=3 {
                let b = discover_backbone(
                    g,
                    DiscoveryParams {
                        epsilon: eps,
                        prune_edges: eps == 2,
                        ..DiscoveryParams::default()
                    },
                )
                .unwrap();
                for (kind, reduce) in [
                    (InnerKind::Brute, true),
                    (InnerKind::Dl, false),
                    (InnerKind::Tree, true),
                ] {
                    let idx = ScarabIndex::build(g, b.clone(), kind, gl.clone(), reduce).unwrap();
                    let mut s = ScarabScratch::new(&idx);
                    for a in g.vertices() {
                        for c in g.vertices() {
                            let want = reach(&tc, a, c);
                            assert_eq!(scarab_query(g, &idx, &mut s, a, c), want, "join {a} {c}");
                            assert_eq!(
                                scarab_online_search(g, &idx, &mut s, a, c),
                                want,
                                "online {a} {c}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn workloads() {
        let d = diamond();
        let tc = compute_tc(&d).unwrap();
        let w = make_workload(&d, WorkloadKind::Equal, 10, 4).unwrap();
        let pos = w.pairs.iter().filter(|&&(a, b)| reach(&tc, a, b)).count();
        assert_eq!((pos, w.pairs.len()), (5, 10));
        let a = make_workload(&d, WorkloadKind::Random, 4, 8).unwrap();
        assert_eq!(a, make_workload(&d, WorkloadKind::Random, 4, 8).unwrap());
        assert!(matches!(
            make_workload(&Dag::empty(3), WorkloadKind::Equal, 4, 0),
            Err(Error::NoPositivePairs)
        ));
        assert!(make_workload(&d, WorkloadKind::Random, 0, 0).is_err());
    }
}
