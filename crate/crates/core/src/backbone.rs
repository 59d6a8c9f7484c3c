//! Reachability backbones: a small vertex set `V*` and edge set `E*` such
//! that every reachable pair further apart than `ε` hops leaves through a
//! backbone vertex near its source and arrives through one near its target.
//!
//! `V*` is found by greedy set cover. The ground set holds the pairs at the
//! critical distance (`ε + 1` for the two-side backbone, `ε` for the one-side
//! one) and vertex `x` covers `(a, b)` when `d(a, x) ≤ ε` and `d(x, b) ≤ ε`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{BfsScratch, Dag, Direction, Vertex};
use crate::tc::TransitiveClosure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    TwoSide,
    OneSide,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::TwoSide => "two_side",
            Mode::OneSide => "one_side",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "two_side" => Some(Mode::TwoSide),
            "one_side" => Some(Mode::OneSide),
            _ => None,
        }
    }

    /// Distance of the pairs that make up the ground set.
    pub fn critical_distance(self, epsilon: u32) -> u32 {
        match self {
            Mode::TwoSide => epsilon + 1,
            Mode::OneSide => epsilon,
        }
    }

    /// Longest distance that earns a backbone edge.
    pub fn edge_radius(self, epsilon: u32) -> u32 {
        match self {
            Mode::TwoSide => epsilon,
            Mode::OneSide => epsilon + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    pub epsilon: u32,
    pub mode: Mode,
    /// Ground pairs sorted by `(a, b)`.
    pub ground: Vec<(Vertex, Vertex)>,
    /// For every vertex, the ascending indices of the ground pairs it covers.
    pub candidates: Vec<Vec<u32>>,
}

impl CoverInstance {
    pub fn candidate_pairs(&self, x: Vertex) -> Vec<(Vertex, Vertex)> {
        self.candidates[x as usize]
            .iter()
            .map(|&i| self.ground[i as usize])
            .collect()
    }
}

fn check_epsilon(epsilon: u32) -> Result<()> {
    if epsilon == 0 {
        return Err(Error::InvalidParameter("epsilon must be at least 1".into()));
    }
    Ok(())
}

pub fn build_cover_instance(g: &Dag, epsilon: u32, mode: Mode) -> Result<CoverInstance> {
    check_epsilon(epsilon)?;
    let n = g.n();
    let crit = mode.critical_distance(epsilon);

    // Per source `a`: its critical targets and the (x, target index) memberships.
    type SourceCover = (Vec<Vertex>, Vec<(Vertex, u32)>);
    let per_source: Vec<SourceCover> = (0..n as Vertex)
        .into_par_iter()
        .map_init(
            || (BfsScratch::new(n), BfsScratch::new(n), vec![u32::MAX; n]),
            |(outer, inner, slot), a| {
                let visited = outer.run(g, a, crit, Direction::Forward).to_vec();
                let mut targets: Vec<Vertex> = visited
                    .iter()
                    .copied()
                    .filter(|&b| outer.dist(b) == Some(crit))
                    .collect();
                if targets.is_empty() {
                    return (targets, Vec::new());
                }
                targets.sort_unstable();
                for (i, &b) in targets.iter().enumerate() {
                    slot[b as usize] = i as u32;
                }
                let mut members = Vec::new();
                for &x in visited
                    .iter()
                    .filter(|&&x| outer.dist(x).unwrap() <= epsilon)
                {
                    for &b in inner.run(g, x, epsilon, Direction::Forward) {
                        if slot[b as usize] != u32::MAX {
                            members.push((x, slot[b as usize]));
                        }
                    }
                }
                for &b in &targets {
                    slot[b as usize] = u32::MAX;
                }
                (targets, members)
            },
        )
        .collect();

    let mut ground = Vec::new();
    let mut candidates = vec![Vec::new(); n];
    for (a, (targets, members)) in per_source.into_iter().enumerate() {
        let offset = ground.len() as u32;
        ground.extend(targets.iter().map(|&b| (a as Vertex, b)));
        for (x, i) in members {
            candidates[x as usize].push(offset + i);
        }
    }
    for c in &mut candidates {
        c.sort_unstable();
    }
    Ok(CoverInstance {
        epsilon,
        mode,
        ground,
        candidates,
    })
}

/// Greedy set cover with lazily refreshed gains.
///
/// Pairs covered by `preselected` start out covered. Each round takes the
/// vertex covering the most uncovered pairs, smallest id first on ties.
/// Stale heap entries only overestimate, so a freshly confirmed top entry is
/// the exact greedy choice.
pub fn greedy_cover(inst: &CoverInstance, preselected: &[Vertex]) -> Result<Vec<Vertex>> {
    let mut covered = FixedBitSet::with_capacity(inst.ground.len());
    let mut coverable = FixedBitSet::with_capacity(inst.ground.len());
    for c in &inst.candidates {
        c.iter().for_each(|&i| coverable.insert(i as usize));
    }
    if let Some(i) = coverable.zeroes().next() {
        let (a, b) = inst.ground[i];
        return Err(Error::Uncoverable(a, b));
    }

    let mut chosen = vec![false; inst.candidates.len()];
    for &x in preselected {
        chosen[x as usize] = true;
        inst.candidates[x as usize]
            .iter()
            .for_each(|&i| covered.insert(i as usize));
    }
    let gain = |x: usize, covered: &FixedBitSet| {
        inst.candidates[x]
            .iter()
            .filter(|&&i| !covered.contains(i as usize))
            .count()
    };

    let mut heap: BinaryHeap<(usize, Reverse<Vertex>)> = (0..inst.candidates.len())
        .filter(|&x| !chosen[x])
        .map(|x| (gain(x, &covered), Reverse(x as Vertex)))
        .filter(|&(g, _)| g > 0)
        .collect();
    let mut remaining = inst.ground.len() - covered.count_ones(..);
    while remaining > 0 {
        let (stale, Reverse(x)) = heap.pop().expect("coverable pairs remain");
        let fresh = gain(x as usize, &covered);
        if fresh < stale {
            if fresh > 0 {
                heap.push((fresh, Reverse(x)));
            }
            continue;
        }
        chosen[x as usize] = true;
        for &i in &inst.candidates[x as usize] {
            if !covered.put(i as usize) {
                remaining -= 1;
            }
        }
    }
    Ok((0..chosen.len() as Vertex)
        .filter(|&x| chosen[x as usize])
        .collect())
}

/// The top `⌈alpha·n⌉` vertices by `indeg × outdeg`, returned in id order.
pub fn preselect(g: &Dag, alpha: f64) -> Result<Vec<Vertex>> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )));
    }
    let count = ((alpha * g.n() as f64 - 1e-9).ceil().max(0.0) as usize).min(g.n());
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.sort_by_key(|&v| (Reverse(g.in_degree(v) * g.out_degree(v)), v));
    order.truncate(count);
    order.sort_unstable();
    Ok(order)
}

fn membership(n: usize, vstar: &[Vertex]) -> FixedBitSet {
    let mut m = FixedBitSet::with_capacity(n);
    vstar.iter().for_each(|&v| m.insert(v as usize));
    m
}

/// Links backbone vertices that lie within the mode's edge radius.
///
/// With `prune`, `(u*, v*)` is dropped when some other backbone vertex `x`
/// has `d(u*, x) ≤ ε` and `d(x, v*) ≤ ε`: both legs are edges themselves, and
/// an induction on topological span shows reachability inside `V*` survives.
pub fn backbone_edges(
    g: &Dag,
    vstar: &[Vertex],
    epsilon: u32,
    mode: Mode,
    prune: bool,
) -> Vec<(Vertex, Vertex)> {
    let n = g.n();
    let member = membership(n, vstar);
    let radius = mode.edge_radius(epsilon);
    let mut per_vertex: Vec<Vec<(Vertex, Vertex)>> = vstar
        .par_iter()
        .map_init(
            || (BfsScratch::new(n), BfsScratch::new(n), vec![false; n]),
            |(outer, inner, dropped), &u| {
                let visited = outer.run(g, u, radius, Direction::Forward).to_vec();
                let targets: Vec<Vertex> = visited
                    .iter()
                    .copied()
                    .filter(|&w| w != u && member.contains(w as usize))
                    .collect();
                let mut marked = Vec::new();
                if prune {
                    let hubs: Vec<Vertex> = targets
                        .iter()
                        .copied()
                        .filter(|&x| outer.dist(x).unwrap() <= epsilon)
                        .collect();
                    for &x in &hubs {
                        for &w in inner.run(g, x, epsilon, Direction::Forward) {
                            if w != x && !dropped[w as usize] {
                                dropped[w as usize] = true;
                                marked.push(w);
                            }
                        }
                    }
                }
                let mut out: Vec<(Vertex, Vertex)> = targets
                    .iter()
                    .filter(|&&w| !dropped[w as usize])
                    .map(|&w| (u, w))
                    .collect();
                for w in marked {
                    dropped[w as usize] = false;
                }
                out.sort_unstable();
                out
            },
        )
        .collect();
    let mut edges = Vec::with_capacity(per_vertex.iter().map(Vec::len).sum());
    for list in per_vertex.iter_mut() {
        edges.append(list);
    }
    edges
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Backbone {
    pub epsilon: u32,
    pub mode: Mode,
    /// Ascending.
    pub vertices: Vec<Vertex>,
    /// Sorted by `(u, v)`.
    pub edges: Vec<(Vertex, Vertex)>,
}

/// The backbone as a standalone DAG over local ids `0..|V*|`.
#[derive(Debug, Clone)]
pub struct BackboneGraph {
    pub dag: Dag,
    /// `local_of[v]` is `u32::MAX` for vertices outside `V*`.
    pub local_of: Vec<u32>,
    pub global: Vec<Vertex>,
}

impl BackboneGraph {
    #[inline]
    pub fn local(&self, v: Vertex) -> Option<u32> {
        let l = self.local_of[v as usize];
        (l != u32::MAX).then_some(l)
    }
}

impl Backbone {
    pub fn is_member_mask(&self, n: usize) -> FixedBitSet {
        membership(n, &self.vertices)
    }

    pub fn graph(&self, n: usize) -> BackboneGraph {
        let mut local_of = vec![u32::MAX; n];
        for (i, &v) in self.vertices.iter().enumerate() {
            local_of[v as usize] = i as u32;
        }
        let edges: Vec<(Vertex, Vertex)> = self
            .edges
            .iter()
            .map(|&(a, b)| (local_of[a as usize], local_of[b as usize]))
            .collect();
        let dag = Dag::from_edges(self.vertices.len(), &edges)
            .expect("backbone edges follow reachability in a DAG");
        BackboneGraph {
            dag,
            local_of,
            global: self.vertices.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscoveryParams {
    pub epsilon: u32,
    pub mode: Mode,
    pub alpha: f64,
    pub prune_edges: bool,
}

impl Default for DiscoveryParams {
    fn default() -> Self {
        DiscoveryParams {
            epsilon: 2,
            mode: Mode::TwoSide,
            alpha: 0.05,
            prune_edges: false,
        }
    }
}

/// Preselection, greedy cover and edge construction in one call.
pub fn discover_backbone(g: &Dag, p: DiscoveryParams) -> Result<Backbone> {
    let pre = preselect(g, p.alpha)?;
    let inst = build_cover_instance(g, p.epsilon, p.mode)?;
    let vertices = greedy_cover(&inst, &pre)?;
    let edges = backbone_edges(g, &vertices, p.epsilon, p.mode, p.prune_edges);
    Ok(Backbone {
        epsilon: p.epsilon,
        mode: p.mode,
        vertices,
        edges,
    })
}

/// Violations found by [`verify_backbone`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BackboneReport {
    /// Reachable pairs farther than `ε` with no entry/exit witness.
    pub missing_witness: Vec<(Vertex, Vertex)>,
    /// Unreachable pairs that nevertheless have a witness.
    pub false_witness: Vec<(Vertex, Vertex)>,
    /// Backbone edges whose endpoints are not reachable in the graph.
    pub bad_edges: Vec<(Vertex, Vertex)>,
}

impl BackboneReport {
    pub fn passed(&self) -> bool {
        self.missing_witness.is_empty()
            && self.false_witness.is_empty()
            && self.bad_edges.is_empty()
    }
}

/// Successor sets of a DAG as bitsets, self-inclusive.
fn successor_sets(g: &Dag) -> Vec<FixedBitSet> {
    let mut succ = vec![FixedBitSet::new(); g.n()];
    for &v in g.topo().iter().rev() {
        let mut s = FixedBitSet::with_capacity(g.n());
        s.insert(v as usize);
        for &w in g.out_neighbors(v) {
            s.union_with(&succ[w as usize]);
        }
        succ[v as usize] = s;
    }
    succ
}

/// Exhaustive check of the backbone property: a pair `(u, v)` with
/// `d(u, v) > ε` is reachable iff some backbone `u*` within `ε` of `u`
/// reaches, inside the backbone, some `v*` within `ε` of `v`.
pub fn verify_backbone(g: &Dag, b: &Backbone, tc: &TransitiveClosure) -> BackboneReport {
    let n = g.n();
    let eps = b.epsilon;
    let bg = b.graph(n);
    let k = bg.global.len();
    let succ_star = successor_sets(&bg.dag);
    let mut report = BackboneReport::default();
    for &(x, y) in &b.edges {
        if !tc.pred(y).contains(x as usize) {
            report.bad_edges.push((x, y));
        }
    }

    let mut bfs = BfsScratch::new(n);
    // local_in[v]: backbone vertices within ε upstream of v (local ids).
    let local_in: Vec<FixedBitSet> = g
        .vertices()
        .map(|v| {
            let mut s = FixedBitSet::with_capacity(k);
            for &x in bfs.run(g, v, eps, Direction::Reverse) {
                if let Some(l) = bg.local(x) {
                    s.insert(l as usize);
                }
            }
            s
        })
        .collect();

    for u in g.vertices() {
        let near: Vec<Vertex> = bfs.run(g, u, eps, Direction::Forward).to_vec();
        let mut reach_star = FixedBitSet::with_capacity(k);
        for &x in &near {
            if let Some(l) = bg.local(x) {
                reach_star.union_with(&succ_star[l as usize]);
            }
        }
        for v in g.vertices() {
            if bfs.dist(v).is_some() {
                continue; // local pair, answered without the backbone
            }
            let witnessed = !reach_star.is_disjoint(&local_in[v as usize]);
            let reachable = tc.pred(v).contains(u as usize);
            if reachable && !witnessed {
                report.missing_witness.push((u, v));
            } else if !reachable && witnessed {
                report.false_witness.push((u, v));
            }
        }
    }
    report
}

/// Pairs at distance exactly `ε` lacking a backbone midpoint `v*` with
/// `d(u, v*) ≤ ε` and `d(v*, v) ≤ ε`.
pub fn verify_one_side(g: &Dag, vertices: &[Vertex], epsilon: u32) -> Vec<(Vertex, Vertex)> {
    let n = g.n();
    let member = membership(n, vertices);
    let mut outer = BfsScratch::new(n);
    let mut inner = BfsScratch::new(n);
    let mut violations = Vec::new();
    for u in g.vertices() {
        let near = outer.run(g, u, epsilon, Direction::Forward).to_vec();
        let mut ok = vec![false; n];
        for &x in near.iter().filter(|&&x| member.contains(x as usize)) {
            for &w in inner.run(g, x, epsilon, Direction::Forward) {
                ok[w as usize] = true;
            }
        }
        let mut bad: Vec<Vertex> = near
            .iter()
            .copied()
            .filter(|&v| outer.dist(v) == Some(epsilon) && !ok[v as usize])
            .collect();
        bad.sort_unstable();
        violations.extend(bad.into_iter().map(|v| (u, v)));
    }
    violations
}

/// Dominating access sets of one vertex.
///
/// `out` holds the backbone vertices within `ε` downstream of `v` that are
/// not themselves within `ε` downstream of another such backbone vertex;
/// `inn` is the mirror image upstream. A backbone vertex is its own sole
/// access vertex on both sides.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AccessSets {
    pub out: Vec<Vertex>,
    pub inn: Vec<Vertex>,
}

/// Scratch space for repeated access-set computations on one graph.
pub struct AccessScratch {
    outer: BfsScratch,
    inner: BfsScratch,
    dominated: Vec<bool>,
}

impl AccessScratch {
    pub fn new(n: usize) -> Self {
        AccessScratch {
            outer: BfsScratch::new(n),
            inner: BfsScratch::new(n),
            dominated: vec![false; n],
        }
    }
}

/// One side of [`access_sets`]: `dir` picks downstream or upstream.
pub fn access_side(
    g: &Dag,
    member: &FixedBitSet,
    epsilon: u32,
    v: Vertex,
    dir: Direction,
    reduce: bool,
    scratch: &mut AccessScratch,
) -> Vec<Vertex> {
    if member.contains(v as usize) {
        return vec![v];
    }
    let local: Vec<Vertex> = scratch
        .outer
        .run(g, v, epsilon, dir)
        .iter()
        .copied()
        .filter(|&x| member.contains(x as usize))
        .collect();
    if !reduce || local.len() <= 1 {
        let mut local = local;
        local.sort_unstable();
        return local;
    }
    for &x in &local {
        scratch.dominated[x as usize] = false;
    }
    for &x in &local {
        for &w in scratch.inner.run(g, x, epsilon, dir) {
            if w != x && member.contains(w as usize) {
                scratch.dominated[w as usize] = true;
            }
        }
    }
    let mut kept: Vec<Vertex> = local
        .iter()
        .copied()
        .filter(|&x| !scratch.dominated[x as usize])
        .collect();
    for &x in &local {
        scratch.dominated[x as usize] = false;
    }
    kept.sort_unstable();
    kept
}

pub fn access_sets(
    g: &Dag,
    member: &FixedBitSet,
    epsilon: u32,
    v: Vertex,
    scratch: &mut AccessScratch,
) -> AccessSets {
    AccessSets {
        out: access_side(g, member, epsilon, v, Direction::Forward, true, scratch),
        inn: access_side(g, member, epsilon, v, Direction::Reverse, true, scratch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{chain4, diamond, v};
    use crate::graph::random_dag;
    use crate::tc::compute_tc;

    fn vs(xs: &[Vertex]) -> Vec<Vertex> {
        xs.iter().map(|&x| v(x)).collect()
    }

    #[test]
    fn chain4_two_side_instance() {
        let inst = build_cover_instance(&chain4(), 1, Mode::TwoSide).unwrap();
        assert_eq!(inst.ground, vec![(v(1), v(3)), (v(2), v(4))]);
        assert_eq!(inst.candidate_pairs(v(2)), vec![(v(1), v(3))]);
        assert_eq!(inst.candidate_pairs(v(3)), vec![(v(2), v(4))]);
        assert!(inst.candidates[v(1) as usize].is_empty());
        assert!(inst.candidates[v(4) as usize].is_empty());
        assert_eq!(greedy_cover(&inst, &[]).unwrap(), vs(&[2, 3]));
    }

    #[test]
    fn diamond_one_side_instance() {
        let inst = build_cover_instance(&diamond(), 2, Mode::OneSide).unwrap();
        assert_eq!(inst.ground, vec![(v(1), v(4))]);
        assert!((0..4).all(|x| inst.candidate_pairs(x) == vec![(v(1), v(4))]));
        assert_eq!(greedy_cover(&inst, &[]).unwrap(), vs(&[1]));
    }

    #[test]
    fn large_epsilon_gives_empty_ground() {
        let inst = build_cover_instance(&chain4(), 5, Mode::TwoSide).unwrap();
        assert!(inst.ground.is_empty());
        assert_eq!(greedy_cover(&inst, &[v(2)]).unwrap(), vs(&[2]));
        assert!(build_cover_instance(&chain4(), 0, Mode::TwoSide).is_err());
    }

    #[test]
    fn uncoverable_is_reported() {
        let inst = CoverInstance {
            epsilon: 1,
            mode: Mode::TwoSide,
            ground: vec![(0, 2)],
            candidates: vec![vec![], vec![], vec![]],
        };
        assert!(matches!(
            greedy_cover(&inst, &[]),
            Err(Error::Uncoverable(0, 2))
        ));
    }

    #[test]
    fn preselection_by_degree_product() {
        let g = diamond();
        assert_eq!(preselect(&g, 0.25).unwrap(), vs(&[2]));
        assert!(preselect(&g, 0.0).unwrap().is_empty());
        assert_eq!(preselect(&g, 1.0).unwrap(), vs(&[1, 2, 3, 4]));
        assert!(preselect(&g, 1.5).is_err());
    }

    #[test]
    fn edge_examples() {
        assert_eq!(
            backbone_edges(&chain4(), &vs(&[2, 3]), 1, Mode::TwoSide, false),
            vec![(v(2), v(3))]
        );
        assert_eq!(
            backbone_edges(&diamond(), &vs(&[2, 4]), 2, Mode::OneSide, false),
            vec![(v(2), v(4))]
        );
        assert!(backbone_edges(&diamond(), &[], 2, Mode::OneSide, false).is_empty());
    }

    #[test]
    fn chain4_verification() {
        let g = chain4();
        let tc = compute_tc(&g).unwrap();
        let good = Backbone {
            epsilon: 1,
            mode: Mode::TwoSide,
            vertices: vs(&[2, 3]),
            edges: vec![(v(2), v(3))],
        };
        assert!(verify_backbone(&g, &good, &tc).passed());
        let bad = Backbone {
            vertices: vs(&[2]),
            edges: vec![],
            ..good
        };
        let r = verify_backbone(&g, &bad, &tc);
        assert!(r.missing_witness.contains(&(v(2), v(4))));
        let empty = Dag::empty(3);
        let b = discover_backbone(&empty, DiscoveryParams::default()).unwrap();
        assert!(verify_backbone(&empty, &b, &compute_tc(&empty).unwrap()).passed());
    }

    #[test]
    fn greedy_backbones_verify() {
        for seed in 0..12 {
            let g = random_dag(200, 2.0, seed);
            let tc = compute_tc(&g).unwrap();
            for eps in 1..=3 {
                for alpha in [0.0, 0.05] {
                    for prune in [false, true] {
                        let p = DiscoveryParams {
                            epsilon: eps,
                            mode: Mode::TwoSide,
                            alpha,
                            prune_edges: prune,
                        };
                        let b = discover_backbone(&g, p).unwrap();
                        let r = verify_backbone(&g, &b, &tc);
                        assert!(r.passed(), "seed {seed} eps {eps}: {r:?}");
                    }
                }
                let one = discover_backbone(
                    &g,
                    DiscoveryParams {
                        epsilon: eps,
                        mode: Mode::OneSide,
                        alpha: 0.0,
                        prune_edges: true,
                    },
                )
                .unwrap();
                assert!(verify_one_side(&g, &one.vertices, eps).is_empty());
                assert!(verify_backbone(&g, &one, &tc).passed());
            }
        }
    }

    #[test]
    fn greedy_covers_everything() {
        let g = random_dag(150, 2.5, 9);
        let inst = build_cover_instance(&g, 2, Mode::TwoSide).unwrap();
        let chosen = greedy_cover(&inst, &[]).unwrap();
        let mut covered = FixedBitSet::with_capacity(inst.ground.len());
        for &x in &chosen {
            inst.candidates[x as usize]
                .iter()
                .for_each(|&i| covered.insert(i as usize));
        }
        assert_eq!(covered.count_ones(..), inst.ground.len());
    }

    #[test]
    fn access_set_examples() {
        let g = chain4();
        let member = membership(4, &vs(&[2, 3]));
        let mut s = AccessScratch::new(4);
        let a = access_sets(&g, &member, 1, v(1), &mut s);
        assert_eq!(a.out, vs(&[2]));
        assert!(a.inn.is_empty());
        assert_eq!(access_sets(&g, &member, 1, v(4), &mut s).inn, vs(&[3]));
        assert_eq!(access_sets(&g, &member, 1, v(2), &mut s).out, vs(&[2]));
        // With a larger radius 3 is dominated by 2.
        let a = access_sets(&g, &member, 2, v(1), &mut s);
        assert_eq!(a.out, vs(&[2]));
    }
}
