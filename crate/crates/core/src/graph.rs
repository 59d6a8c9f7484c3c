//! Directed graph ingestion, SCC condensation and the immutable [`Dag`]
//! representation every index in this crate is built on.
//!
//! Vertex ids are dense `u32` values in `[0, n)`. Wherever a choice between
//! vertices has to be made (topological order, tie-breaks) the smallest id
//! wins, so that every structure derived from a `Dag` is reproducible.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng_from_seed;

pub type Vertex = u32;

/// Edge traversal direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Reverse,
}

/// A raw list of directed edges over `[0, num_vertices)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeList {
    pub num_vertices: usize,
    pub edges: Vec<(Vertex, Vertex)>,
}

/// What [`EdgeList::normalize`] removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NormalizeReport {
    pub self_loops: usize,
    pub duplicates: usize,
}

impl EdgeList {
    pub fn new(num_vertices: usize, edges: Vec<(Vertex, Vertex)>) -> Self {
        EdgeList {
            num_vertices,
            edges,
        }
    }

    /// Sorts the edges, drops self-loops and duplicate edges.
    pub fn normalize(&mut self) -> NormalizeReport {
        let before = self.edges.len();
        self.edges.retain(|&(u, v)| u != v);
        let self_loops = before - self.edges.len();
        self.edges.sort_unstable();
        self.edges.dedup();
        NormalizeReport {
            self_loops,
            duplicates: before - self_loops - self.edges.len(),
        }
    }
}

/// Result of [`parse_edge_list`]: a normalized edge list plus what was dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedEdgeList {
    pub graph: EdgeList,
    pub report: NormalizeReport,
}

/// Parses the text edge-list format.
///
/// Lines starting with `#` and blank lines are ignored. Every other line holds
/// two decimal ids. The first such line is read as an `N M` header when the
/// number of lines following it equals `M` (and `N > 0` unless `M = 0`);
/// otherwise every line is an edge and the vertex count is one more than the
/// largest id seen.
pub fn parse_edge_list(text: &str) -> Result<ParsedEdgeList> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let mut fields = trimmed.split_whitespace();
        let (a, b) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    reason: "expected two whitespace-separated ids".into(),
                })
            }
        };
        let parse = |s: &str| {
            s.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                reason: format!("`{s}` is not a non-negative integer"),
            })
        };
        rows.push((lineno, parse(a)?, parse(b)?));
    }

    let has_header = match rows.first() {
        // Zero vertices cannot carry edges, so "0 M" with M > 0 is an edge.
        Some(&(_, n, m)) => m as usize == rows.len() - 1 && (n > 0 || m == 0),
        None => false,
    };
    let (declared_n, body) = if has_header {
        (Some(rows[0].1), &rows[1..])
    } else {
        (None, &rows[..])
    };

    let limit = declared_n.unwrap_or(u32::MAX as u64);
    let mut edges = Vec::with_capacity(body.len());
    let mut max_id = None;
    for &(line, u, v) in body {
        if u >= limit || v >= limit {
            return Err(Error::IdOutOfRange { line });
        }
        max_id = max_id.max(Some(u.max(v)));
        edges.push((u as Vertex, v as Vertex));
    }
    let num_vertices = match declared_n {
        Some(n) => n as usize,
        None => max_id.map_or(0, |m| m as usize + 1),
    };
    let mut graph = EdgeList::new(num_vertices, edges);
    let report = graph.normalize();
    Ok(ParsedEdgeList { graph, report })
}

/// Reads and parses an edge list from any buffered reader.
pub fn read_edge_list<R: BufRead>(mut reader: R) -> Result<ParsedEdgeList> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_edge_list(&text)
}

/// Renders a DAG in the edge-list format, header included.
pub fn write_edge_list(g: &Dag) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Condensed DAG in compressed sparse row form, forward and reverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    out_offsets: Vec<usize>,
    out_targets: Vec<Vertex>,
    in_offsets: Vec<usize>,
    in_sources: Vec<Vertex>,
    topo: Vec<Vertex>,
    rank: Vec<u32>,
}

fn csr(
    n: usize,
    edges: impl Iterator<Item = (Vertex, Vertex)> + Clone,
) -> (Vec<usize>, Vec<Vertex>) {
    let mut offsets = vec![0usize; n + 1];
    for (u, _) in edges.clone() {
        offsets[u as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut targets = vec![0; offsets[n]];
    for (u, v) in edges {
        targets[fill[u as usize]] = v;
        fill[u as usize] += 1;
    }
    for i in 0..n {
        targets[offsets[i]..offsets[i + 1]].sort_unstable();
    }
    (offsets, targets)
}

impl Dag {
    /// Builds a DAG from arbitrary edges. Duplicates are merged; a self-loop
    /// or any longer cycle yields [`Error::Cycle`].
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Dag> {
        let mut edges = edges.to_vec();
        for &(u, v) in &edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) outside [0, {n})"
                )));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let (out_offsets, out_targets) = csr(n, edges.iter().copied());
        let (in_offsets, in_sources) = csr(n, edges.iter().map(|&(u, v)| (v, u)));
        let mut dag = Dag {
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
            topo: Vec::new(),
            rank: Vec::new(),
        };
        dag.topo = topological_order(&dag)?;
        dag.rank = vec![0; n];
        for (i, &v) in dag.topo.iter().enumerate() {
            dag.rank[v as usize] = i as u32;
        }
        Ok(dag)
    }

    pub fn empty(n: usize) -> Dag {
        Dag::from_edges(n, &[]).expect("edgeless graph is acyclic")
    }

    pub fn n(&self) -> usize {
        self.out_offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.out_targets.len()
    }

    #[inline]
    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    #[inline]
    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex, dir: Direction) -> &[Vertex] {
        match dir {
            Direction::Forward => self.out_neighbors(v),
            Direction::Reverse => self.in_neighbors(v),
        }
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.out_neighbors(v).len()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.in_neighbors(v).len()
    }

    /// Vertices in topological order (Kahn, smallest id first among ready vertices).
    pub fn topo(&self) -> &[Vertex] {
        &self.topo
    }

    /// Position of `v` in [`Dag::topo`].
    #[inline]
    pub fn rank(&self, v: Vertex) -> u32 {
        self.rank[v as usize]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        0..self.n() as Vertex
    }

    /// All edges in `(source, target)` lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices()
            .flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.out_neighbors(u).binary_search(&v).is_ok()
    }
}

/// Kahn's algorithm with a min-heap, so ready vertices leave in id order.
pub fn topological_order(g: &Dag) -> Result<Vec<Vertex>> {
    let n = g.n();
    let mut indeg: Vec<usize> = (0..n as Vertex).map(|v| g.in_degree(v)).collect();
    let mut ready: BinaryHeap<Reverse<Vertex>> = (0..n as Vertex)
        .filter(|&v| indeg[v as usize] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(u)) = ready.pop() {
        order.push(u);
        for &v in g.out_neighbors(u) {
            indeg[v as usize] -= 1;
            if indeg[v as usize] == 0 {
                ready.push(Reverse(v));
            }
        }
    }
    if order.len() != n {
        return Err(Error::Cycle);
    }
    Ok(order)
}

/// Maps original vertices onto the vertices of the condensed DAG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensationMap {
    pub component_of: Vec<Vertex>,
    pub components: Vec<Vec<Vertex>>,
}

impl CondensationMap {
    pub fn is_identity(&self) -> bool {
        self.component_of
            .iter()
            .enumerate()
            .all(|(i, &c)| i as Vertex == c)
            && self.components.len() == self.component_of.len()
    }

    pub fn identity(n: usize) -> Self {
        CondensationMap {
            component_of: (0..n as Vertex).collect(),
            components: (0..n as Vertex).map(|v| vec![v]).collect(),
        }
    }
}

/// Collapses every strongly connected component to a single vertex.
///
/// Components are numbered by their smallest original member, so an acyclic
/// input condenses to itself.
pub fn condense(g: &EdgeList) -> (Dag, CondensationMap) {
    let n = g.num_vertices;
    let mut list = g.clone();
    list.normalize();
    let (offsets, targets) = csr(n, list.edges.iter().copied());
    let succ = |v: usize| &targets[offsets[v]..offsets[v + 1]];

    // Iterative Tarjan.
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut raw_comp = vec![UNSEEN; n];
    let mut ncomp = 0u32;
    let mut counter = 0u32;
    let mut call: Vec<(u32, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root as u32, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root as u32);
        on_stack[root] = true;

        while let Some(&(v, next)) = call.last() {
            let vs = v as usize;
            if let Some(&w) = succ(vs).get(next) {
                call.last_mut().expect("non-empty").1 += 1;
                let ws = w as usize;
                if index[ws] == UNSEEN {
                    index[ws] = counter;
                    low[ws] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[ws] = true;
                    call.push((w, 0));
                } else if on_stack[ws] {
                    low[vs] = low[vs].min(index[ws]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    let ps = parent as usize;
                    low[ps] = low[ps].min(low[vs]);
                }
                if low[vs] == index[vs] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w as usize] = false;
                        raw_comp[w as usize] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }

    // Renumber by smallest member.
    let mut relabel = vec![UNSEEN; ncomp as usize];
    let mut next_id = 0;
    for &c in &raw_comp {
        let c = c as usize;
        if relabel[c] == UNSEEN {
            relabel[c] = next_id;
            next_id += 1;
        }
    }
    let component_of: Vec<Vertex> = raw_comp.iter().map(|&c| relabel[c as usize]).collect();
    let mut components = vec![Vec::new(); ncomp as usize];
    for (v, &c) in component_of.iter().enumerate() {
        components[c as usize].push(v as Vertex);
    }
    let dag_edges: Vec<(Vertex, Vertex)> = list
        .edges
        .iter()
        .map(|&(u, v)| (component_of[u as usize], component_of[v as usize]))
        .filter(|(a, b)| a != b)
        .collect();
    let dag = Dag::from_edges(ncomp as usize, &dag_edges).expect("condensation is acyclic");
    (
        dag,
        CondensationMap {
            component_of,
            components,
        },
    )
}

/// Reusable state for depth-bounded breadth-first searches.
///
/// The visited marks are epoch-stamped, so a search costs time proportional
/// to what it touches rather than to `n`.
#[derive(Debug, Clone)]
pub struct BfsScratch {
    stamp: Vec<u32>,
    dist: Vec<u32>,
    epoch: u32,
    visited: Vec<Vertex>,
}

impl BfsScratch {
    pub fn new(n: usize) -> Self {
        BfsScratch {
            stamp: vec![0; n],
            dist: vec![0; n],
            epoch: 0,
            visited: Vec::new(),
        }
    }

    fn next_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.visited.clear();
    }

    /// Visits everything within `max_depth` edges of `src` in `dir`.
    /// `expand(v)` decides whether a visited vertex (other than `src`) has its
    /// neighbors explored. Returns the visited vertices in BFS order.
    pub fn run_with(
        &mut self,
        g: &Dag,
        src: Vertex,
        max_depth: u32,
        dir: Direction,
        mut expand: impl FnMut(Vertex) -> bool,
    ) -> &[Vertex] {
        self.next_epoch();
        self.stamp[src as usize] = self.epoch;
        self.dist[src as usize] = 0;
        self.visited.push(src);
        let mut head = 0;
        while head < self.visited.len() {
            let v = self.visited[head];
            head += 1;
            let d = self.dist[v as usize];
            if d >= max_depth || (v != src && !expand(v)) {
                continue;
            }
            for &w in g.neighbors(v, dir) {
                if self.stamp[w as usize] != self.epoch {
                    self.stamp[w as usize] = self.epoch;
                    self.dist[w as usize] = d + 1;
                    self.visited.push(w);
                }
            }
        }
        &self.visited
    }

    pub fn run(&mut self, g: &Dag, src: Vertex, max_depth: u32, dir: Direction) -> &[Vertex] {
        self.run_with(g, src, max_depth, dir, |_| true)
    }

    /// Vertices visited by the last run, in BFS order.
    pub fn visited(&self) -> &[Vertex] {
        &self.visited
    }

    /// Distance from the last source, if `v` was visited by the last run.
    #[inline]
    pub fn dist(&self, v: Vertex) -> Option<u32> {
        (self.stamp[v as usize] == self.epoch).then(|| self.dist[v as usize])
    }
}

/// All vertices within `k` edges of `v` in direction `dir`, `v` included, sorted.
pub fn k_neighborhood(g: &Dag, v: Vertex, k: u32, dir: Direction) -> Vec<Vertex> {
    let mut bfs = BfsScratch::new(g.n());
    let mut out = bfs.run(g, v, k, dir).to_vec();
    out.sort_unstable();
    out
}

/// Unit-weight shortest path length from `u` to `v`.
pub fn distance(g: &Dag, u: Vertex, v: Vertex) -> Option<u32> {
    if u == v {
        return Some(0);
    }
    // A path can only go up in topological rank.
    if g.rank(u) > g.rank(v) {
        return None;
    }
    let mut bfs = BfsScratch::new(g.n());
    bfs.run(g, u, u32::MAX, Direction::Forward);
    bfs.dist(v)
}

/// Seeded random DAG: a random permutation fixes the order and
/// `round(n * avg_out_degree)` distinct forward pairs are drawn uniformly.
pub fn random_dag(n: usize, avg_out_degree: f64, seed: u64) -> Dag {
    assert!(n >= 1, "random_dag needs at least one vertex");
    assert!(avg_out_degree >= 0.0, "average degree must be non-negative");
    let mut rng = rng_from_seed(seed);
    let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
    perm.shuffle(&mut rng);

    let max_pairs = n * (n - 1) / 2;
    let target = ((n as f64 * avg_out_degree).round() as usize).min(max_pairs);
    let mut edges = Vec::with_capacity(target);
    if target * 2 > max_pairs {
        let mut all: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        all.shuffle(&mut rng);
        all.truncate(target);
        edges.extend(all.into_iter().map(|(i, j)| (perm[i], perm[j])));
    } else {
        let mut seen = HashSet::with_capacity(target);
        while edges.len() < target {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b {
                continue;
            }
            let (i, j) = (a.min(b), a.max(b));
            if seen.insert((i, j)) {
                edges.push((perm[i], perm[j]));
            }
        }
    }
    Dag::from_edges(n, &edges).expect("forward edges of a permutation are acyclic")
}
