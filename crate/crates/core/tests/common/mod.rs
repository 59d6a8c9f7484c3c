//! Graph suites shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use reachidx::fixtures;
use reachidx::graph::{random_dag, EdgeList};
use reachidx::{rng_from_seed, Dag, Vertex};

/// Pairs checked exhaustively up to this many vertices; sampled above it.
pub const EXHAUSTIVE_LIMIT: usize = 128;
pub const SAMPLED_PAIRS: usize = 100_000;

/// `count` seeded random DAGs with average out-degree 2 and `2 ≤ n ≤ max_n`.
pub fn dag_suite(count: usize, max_n: usize, salt: u64) -> Vec<Dag> {
    (0..count as u64)
        .map(|i| {
            let seed = salt.wrapping_mul(1_000_003).wrapping_add(i);
            let n = rng_from_seed(seed ^ 0xd1ce).gen_range(2..=max_n);
            random_dag(n, 2.0, seed)
        })
        .collect()
}

pub fn fixture_dags() -> Vec<Dag> {
    fixtures::all().into_iter().map(|(_, g)| g).collect()
}

/// Every ordered pair for small graphs, otherwise a seeded uniform sample.
pub fn check_pairs(g: &Dag, seed: u64) -> Vec<(Vertex, Vertex)> {
    let n = g.n() as Vertex;
    if g.n() <= EXHAUSTIVE_LIMIT {
        (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect()
    } else {
        let mut rng = rng_from_seed(seed);
        (0..SAMPLED_PAIRS)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect()
    }
}

/// A digraph with arbitrary (possibly cyclic) uniform edges.
pub fn random_digraph(n: usize, m: usize, seed: u64) -> EdgeList {
    let mut rng = rng_from_seed(seed);
    let edges = (0..m)
        .map(|_| (rng.gen_range(0..n) as Vertex, rng.gen_range(0..n) as Vertex))
        .collect();
    let mut e = EdgeList::new(n, edges);
    e.normalize();
    e
}

/// Textbook forward search on an edge list, independent of the crate's BFS.
pub fn reachable_from(e: &EdgeList, src: Vertex) -> Vec<bool> {
    let mut adj = vec![Vec::new(); e.num_vertices];
    for &(u, v) in &e.edges {
        adj[u as usize].push(v);
    }
    let mut seen = vec![false; e.num_vertices];
    let mut stack = vec![src];
    seen[src as usize] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x as usize] {
            if !seen[y as usize] {
                seen[y as usize] = true;
                stack.push(y);
            }
        }
    }
    seen
}
