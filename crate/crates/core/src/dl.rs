//! Distribution labeling.
//!
//! Vertices are processed from the highest rank down. Vertex `v_i` is pushed
//! as a hop into `L_out` of everything reaching it (reverse search) and into
//! `L_in` of everything it reaches (forward search). A vertex whose current
//! labels already witness the pair is skipped together with everything only
//! reachable through it.

use std::cmp::Reverse;

use crate::graph::{BfsScratch, Dag, Direction, Vertex};
use crate::labels::HopLabeling;
use crate::tc::TransitiveClosure;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexRank {
    /// Highest rank first.
    pub order: Vec<Vertex>,
    /// `(outdeg + 1) · (indeg + 1)`.
    pub score: Vec<u64>,
}

pub fn rank_vertices(g: &Dag) -> VertexRank {
    let score: Vec<u64> = g
        .vertices()
        .map(|v| (g.out_degree(v) as u64 + 1) * (g.in_degree(v) as u64 + 1))
        .collect();
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.sort_by_key(|&v| (Reverse(score[v as usize]), v));
    VertexRank { order, score }
}

/// One pruned broadcast of hop `i` (a rank position) from `src`.
///
/// `mark` flags the hops on the opposite side of `src`; a visited vertex whose
/// own list (in `lists`) hits a flag is already covered.
fn broadcast(
    g: &Dag,
    bfs: &mut BfsScratch,
    src: Vertex,
    i: u32,
    dir: Direction,
    lists: &mut [Vec<u32>],
    mark: &[bool],
) {
    lists[src as usize].push(i);
    bfs.run_with(g, src, u32::MAX, dir, |u| {
        let list = &mut lists[u as usize];
        if list.iter().any(|&h| mark[h as usize]) {
            return false;
        }
        list.push(i);
        true
    });
}

pub fn dl_build(g: &Dag, rank: &VertexRank) -> HopLabeling {
    let n = g.n();
    // Hops are rank positions while building, so every list grows in sorted order.
    let mut l_out: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut l_in: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut mark = vec![false; n];
    let mut bfs = BfsScratch::new(n);

    for (i, &vi) in rank.order.iter().enumerate() {
        let i = i as u32;
        let vi_idx = vi as usize;

        l_in[vi_idx].iter().for_each(|&h| mark[h as usize] = true);
        // A shared earlier hop would mean a cycle through v_i and that hop.
        debug_assert!(!l_out[vi_idx].iter().any(|&h| mark[h as usize]));
        broadcast(g, &mut bfs, vi, i, Direction::Reverse, &mut l_out, &mark);
        l_in[vi_idx].iter().for_each(|&h| mark[h as usize] = false);

        l_out[vi_idx].iter().for_each(|&h| mark[h as usize] = true);
        broadcast(g, &mut bfs, vi, i, Direction::Forward, &mut l_in, &mark);
        l_out[vi_idx].iter().for_each(|&h| mark[h as usize] = false);
    }

    let to_ids = |lists: Vec<Vec<u32>>| -> Vec<Vec<Vertex>> {
        lists
            .into_iter()
            .map(|l| {
                let mut ids: Vec<Vertex> = l.into_iter().map(|p| rank.order[p as usize]).collect();
                ids.sort_unstable();
                ids
            })
            .collect()
    };
    HopLabeling {
        l_out: to_ids(l_out),
        l_in: to_ids(l_in),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Out,
    In,
}

/// A hop that can be deleted without losing any reachable pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RemovableHop {
    pub side: Side,
    pub vertex: Vertex,
    pub hop: Vertex,
}

/// Tries every single-hop deletion against the closure and lists the hops
/// whose removal leaves the labeling complete.
pub fn check_non_redundancy(
    g: &Dag,
    labels: &HopLabeling,
    tc: &TransitiveClosure,
) -> Vec<RemovableHop> {
    let common_without = |a: &[Vertex], b: &[Vertex], skip: Vertex| {
        a.iter().any(|&h| h != skip && b.binary_search(&h).is_ok())
    };
    let mut found = Vec::new();
    for x in g.vertices() {
        let succ = tc.succ(x);
        for &h in labels.out_label(x) {
            let needed = succ.iter().any(|&w| {
                labels.in_label(w).binary_search(&h).is_ok()
                    && !common_without(labels.out_label(x), labels.in_label(w), h)
            });
            if !needed {
                found.push(RemovableHop {
                    side: Side::Out,
                    vertex: x,
                    hop: h,
                });
            }
        }
        for &h in labels.in_label(x) {
            let needed = tc.pred(x).ones().any(|u| {
                labels.out_label(u as Vertex).binary_search(&h).is_ok()
                    && !common_without(labels.in_label(x), labels.out_label(u as Vertex), h)
            });
            if !needed {
                found.push(RemovableHop {
                    side: Side::In,
                    vertex: x,
                    hop: h,
                });
            }
        }
    }
    found
}
