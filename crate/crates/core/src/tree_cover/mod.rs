//! Optimal tree cover of a DAG and the compressed transitive closure it induces.
//!
//! Every tree edge `(p, v)` carries the weight `|pred(p)|`, the predecessor
//! count of its tail. Because that weight depends only on the tail, a
//! [`WeightTable`] stores one number per vertex. The heaviest tree saves the
//! most closure entries: a vertex `u` that reaches `p` never has to list the
//! subtree of `v` separately, so the compressed closure has exactly
//! `|TC| - W(T)` intervals.

mod ktree;
mod sampled;
mod weights;

pub use ktree::{ktree_refine, MultiTreeIndex};
pub use sampled::{
    estimate_tree_weight, sample_size, sampled_tree, tree_y_values, SampleEstimate, SamplingParams,
};
pub use weights::{
    batched_weights, conditional_pass, exact_weights, exact_weights_streaming, GroupPartition,
    WeightTable,
};

use crate::graph::{Dag, Vertex};
use crate::Reachability;

/// Closed interval `[pre, post]` of 1-based preorder ranks.
///
/// `pre` is the vertex's own rank and `post` the largest rank in its subtree,
/// so `x` is a tree descendant of `y` iff `interval(x) ⊆ interval(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub pre: u32,
    pub post: u32,
}

impl Interval {
    #[inline]
    pub fn contains(&self, other: &Interval) -> bool {
        self.pre <= other.pre && other.post <= self.post
    }
}

/// A spanning arborescence of the DAG below a virtual root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeCover {
    /// `None` stands for the virtual root.
    pub parent: Vec<Option<Vertex>>,
    pub interval: Vec<Interval>,
    /// Σ of tail weights over the real tree edges.
    pub weight: u64,
}

impl TreeCover {
    /// Builds intervals for an arbitrary parent assignment. `tail_weight[p]`
    /// is the weight of every edge leaving `p`; root edges weigh nothing.
    ///
    /// Panics if the parent pointers contain a cycle.
    pub fn from_parents(parent: Vec<Option<Vertex>>, tail_weight: &[u64]) -> TreeCover {
        let n = parent.len();
        let weight = parent
            .iter()
            .flatten()
            .map(|&p| tail_weight[p as usize])
            .sum();

        // Children lists in id order, root children included.
        let mut child_count = vec![0usize; n + 1];
        for p in &parent {
            child_count[p.map_or(n, |p| p as usize)] += 1;
        }
        let mut start = vec![0usize; n + 2];
        for i in 0..=n {
            start[i + 1] = start[i] + child_count[i];
        }
        let mut fill = start.clone();
        let mut children = vec![0 as Vertex; n];
        for (v, p) in parent.iter().enumerate() {
            let slot = p.map_or(n, |p| p as usize);
            children[fill[slot]] = v as Vertex;
            fill[slot] += 1;
        }

        let mut interval = vec![Interval { pre: 0, post: 0 }; n];
        let mut counter = 0u32;
        // Stack of (node slot, next child cursor); slot n is the virtual root.
        let mut stack = vec![(n, start[n])];
        while let Some(&(node, cursor)) = stack.last() {
            if cursor < start[node + 1] {
                stack.last_mut().expect("non-empty").1 += 1;
                let c = children[cursor] as usize;
                counter += 1;
                interval[c].pre = counter;
                stack.push((c, start[c]));
            } else {
                stack.pop();
                if node < n {
                    interval[node].post = counter;
                }
            }
        }
        assert_eq!(counter as usize, n, "parent pointers do not form a tree");
        TreeCover {
            parent,
            interval,
            weight,
        }
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn is_ancestor(&self, a: Vertex, d: Vertex) -> bool {
        self.interval[a as usize].contains(&self.interval[d as usize])
    }
}

/// Picks the heaviest in-edge for every vertex and lays out the tree.
pub fn build_tree(g: &Dag, weights: &WeightTable) -> TreeCover {
    debug_assert_eq!(g.n(), weights.best_parent.len());
    TreeCover::from_parents(weights.best_parent.clone(), &weights.tail_weight)
}

/// Heaviest in-neighbor by `tail_weight`; the first (smallest id) wins ties.
pub(crate) fn best_parents(g: &Dag, tail_weight: &[u64]) -> Vec<Option<Vertex>> {
    g.vertices()
        .map(|v| {
            let mut best: Option<Vertex> = None;
            for &p in g.in_neighbors(v) {
                match best {
                    Some(b) if tail_weight[p as usize] <= tail_weight[b as usize] => {}
                    _ => best = Some(p),
                }
            }
            best
        })
        .collect()
}

/// Per-vertex sorted lists of disjoint subtree intervals whose union is the
/// vertex's successor set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedTC {
    pub lists: Vec<Vec<Interval>>,
}

impl CompressedTC {
    pub fn total_entries(&self) -> u64 {
        self.lists.iter().map(|l| l.len() as u64).sum()
    }

    pub fn list(&self, u: Vertex) -> &[Interval] {
        &self.lists[u as usize]
    }
}

/// Keeps the maximal members of a laminar family, sorted by `pre`.
fn maximal_intervals(mut items: Vec<Interval>) -> Vec<Interval> {
    items.sort_unstable_by(|a, b| a.pre.cmp(&b.pre).then(b.post.cmp(&a.post)));
    let mut kept: Vec<Interval> = Vec::with_capacity(items.len());
    for it in items {
        match kept.last() {
            Some(last) if last.contains(&it) => {}
            _ => kept.push(it),
        }
    }
    kept
}

pub fn compress_tc(g: &Dag, t: &TreeCover) -> CompressedTC {
    let mut lists: Vec<Vec<Interval>> = vec![Vec::new(); g.n()];
    for &u in g.topo().iter().rev() {
        let mut items = vec![t.interval[u as usize]];
        for &w in g.out_neighbors(u) {
            items.extend_from_slice(&lists[w as usize]);
        }
        lists[u as usize] = maximal_intervals(items);
    }
    CompressedTC { lists }
}

/// Interval containment test against `u`'s compressed list.
pub fn query_tree(ctc: &CompressedTC, t: &TreeCover, u: Vertex, v: Vertex) -> bool {
    contains_interval(ctc.list(u), t.interval[v as usize])
}

#[inline]
pub(crate) fn contains_interval(list: &[Interval], target: Interval) -> bool {
    let idx = list.partition_point(|iv| iv.pre <= target.pre);
    idx > 0 && target.post <= list[idx - 1].post
}

/// A tree cover together with its compressed closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeIndex {
    pub tree: TreeCover,
    pub ctc: CompressedTC,
}

impl TreeIndex {
    pub fn build(g: &Dag, tree: TreeCover) -> TreeIndex {
        let ctc = compress_tc(g, &tree);
        TreeIndex { tree, ctc }
    }
}

impl Reachability for TreeIndex {
    fn reaches(&self, u: Vertex, v: Vertex) -> bool {
        query_tree(&self.ctc, &self.tree, u, v)
    }
}
