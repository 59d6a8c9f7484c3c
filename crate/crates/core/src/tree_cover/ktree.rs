//! Several tree covers, each vertex answered by whichever compresses it best.
//!
//! Refinement alternates like k-means: assign every vertex to the tree with
//! the shortest compressed list, then rebuild each tree as the optimum for
//! the vertices it owns (weights `|pred(p | S_i)|`). Neither step can raise
//! `Σ_u |succ(u | T_assign(u))|`.

use fixedbitset::FixedBitSet;

use super::{
    best_parents, compress_tc, conditional_pass, query_tree, CompressedTC, GroupPartition,
    TreeCover,
};
use crate::graph::{Dag, Vertex};
use crate::Reachability;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiTreeIndex {
    pub trees: Vec<TreeCover>,
    pub ctcs: Vec<CompressedTC>,
    pub assignment: Vec<u32>,
    pub objective: u64,
    /// Objective after every assignment step, first entry from the seed trees.
    pub history: Vec<u64>,
}

impl MultiTreeIndex {
    pub fn k(&self) -> usize {
        self.trees.len()
    }

    /// Interval entries actually consulted: each vertex's list in its own tree.
    pub fn total_entries(&self) -> u64 {
        self.objective
    }
}

impl Reachability for MultiTreeIndex {
    fn reaches(&self, u: Vertex, v: Vertex) -> bool {
        let i = self.assignment[u as usize] as usize;
        query_tree(&self.ctcs[i], &self.trees[i], u, v)
    }
}

fn group_tree(g: &Dag, group: &FixedBitSet) -> TreeCover {
    let w = conditional_pass(g, group);
    TreeCover::from_parents(best_parents(g, &w), &w)
}

/// Assigns each vertex to its cheapest tree (lowest index on ties).
fn assign(ctcs: &[CompressedTC], n: usize) -> (Vec<u32>, u64) {
    let mut objective = 0;
    let assignment = (0..n)
        .map(|u| {
            let (best, size) = ctcs
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.lists[u].len()))
                .min_by_key(|&(i, len)| (len, i))
                .expect("at least one tree");
            objective += size as u64;
            best as u32
        })
        .collect();
    (assignment, objective)
}

pub fn ktree_refine(g: &Dag, k: usize, max_iters: usize, seed: u64) -> MultiTreeIndex {
    assert!(k >= 1, "need at least one tree");
    let n = g.n();
    let part = GroupPartition::random(n, k, seed);
    let mut trees: Vec<TreeCover> = (0..k).map(|i| group_tree(g, &part.mask(i))).collect();
    let mut ctcs: Vec<CompressedTC> = trees.iter().map(|t| compress_tc(g, t)).collect();
    let (mut assignment, mut objective) = assign(&ctcs, n);
    let mut history = vec![objective];

    for _ in 0..max_iters {
        let mut masks = vec![FixedBitSet::with_capacity(n); k];
        for (u, &i) in assignment.iter().enumerate() {
            masks[i as usize].insert(u);
        }
        let new_trees: Vec<TreeCover> = masks.iter().map(|m| group_tree(g, m)).collect();
        let new_ctcs: Vec<CompressedTC> = new_trees.iter().map(|t| compress_tc(g, t)).collect();
        let (new_assignment, new_objective) = assign(&new_ctcs, n);
        if new_objective >= objective {
            break;
        }
        trees = new_trees;
        ctcs = new_ctcs;
        assignment = new_assignment;
        objective = new_objective;
        history.push(objective);
    }

    MultiTreeIndex {
        trees,
        ctcs,
        assignment,
        objective,
        history,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::diamond;
    use crate::graph::random_dag;
    use crate::tc::{compute_tc, reach};
    use crate::tree_cover::{build_tree, exact_weights};

    #[test]
    fn single_tree_is_the_optimum() {
        let g = random_dag(150, 2.0, 2);
        let tc = compute_tc(&g).unwrap();
        let opt = build_tree(&g, &exact_weights(&g, &tc));
        let m = ktree_refine(&g, 1, 5, 0);
        assert_eq!(m.trees[0].parent, opt.parent);
        assert_eq!(m.objective, tc.total_size() - opt.weight);
    }

    #[test]
    fn diamond_two_trees() {
        let m = ktree_refine(&diamond(), 2, 10, 1);
        assert!(m.objective <= 5);
    }

    #[test]
    fn refinement_is_monotone_and_correct() {
        for seed in 0..4 {
            let g = random_dag(120, 2.0, seed);
            let tc = compute_tc(&g).unwrap();
            let m = ktree_refine(&g, 3, 10, seed);
            assert!(m.history.windows(2).all(|w| w[1] <= w[0]));
            for u in g.vertices() {
                for v in g.vertices() {
                    assert_eq!(m.reaches(u, v), reach(&tc, u, v));
                }
            }
        }
    }
}
