use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::best_parents;
use crate::graph::{Dag, Vertex};
use crate::rng_from_seed;
use crate::tc::TransitiveClosure;

/// Edge weights keyed by tail vertex, plus each vertex's heaviest in-edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    /// `tail_weight[p]` is `w(p, v)` for every out-edge `(p, v)`.
    pub tail_weight: Vec<u64>,
    /// `None` means the vertex hangs off the virtual root.
    pub best_parent: Vec<Option<Vertex>>,
}

impl WeightTable {
    pub fn from_tail_weights(g: &Dag, tail_weight: Vec<u64>) -> WeightTable {
        let best_parent = best_parents(g, &tail_weight);
        WeightTable {
            tail_weight,
            best_parent,
        }
    }

    /// Weight of the edge `(p, v)`; `p = None` is the virtual root.
    pub fn weight(&self, p: Option<Vertex>) -> u64 {
        p.map_or(0, |p| self.tail_weight[p as usize])
    }
}

pub fn exact_weights(g: &Dag, tc: &TransitiveClosure) -> WeightTable {
    let w = g.vertices().map(|v| tc.pred_size(v)).collect();
    WeightTable::from_tail_weights(g, w)
}

/// Same table as [`exact_weights`] without keeping the whole closure alive:
/// a predecessor set is dropped once every out-neighbor has consumed it.
pub fn exact_weights_streaming(g: &Dag) -> WeightTable {
    let mut all = FixedBitSet::with_capacity(g.n());
    all.insert_range(..);
    WeightTable::from_tail_weights(g, conditional_pass(g, &all))
}

/// `|pred(v) ∩ group|` for every vertex, propagating only group bits.
///
/// Working sets are indexed by position inside the group, so memory is
/// bounded by `n · |group|` bits and sets are freed as soon as they are
/// no longer needed.
pub fn conditional_pass(g: &Dag, group: &FixedBitSet) -> Vec<u64> {
    let n = g.n();
    let mut local = vec![u32::MAX; n];
    let mut width = 0usize;
    for x in group.ones() {
        local[x] = width as u32;
        width += 1;
    }
    let mut pending: Vec<u32> = g.vertices().map(|v| g.out_degree(v) as u32).collect();
    let mut sets: Vec<Option<FixedBitSet>> = vec![None; n];
    let mut counts = vec![0u64; n];
    for &v in g.topo() {
        let mut set = FixedBitSet::with_capacity(width);
        if local[v as usize] != u32::MAX {
            set.insert(local[v as usize] as usize);
        }
        for &p in g.in_neighbors(v) {
            set.union_with(sets[p as usize].as_ref().expect("tail still pending"));
            pending[p as usize] -= 1;
            if pending[p as usize] == 0 {
                sets[p as usize] = None;
            }
        }
        counts[v as usize] = set.count_ones(..) as u64;
        if pending[v as usize] > 0 {
            sets[v as usize] = Some(set);
        }
    }
    counts
}

/// A seeded split of the vertices into `k` groups whose sizes differ by at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPartition {
    pub group_of: Vec<u32>,
    pub members: Vec<Vec<Vertex>>,
}

impl GroupPartition {
    pub fn random(n: usize, k: usize, seed: u64) -> GroupPartition {
        assert!(k >= 1, "need at least one group");
        let mut order: Vec<Vertex> = (0..n as Vertex).collect();
        order.shuffle(&mut rng_from_seed(seed));
        let mut members = vec![Vec::new(); k];
        let mut group_of = vec![0u32; n];
        for (i, &v) in order.iter().enumerate() {
            members[i % k].push(v);
            group_of[v as usize] = (i % k) as u32;
        }
        for m in &mut members {
            m.sort_unstable();
        }
        GroupPartition { group_of, members }
    }

    /// Partition into groups of at most `group_size` vertices.
    pub fn with_group_size(n: usize, group_size: usize, seed: u64) -> GroupPartition {
        let k = n.div_ceil(group_size.max(1)).max(1);
        GroupPartition::random(n, k, seed)
    }

    pub fn k(&self) -> usize {
        self.members.len()
    }

    pub fn mask(&self, k: usize) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.group_of.len());
        for &v in &self.members[k] {
            set.insert(v as usize);
        }
        set
    }
}

/// Exact weights assembled from `k` independent conditional passes.
/// Passes run in parallel; partial counts are summed per vertex.
pub fn batched_weights(g: &Dag, k: usize, seed: u64) -> WeightTable {
    let part = GroupPartition::random(g.n(), k, seed);
    let totals = (0..part.k())
        .into_par_iter()
        .map(|i| conditional_pass(g, &part.mask(i)))
        .reduce(
            || vec![0u64; g.n()],
            |mut acc, c| {
                acc.iter_mut().zip(c).for_each(|(a, b)| *a += b);
                acc
            },
        );
    WeightTable::from_tail_weights(g, totals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{chain3, diamond, v};
    use crate::graph::random_dag;
    use crate::tc::compute_tc;

    fn mask(n: usize, xs: &[Vertex]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        xs.iter().for_each(|&x| s.insert(x as usize));
        s
    }

    #[test]
    fn fixture_weights() {
        let g = chain3();
        let w = exact_weights(&g, &compute_tc(&g).unwrap());
        assert_eq!(w.weight(Some(v(1))), 1);
        assert_eq!(w.weight(Some(v(2))), 2);

        let g = diamond();
        let w = exact_weights(&g, &compute_tc(&g).unwrap());
        assert_eq!(w.tail_weight, vec![1, 2, 2, 4]);
        assert_eq!(w.weight(Some(v(2))), 2);
        assert_eq!(w.weight(Some(v(3))), 2);
        assert_eq!(w.weight(Some(v(1))), 1);
        assert_eq!(
            w.best_parent,
            vec![None, Some(v(1)), Some(v(1)), Some(v(2))]
        );
        assert_eq!(w.weight(None), 0);

        let w = exact_weights(&Dag::empty(4), &compute_tc(&Dag::empty(4)).unwrap());
        assert!(w.best_parent.iter().all(Option::is_none));
    }

    #[test]
    fn diamond_conditional_counts() {
        let g = diamond();
        assert_eq!(
            conditional_pass(&g, &mask(4, &[v(1), v(2)])),
            vec![1, 2, 1, 2]
        );
        assert_eq!(
            conditional_pass(&g, &mask(4, &[v(3), v(4)])),
            vec![0, 0, 1, 2]
        );
        let tc = compute_tc(&g).unwrap();
        let full = conditional_pass(&g, &mask(4, &[0, 1, 2, 3]));
        assert_eq!(full, (0..4).map(|x| tc.pred_size(x)).collect::<Vec<_>>());
    }

    #[test]
    fn partition_shape() {
        let p = GroupPartition::random(10, 3, 5);
        let sizes: Vec<_> = p.members.iter().map(Vec::len).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 10);
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        for (k, m) in p.members.iter().enumerate() {
            assert!(m.iter().all(|&x| p.group_of[x as usize] as usize == k));
        }
        assert_eq!(GroupPartition::with_group_size(2000, 1024, 0).k(), 2);
    }

    #[test]
    fn batched_equals_exact() {
        let g = random_dag(300, 2.0, 11);
        let exact = exact_weights(&g, &compute_tc(&g).unwrap());
        assert_eq!(exact_weights_streaming(&g), exact);
        for k in [1, 2, 7, 300] {
            assert_eq!(batched_weights(&g, k, 3), exact);
        }
        let d = diamond();
        let exact = exact_weights(&d, &compute_tc(&d).unwrap());
        for seed in 0..5 {
            assert_eq!(batched_weights(&d, 2, seed), exact);
        }
    }
}
