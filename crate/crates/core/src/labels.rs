//! Hop labels: `u ⇝ v` iff `L_out(u)` and `L_in(v)` share a hop.

use crate::graph::Vertex;
use crate::Reachability;

/// Per-vertex ascending, duplicate-free hop lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HopLabeling {
    pub l_out: Vec<Vec<Vertex>>,
    pub l_in: Vec<Vec<Vertex>>,
}

impl HopLabeling {
    pub fn with_vertices(n: usize) -> Self {
        HopLabeling {
            l_out: vec![Vec::new(); n],
            l_in: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.l_out.len()
    }

    pub fn out_label(&self, v: Vertex) -> &[Vertex] {
        &self.l_out[v as usize]
    }

    pub fn in_label(&self, v: Vertex) -> &[Vertex] {
        &self.l_in[v as usize]
    }

    /// Total number of hop entries over both sides.
    pub fn total_entries(&self) -> usize {
        self.l_out.iter().chain(&self.l_in).map(Vec::len).sum()
    }

    /// Sorts and deduplicates every list.
    pub fn normalize(&mut self) {
        for list in self.l_out.iter_mut().chain(self.l_in.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.l_out
            .iter()
            .chain(&self.l_in)
            .all(|l| l.windows(2).all(|w| w[0] < w[1]))
    }

    /// Re-indexes the labeling onto original vertices through a condensation:
    /// every member of a component inherits the component's labels.
    pub fn expand(&self, component_of: &[Vertex]) -> HopLabeling {
        HopLabeling {
            l_out: component_of
                .iter()
                .map(|&c| self.l_out[c as usize].clone())
                .collect(),
            l_in: component_of
                .iter()
                .map(|&c| self.l_in[c as usize].clone())
                .collect(),
        }
    }
}

impl Reachability for HopLabeling {
    #[inline]
    fn reaches(&self, u: Vertex, v: Vertex) -> bool {
        query_hop(self, u, v)
    }
}

/// Sorted-merge intersection test with early exit on the first common hop.
#[inline]
pub fn query_hop(labels: &HopLabeling, u: Vertex, v: Vertex) -> bool {
    sorted_intersects(labels.out_label(u), labels.in_label(v))
}

/// Same answer as [`query_hop`], computed without early exit.
pub fn query_hop_exhaustive(labels: &HopLabeling, u: Vertex, v: Vertex) -> bool {
    common_hops(labels.out_label(u), labels.in_label(v)).count() > 0
}

#[inline]
pub fn sorted_intersects(a: &[Vertex], b: &[Vertex]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Iterates the hops common to two ascending lists.
pub fn common_hops<'a>(a: &'a [Vertex], b: &'a [Vertex]) -> impl Iterator<Item = Vertex> + 'a {
    let mut i = 0;
    let mut j = 0;
    std::iter::from_fn(move || {
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                    return Some(a[i - 1]);
                }
            }
        }
        None
    })
}
