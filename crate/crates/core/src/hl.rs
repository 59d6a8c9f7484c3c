//! Hierarchical labeling.
//!
//! The DAG is peeled into levels `V_0 ⊃ V_1 ⊃ … ⊃ V_h`, each `G_{i+1}` a
//! one-side backbone of `G_i`. The core `G_h` is labeled directly; every
//! other vertex then takes its `⌈ε/2⌉`-hop neighborhood in its own level
//! plus the labels of its dominating access vertices one level up.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::backbone::{
    access_sets, backbone_edges, build_cover_instance, greedy_cover, AccessScratch, Backbone, Mode,
};
use crate::error::{Error, Result};
use crate::graph::{BfsScratch, Dag, Direction, Vertex};
use crate::labels::HopLabeling;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HlParams {
    pub epsilon: u32,
    pub max_levels: usize,
    pub core_limit: usize,
    /// Drop one-side edges implied by a shorter two-leg route.
    pub prune_edges: bool,
}

impl Default for HlParams {
    fn default() -> Self {
        HlParams {
            epsilon: 2,
            max_levels: 10,
            core_limit: 10_000,
            prune_edges: true,
        }
    }
}

/// One level of the hierarchy, stored over local ids `0..|V_i|`.
#[derive(Debug, Clone)]
pub struct Level {
    /// Original ids of the members, ascending; local id = position.
    pub vertices: Vec<Vertex>,
    pub graph: Dag,
}

#[derive(Debug, Clone)]
pub struct Hierarchy {
    pub epsilon: u32,
    pub levels: Vec<Level>,
    /// Highest level each original vertex belongs to.
    pub level_of: Vec<u32>,
}

impl Hierarchy {
    /// Number of peeling steps; the core is `levels[h]`.
    pub fn h(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn core(&self) -> &Level {
        &self.levels[self.h()]
    }

    /// Local id of original vertex `v` inside level `i`, if it is a member.
    pub fn local(&self, i: usize, v: Vertex) -> Option<u32> {
        self.levels[i]
            .vertices
            .binary_search(&v)
            .ok()
            .map(|x| x as u32)
    }
}

pub fn decompose(g: &Dag, p: HlParams) -> Result<Hierarchy> {
    if p.epsilon == 0 {
        return Err(Error::InvalidParameter("epsilon must be at least 1".into()));
    }
    let mut levels = vec![Level {
        vertices: g.vertices().collect(),
        graph: g.clone(),
    }];
    while levels.len() - 1 < p.max_levels {
        let cur = levels.last().expect("level 0 exists");
        if cur.vertices.len() <= p.core_limit {
            break;
        }
        let inst = build_cover_instance(&cur.graph, p.epsilon, Mode::OneSide)?;
        if inst.ground.is_empty() {
            break;
        }
        let chosen = greedy_cover(&inst, &[])?;
        if chosen.len() >= cur.vertices.len() {
            break;
        }
        let edges = backbone_edges(&cur.graph, &chosen, p.epsilon, Mode::OneSide, p.prune_edges);
        let bb = Backbone {
            epsilon: p.epsilon,
            mode: Mode::OneSide,
            vertices: chosen,
            edges,
        };
        let next = bb.graph(cur.graph.n());
        let vertices = next
            .global
            .iter()
            .map(|&l| cur.vertices[l as usize])
            .collect();
        levels.push(Level {
            vertices,
            graph: next.dag,
        });
    }
    let mut level_of = vec![0u32; g.n()];
    for (i, lvl) in levels.iter().enumerate() {
        for &v in &lvl.vertices {
            level_of[v as usize] = i as u32;
        }
    }
    Ok(Hierarchy {
        epsilon: p.epsilon,
        levels,
        level_of,
    })
}

fn membership_of_next(hier: &Hierarchy, i: usize) -> FixedBitSet {
    let cur = &hier.levels[i];
    let mut member = FixedBitSet::with_capacity(cur.vertices.len());
    for &v in &hier.levels[i + 1].vertices {
        let l = hier.local(i, v).expect("levels are nested");
        member.insert(l as usize);
    }
    member
}

/// Dominating access vertices of `v` in `G_i`, as original ids.
/// Requires `level_of(v) == i < h`.
pub fn level_access_sets(hier: &Hierarchy, i: usize, v: Vertex) -> (Vec<Vertex>, Vec<Vertex>) {
    assert!(i < hier.h() && hier.level_of[v as usize] as usize == i);
    let lvl = &hier.levels[i];
    let member = membership_of_next(hier, i);
    let mut scratch = AccessScratch::new(lvl.vertices.len());
    let local = hier.local(i, v).expect("member of its own level");
    let a = access_sets(&lvl.graph, &member, hier.epsilon, local, &mut scratch);
    let to_global = |xs: Vec<u32>| xs.into_iter().map(|x| lvl.vertices[x as usize]).collect();
    (to_global(a.out), to_global(a.inn))
}

/// True when no pair of core vertices is more than `ε` hops apart.
pub fn core_diameter_within(core: &Dag, epsilon: u32) -> bool {
    let mut bfs = BfsScratch::new(core.n());
    core.vertices().all(|v| {
        let visited = bfs.run(core, v, epsilon + 1, Direction::Forward);
        let far = visited.last().copied();
        far.is_none_or(|w| bfs.dist(w) != Some(epsilon + 1))
    })
}

/// Labels of the core vertices, indexed by core-local id, hops as original ids.
pub fn label_core(hier: &Hierarchy) -> (Vec<Vec<Vertex>>, Vec<Vec<Vertex>>) {
    let core = hier.core();
    let g = &core.graph;
    let mut bfs = BfsScratch::new(g.n());
    let global = |xs: &[Vertex]| -> Vec<Vertex> {
        let mut out: Vec<Vertex> = xs.iter().map(|&x| core.vertices[x as usize]).collect();
        out.sort_unstable();
        out
    };
    if core_diameter_within(g, hier.epsilon) {
        let k = hier.epsilon.div_ceil(2);
        let l_out = g
            .vertices()
            .map(|v| global(bfs.run(g, v, k, Direction::Forward)))
            .collect();
        let l_in = g
            .vertices()
            .map(|v| global(bfs.run(g, v, k, Direction::Reverse)))
            .collect();
        (l_out, l_in)
    } else {
        let l_out = g
            .vertices()
            .map(|v| global(bfs.run(g, v, u32::MAX, Direction::Forward)))
            .collect();
        let l_in = core.vertices.iter().map(|&v| vec![v]).collect();
        (l_out, l_in)
    }
}

/// Builds the labeling for every vertex of `g`, hops given as vertex ids of `g`.
pub fn hl_build(g: &Dag, p: HlParams) -> Result<HopLabeling> {
    let hier = decompose(g, p)?;
    Ok(label_hierarchy(g.n(), &hier))
}

pub fn label_hierarchy(n: usize, hier: &Hierarchy) -> HopLabeling {
    let mut labels = HopLabeling::with_vertices(n);
    let (core_out, core_in) = label_core(hier);
    for (i, &v) in hier.core().vertices.iter().enumerate() {
        labels.l_out[v as usize] = core_out[i].clone();
        labels.l_in[v as usize] = core_in[i].clone();
    }

    let eps = hier.epsilon;
    let k = eps.div_ceil(2);
    for i in (0..hier.h()).rev() {
        let lvl = &hier.levels[i];
        let g = &lvl.graph;
        let member = membership_of_next(hier, i);
        let todo: Vec<u32> = (0..lvl.vertices.len() as u32)
            .filter(|&l| !member.contains(l as usize))
            .collect();
        let frozen = &labels;
        let computed: Vec<(Vertex, Vec<Vertex>, Vec<Vertex>)> = todo
            .par_iter()
            .map_init(
                || (BfsScratch::new(g.n()), AccessScratch::new(g.n())),
                |(bfs, acc), &l| {
                    let to_global = |x: &Vertex| lvl.vertices[*x as usize];
                    let mut out: Vec<Vertex> = bfs
                        .run(g, l, k, Direction::Forward)
                        .iter()
                        .map(to_global)
                        .collect();
                    let mut inn: Vec<Vertex> = bfs
                        .run(g, l, k, Direction::Reverse)
                        .iter()
                        .map(to_global)
                        .collect();
                    let a = access_sets(g, &member, eps, l, acc);
                    for x in &a.out {
                        out.extend_from_slice(frozen.out_label(to_global(x)));
                    }
                    for x in &a.inn {
                        inn.extend_from_slice(frozen.in_label(to_global(x)));
                    }
                    out.sort_unstable();
                    out.dedup();
                    inn.sort_unstable();
                    inn.dedup();
                    (lvl.vertices[l as usize], out, inn)
                },
            )
            .collect();
        for (v, out, inn) in computed {
            labels.l_out[v as usize] = out;
            labels.l_in[v as usize] = inn;
        }
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{all, chain3, chain4, diamond, v};
    use crate::graph::random_dag;
    use crate::labels::query_hop;
    use crate::tc::{compute_tc, reach};

    fn params(epsilon: u32, core_limit: usize) -> HlParams {
        HlParams {
            epsilon,
            core_limit,
            ..HlParams::default()
        }
    }

    fn vs(xs: &[Vertex]) -> Vec<Vertex> {
        xs.iter().map(|&x| v(x)).collect()
    }

    #[test]
    fn diamond_hierarchy() {
        let hier = decompose(&diamond(), params(2, 1)).unwrap();
        assert_eq!(hier.h(), 1);
        assert_eq!(hier.levels[1].vertices, vs(&[1]));
        let (out, inn) = level_access_sets(&hier, 0, v(2));
        assert!(out.is_empty());
        assert_eq!(inn, vs(&[1]));
    }

    #[test]
    fn diamond_labels() {
        let g = diamond();
        let l = label_hierarchy(4, &decompose(&g, params(2, 1)).unwrap());
        // 1 is the whole core, so it keeps only itself.
        assert_eq!(l.l_out[v(1) as usize], vs(&[1]));
        assert_eq!(l.l_in[v(4) as usize], vs(&[1, 2, 3, 4]));
        assert_eq!(l.l_out[v(3) as usize], vs(&[3, 4]));
        assert_eq!(l.l_in[v(2) as usize], vs(&[1, 2]));
        assert!(query_hop(&l, v(1), v(4)));
        assert!(!query_hop(&l, v(3), v(2)));
    }

    #[test]
    fn chain4_access() {
        let hier = Hierarchy {
            epsilon: 1,
            levels: vec![
                Level {
                    vertices: vs(&[1, 2, 3, 4]),
                    graph: chain4(),
                },
                Level {
                    vertices: vs(&[2, 3]),
                    graph: Dag::from_edges(2, &[(0, 1)]).unwrap(),
                },
            ],
            level_of: vec![0, 1, 1, 0],
        };
        assert_eq!(level_access_sets(&hier, 0, v(1)).0, vs(&[2]));
    }

    #[test]
    fn trivial_hierarchies() {
        let g = chain3();
        assert_eq!(decompose(&g, params(2, 10_000)).unwrap().h(), 0);
        let capped = HlParams {
            max_levels: 0,
            core_limit: 0,
            ..HlParams::default()
        };
        assert_eq!(decompose(&random_dag(50, 2.0, 1), capped).unwrap().h(), 0);
        let l = hl_build(&Dag::empty(4), params(2, 0)).unwrap();
        for x in 0..4 {
            assert_eq!(l.l_out[x], vec![x as Vertex]);
            assert_eq!(l.l_in[x], vec![x as Vertex]);
        }
    }

    #[test]
    fn core_labels() {
        // CHAIN3 as the core, ε = 2: one-hop neighborhoods.
        let hier = decompose(&chain3(), params(2, 10)).unwrap();
        let (out, inn) = label_core(&hier);
        assert_eq!(out[0], vs(&[1, 2]));
        assert_eq!(inn[2], vs(&[2, 3]));
        // Diameter 3 > ε: closure fallback.
        let hier = decompose(&chain4(), params(2, 10)).unwrap();
        assert!(!core_diameter_within(&hier.core().graph, 2));
        let (out, inn) = label_core(&hier);
        assert_eq!(out[0], vs(&[1, 2, 3, 4]));
        assert_eq!(inn[3], vs(&[4]));
    }

    #[test]
    fn complete_on_fixtures_and_random() {
        let mut graphs: Vec<Dag> = all().into_iter().map(|(_, g)| g).collect();
        graphs.extend((0..8).map(|s| random_dag(250, 2.0, s)));
        for g in &graphs {
            let tc = compute_tc(g).unwrap();
            for eps in [1, 2, 3] {
                for core_limit in [0, 8] {
                    let l = hl_build(g, params(eps, core_limit)).unwrap();
                    assert!(l.is_normalized());
                    for u in g.vertices() {
                        assert!(l.out_label(u).contains(&u) && l.in_label(u).contains(&u));
                        for w in g.vertices() {
                            assert_eq!(query_hop(&l, u, w), reach(&tc, u, w), "eps {eps}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn levels_preserve_reachability_and_shrink() {
        for seed in 0..4 {
            let g = random_dag(300, 2.0, seed);
            let tc = compute_tc(&g).unwrap();
            let hier = decompose(&g, params(2, 0)).unwrap();
            assert!(hier.h() >= 1);
            for w in hier.levels.windows(2) {
                assert!(w[1].vertices.len() < w[0].vertices.len());
            }
            for lvl in &hier.levels {
                let ltc = compute_tc(&lvl.graph).unwrap();
                for (a, &x) in lvl.vertices.iter().enumerate() {
                    for (b, &y) in lvl.vertices.iter().enumerate() {
                        assert_eq!(reach(&ltc, a as Vertex, b as Vertex), reach(&tc, x, y));
                    }
                }
            }
        }
    }
}
