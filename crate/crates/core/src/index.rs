//! One handle over every index kind: build from an edge list, serialize,
//! reload and answer queries in the id space of the original digraph.

use crate::backbone::{discover_backbone, DiscoveryParams, Mode};
use crate::dl::{dl_build, rank_vertices};
use crate::error::{Error, Result};
use crate::format::{self, BruteDoc, GrailDoc, HopLabelDoc, KTreeDoc, ScarabDoc, TreeCoverDoc};
use crate::graph::{condense, Dag, EdgeList, Vertex};
use crate::hl::{hl_build, HlParams};
use crate::labels::{query_hop, HopLabeling};
use crate::query::{
    grail_build, scarab_query, GrailLabels, InnerKind, OnlineSearcher, ScarabIndex, ScarabScratch,
};
use crate::tc::compute_tc;
use crate::tree_cover::{
    build_tree, exact_weights_streaming, ktree_refine, sampled_tree, MultiTreeIndex,
    SamplingParams, TreeIndex,
};
use crate::Reachability;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexKind {
    Dl,
    Hl,
    Tree,
    TreeSampled,
    Ktree,
    Grail,
    Brute,
    Scarab,
}

impl IndexKind {
    pub const ALL: [IndexKind; 8] = [
        IndexKind::Dl,
        IndexKind::Hl,
        IndexKind::Tree,
        IndexKind::TreeSampled,
        IndexKind::Ktree,
        IndexKind::Grail,
        IndexKind::Brute,
        IndexKind::Scarab,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IndexKind::Dl => "dl",
            IndexKind::Hl => "hl",
            IndexKind::Tree => "tree",
            IndexKind::TreeSampled => "tree-sampled",
            IndexKind::Ktree => "ktree",
            IndexKind::Grail => "grail",
            IndexKind::Brute => "brute",
            IndexKind::Scarab => "scarab",
        }
    }

    pub fn parse(s: &str) -> Option<IndexKind> {
        IndexKind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

/// Construction parameters shared by all kinds; each kind reads what it needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildConfig {
    pub epsilon: u32,
    pub theta: f64,
    pub delta: f64,
    pub group_size: usize,
    pub levels: usize,
    pub core_limit: usize,
    pub alpha: f64,
    pub c: usize,
    pub seed: u64,
    /// Number of trees for `ktree`.
    pub trees: usize,
    pub ktree_iters: usize,
    /// Index over the backbone for `scarab`.
    pub inner: InnerKind,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            epsilon: 2,
            theta: 0.05,
            delta: 0.05,
            group_size: 1024,
            levels: 10,
            core_limit: 10_000,
            alpha: 0.05,
            c: 5,
            seed: 0,
            trees: 4,
            ktree_iters: 20,
            inner: InnerKind::Dl,
        }
    }
}

impl BuildConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.epsilon < 1 {
            return fail("epsilon must be at least 1");
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return fail("theta must lie in (0, 1)");
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return fail("delta must lie in (0, 1)");
        }
        if self.c < 1 {
            return fail("c must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return fail("alpha must lie in [0, 1]");
        }
        if self.group_size < 1 {
            return fail("group size must be at least 1");
        }
        if self.trees < 1 {
            return fail("trees must be at least 1");
        }
        Ok(())
    }
}

/// Sorted successor lists: the closure in queryable, serializable form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteIndex {
    pub succ: Vec<Vec<Vertex>>,
}

impl Reachability for BruteIndex {
    fn reaches(&self, u: Vertex, v: Vertex) -> bool {
        self.succ[u as usize].binary_search(&v).is_ok()
    }
}

pub enum IndexBody {
    Hop(HopLabeling),
    Tree(TreeIndex),
    KTree(MultiTreeIndex),
    Grail {
        graph: Dag,
        labels: GrailLabels,
    },
    Brute(BruteIndex),
    Scarab {
        graph: Dag,
        index: Box<ScarabIndex>,
        reduce: bool,
    },
}

pub struct Index {
    pub body: IndexBody,
    /// Original id to DAG vertex, when the input had cycles.
    pub component_of: Option<Vec<Vertex>>,
    n: usize,
}

impl Index {
    /// Condenses the edge list and builds the requested kind on the DAG.
    pub fn build(edges: &EdgeList, kind: IndexKind, cfg: &BuildConfig) -> Result<Index> {
        cfg.validate()?;
        let (g, map) = condense(edges);
        let n = edges.num_vertices;
        let comp = (!map.is_identity()).then_some(map.component_of);
        let body = build_body(&g, kind, cfg)?;
        Ok(match (body, comp) {
            // Hop labels are copied per original vertex; no mapping needed.
            (IndexBody::Hop(l), Some(c)) => Index {
                body: IndexBody::Hop(l.expand(&c)),
                component_of: None,
                n,
            },
            (body, component_of) => Index {
                body,
                component_of,
                n,
            },
        })
    }

    /// Number of original vertices answered for.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn format(&self) -> &'static str {
        match &self.body {
            IndexBody::Hop(_) => format::HOPLABEL,
            IndexBody::Tree(_) => format::TREECOVER,
            IndexBody::KTree(_) => format::KTREE,
            IndexBody::Grail { .. } => format::GRAIL,
            IndexBody::Brute(_) => format::BRUTE,
            IndexBody::Scarab { .. } => format::SCARAB,
        }
    }

    /// Stored label, interval or list entries.
    pub fn entries(&self) -> u64 {
        match &self.body {
            IndexBody::Hop(l) => l.total_entries() as u64,
            IndexBody::Tree(t) => t.ctc.total_entries(),
            IndexBody::KTree(m) => m.total_entries(),
            IndexBody::Grail { labels, .. } => labels.intervals.len() as u64,
            IndexBody::Brute(b) => b.succ.iter().map(|s| s.len() as u64).sum(),
            IndexBody::Scarab { index, .. } => {
                (index.access_entries() + index.backbone.edges.len()) as u64
            }
        }
    }

    pub fn to_json(&self) -> String {
        let comp = self.component_of.clone();
        let text = match &self.body {
            IndexBody::Hop(l) => serde_json::to_string(&HopLabelDoc::new(l)),
            IndexBody::Tree(t) => serde_json::to_string(&TreeCoverDoc::new(&t.tree, &t.ctc, comp)),
            IndexBody::KTree(m) => serde_json::to_string(&KTreeDoc::new(m, comp)),
            IndexBody::Grail { graph, labels } => {
                serde_json::to_string(&GrailDoc::new(graph, labels, comp))
            }
            IndexBody::Brute(b) => serde_json::to_string(&BruteDoc::new(b.succ.clone(), comp)),
            IndexBody::Scarab {
                graph,
                index,
                reduce,
            } => serde_json::to_string(&ScarabDoc::new(graph, index, *reduce, comp)),
        };
        text.expect("index documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Index> {
        let tag = format::format_of(text)?;
        let (body, component_of, dag_n) = match tag.as_str() {
            format::HOPLABEL => {
                let l = serde_json::from_str::<HopLabelDoc>(text)?.into_labels()?;
                let n = l.n();
                (IndexBody::Hop(l), None, n)
            }
            format::TREECOVER => {
                let (tree, ctc, comp) = serde_json::from_str::<TreeCoverDoc>(text)?.into_parts()?;
                let n = tree.n();
                (IndexBody::Tree(TreeIndex { tree, ctc }), comp, n)
            }
            format::KTREE => {
                let (m, comp) = serde_json::from_str::<KTreeDoc>(text)?.into_index()?;
                let n = m.assignment.len();
                (IndexBody::KTree(m), comp, n)
            }
            format::GRAIL => {
                let (graph, labels, comp) = serde_json::from_str::<GrailDoc>(text)?.into_parts()?;
                let n = graph.n();
                (IndexBody::Grail { graph, labels }, comp, n)
            }
            format::BRUTE => {
                let (succ, comp) = serde_json::from_str::<BruteDoc>(text)?.into_lists()?;
                let n = succ.len();
                (IndexBody::Brute(BruteIndex { succ }), comp, n)
            }
            format::SCARAB => {
                let p = serde_json::from_str::<ScarabDoc>(text)?.into_parts()?;
                let n = p.graph.n();
                let index = ScarabIndex::build(&p.graph, p.backbone, p.inner, p.grail, p.reduce)?;
                let body = IndexBody::Scarab {
                    graph: p.graph,
                    index: Box::new(index),
                    reduce: p.reduce,
                };
                (body, p.component_of, n)
            }
            other => return Err(Error::Format(format!("unknown format {other}"))),
        };
        let n = component_of.as_ref().map_or(dag_n, Vec::len);
        Ok(Index {
            body,
            component_of,
            n,
        })
    }

    /// A query handle with its own scratch space.
    pub fn querier(&self) -> Querier<'_> {
        let scratch = match &self.body {
            IndexBody::Grail { graph, .. } => Scratch::Online(OnlineSearcher::new(graph.n())),
            IndexBody::Scarab { index, .. } => Scratch::Scarab(Box::new(ScarabScratch::new(index))),
            _ => Scratch::None,
        };
        Querier {
            index: self,
            scratch,
        }
    }
}

fn build_body(g: &Dag, kind: IndexKind, cfg: &BuildConfig) -> Result<IndexBody> {
    Ok(match kind {
        IndexKind::Dl => IndexBody::Hop(dl_build(g, &rank_vertices(g))),
        IndexKind::Hl => IndexBody::Hop(hl_build(
            g,
            HlParams {
                epsilon: cfg.epsilon,
                max_levels: cfg.levels,
                core_limit: cfg.core_limit,
                ..HlParams::default()
            },
        )?),
        IndexKind::Tree => {
            let t = build_tree(g, &exact_weights_streaming(g));
            IndexBody::Tree(TreeIndex::build(g, t))
        }
        IndexKind::TreeSampled => {
            let (t, _) = sampled_tree(
                g,
                SamplingParams {
                    theta: cfg.theta,
                    delta: cfg.delta,
                    group_size: cfg.group_size,
                    seed: cfg.seed,
                },
            )?;
            IndexBody::Tree(TreeIndex::build(g, t))
        }
        IndexKind::Ktree => IndexBody::KTree(ktree_refine(g, cfg.trees, cfg.ktree_iters, cfg.seed)),
        IndexKind::Grail => IndexBody::Grail {
            graph: g.clone(),
            labels: grail_build(g, cfg.c, cfg.seed)?,
        },
        IndexKind::Brute => {
            let tc = compute_tc(g)?;
            IndexBody::Brute(BruteIndex {
                succ: g.vertices().map(|u| tc.succ(u)).collect(),
            })
        }
        IndexKind::Scarab => {
            let b = discover_backbone(
                g,
                DiscoveryParams {
                    epsilon: cfg.epsilon,
                    mode: Mode::TwoSide,
                    alpha: cfg.alpha,
                    prune_edges: false,
                },
            )?;
            let gl = grail_build(g, cfg.c, cfg.seed)?;
            let reduce = true;
            let index = ScarabIndex::build(g, b, cfg.inner, gl, reduce)?;
            IndexBody::Scarab {
                graph: g.clone(),
                index: Box::new(index),
                reduce,
            }
        }
    })
}

enum Scratch {
    None,
    Online(OnlineSearcher),
    Scarab(Box<ScarabScratch>),
}

pub struct Querier<'a> {
    index: &'a Index,
    scratch: Scratch,
}

impl Querier<'_> {
    /// Ids are original vertex ids below [`Index::n`].
    pub fn reaches(&mut self, u: Vertex, v: Vertex) -> bool {
        let idx = self.index;
        let (u, v) = match &idx.component_of {
            Some(c) => (c[u as usize], c[v as usize]),
            None => (u, v),
        };
        match (&idx.body, &mut self.scratch) {
            (IndexBody::Hop(l), _) => query_hop(l, u, v),
            (IndexBody::Tree(t), _) => t.reaches(u, v),
            (IndexBody::KTree(m), _) => m.reaches(u, v),
            (IndexBody::Brute(b), _) => b.reaches(u, v),
            (IndexBody::Grail { graph, labels }, Scratch::Online(s)) => {
                s.query(graph, labels, u, v)
            }
            (IndexBody::Scarab { graph, index, .. }, Scratch::Scarab(s)) => {
                scarab_query(graph, index, s, u, v)
            }
            _ => unreachable!("scratch matches the index body"),
        }
    }
}
