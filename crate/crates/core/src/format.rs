//! JSON documents for every index kind.
//!
//! Each document is a single JSON object tagged by a `"format"` string.
//! Documents for graphs that were condensed carry an extra `component_of`
//! array mapping original ids to DAG vertices; it is omitted when the input
//! was already acyclic.

use serde::{Deserialize, Serialize};

use crate::backbone::{Backbone, Mode};
use crate::error::{Error, Result};
use crate::graph::{Dag, Vertex};
use crate::labels::HopLabeling;
use crate::query::{GrailLabels, InnerKind, ScarabIndex};
use crate::tree_cover::{CompressedTC, Interval, MultiTreeIndex, TreeCover};

pub const TREECOVER: &str = "treecover-v1";
pub const BACKBONE: &str = "backbone-v1";
pub const HOPLABEL: &str = "hoplabel-v1";
pub const KTREE: &str = "ktree-v1";
pub const GRAIL: &str = "grail-v1";
pub const BRUTE: &str = "brute-v1";
pub const SCARAB: &str = "scarab-v1";

/// Original id to DAG vertex, present only for condensed inputs.
pub type ComponentMap = Option<Vec<Vertex>>;

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn expect_format(found: &str, want: &str) -> Result<()> {
    if found == want {
        Ok(())
    } else {
        Err(bad(format!("expected format {want}, found {found}")))
    }
}

/// Reads only the `"format"` tag of a document.
pub fn format_of(text: &str) -> Result<String> {
    #[derive(Deserialize)]
    struct Tag {
        format: String,
    }
    Ok(serde_json::from_str::<Tag>(text)?.format)
}

fn check_ids(ids: impl IntoIterator<Item = Vertex>, n: usize, what: &str) -> Result<()> {
    for v in ids {
        if v as usize >= n {
            return Err(bad(format!("{what}: vertex {v} out of range for n={n}")));
        }
    }
    Ok(())
}

fn check_len(len: usize, n: usize, what: &str) -> Result<()> {
    if len == n {
        Ok(())
    } else {
        Err(bad(format!("{what} has {len} entries, expected {n}")))
    }
}

fn check_components(component_of: &Option<Vec<Vertex>>, n: usize) -> Result<()> {
    if let Some(c) = component_of {
        check_ids(c.iter().copied(), n, "component_of")?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeCoverDoc {
    pub format: String,
    pub n: usize,
    /// Parent id per vertex, `-1` for children of the virtual root.
    pub parent: Vec<i64>,
    pub interval: Vec<[u32; 2]>,
    pub ctc: Vec<Vec<[u32; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component_of: Option<Vec<Vertex>>,
}

fn intervals_out(iv: &[Interval]) -> Vec<[u32; 2]> {
    iv.iter().map(|i| [i.pre, i.post]).collect()
}

fn intervals_in(iv: &[[u32; 2]], n: usize) -> Result<Vec<Interval>> {
    iv.iter()
        .map(|&[pre, post]| {
            if pre == 0 || pre > post || post as usize > n {
                Err(bad(format!("malformed interval [{pre},{post}]")))
            } else {
                Ok(Interval { pre, post })
            }
        })
        .collect()
}

fn parents_out(parent: &[Option<Vertex>]) -> Vec<i64> {
    parent.iter().map(|p| p.map_or(-1, i64::from)).collect()
}

fn parents_in(parent: &[i64], n: usize) -> Result<Vec<Option<Vertex>>> {
    parent
        .iter()
        .map(|&p| match p {
            -1 => Ok(None),
            p if p >= 0 && (p as usize) < n => Ok(Some(p as Vertex)),
            p => Err(bad(format!("parent {p} out of range"))),
        })
        .collect()
}

impl TreeCoverDoc {
    pub fn new(tree: &TreeCover, ctc: &CompressedTC, component_of: Option<Vec<Vertex>>) -> Self {
        TreeCoverDoc {
            format: TREECOVER.into(),
            n: tree.n(),
            parent: parents_out(&tree.parent),
            interval: intervals_out(&tree.interval),
            ctc: ctc.lists.iter().map(|l| intervals_out(l)).collect(),
            component_of,
        }
    }

    /// The stored tree and lists. The tree weight is not part of the
    /// document and comes back as 0.
    pub fn into_parts(self) -> Result<(TreeCover, CompressedTC, Option<Vec<Vertex>>)> {
        expect_format(&self.format, TREECOVER)?;
        let n = self.n;
        check_len(self.parent.len(), n, "parent")?;
        check_len(self.interval.len(), n, "interval")?;
        check_len(self.ctc.len(), n, "ctc")?;
        check_components(&self.component_of, n)?;
        let tree = TreeCover {
            parent: parents_in(&self.parent, n)?,
            interval: intervals_in(&self.interval, n)?,
            weight: 0,
        };
        let lists = self
            .ctc
            .iter()
            .map(|l| intervals_in(l, n))
            .collect::<Result<Vec<_>>>()?;
        Ok((tree, CompressedTC { lists }, self.component_of))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackboneDoc {
    pub format: String,
    pub epsilon: u32,
    pub mode: String,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<[Vertex; 2]>,
}

impl BackboneDoc {
    pub fn new(b: &Backbone) -> Self {
        BackboneDoc {
            format: BACKBONE.into(),
            epsilon: b.epsilon,
            mode: b.mode.as_str().into(),
            vertices: b.vertices.clone(),
            edges: b.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    /// Checks ids against `n`, membership of edge endpoints and acyclicity.
    pub fn into_backbone(self, n: usize) -> Result<Backbone> {
        expect_format(&self.format, BACKBONE)?;
        let mode =
            Mode::parse(&self.mode).ok_or_else(|| bad(format!("unknown mode {}", self.mode)))?;
        if self.epsilon == 0 {
            return Err(bad("epsilon must be at least 1"));
        }
        check_ids(self.vertices.iter().copied(), n, "backbone vertices")?;
        if self.vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("backbone vertices must be strictly ascending"));
        }
        let mut edges: Vec<(Vertex, Vertex)> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        let local = |v: Vertex| {
            self.vertices
                .binary_search(&v)
                .map(|i| i as Vertex)
                .map_err(|_| {
                    bad(format!(
                        "backbone edge endpoint {v} is not a backbone vertex"
                    ))
                })
        };
        let local_edges = edges
            .iter()
            .map(|&(u, v)| Ok((local(u)?, local(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Dag::from_edges(self.vertices.len(), &local_edges)?;
        edges.sort_unstable();
        Ok(Backbone {
            epsilon: self.epsilon,
            mode,
            vertices: self.vertices,
            edges,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopLabelDoc {
    pub format: String,
    pub n: usize,
    pub l_out: Vec<Vec<Vertex>>,
    pub l_in: Vec<Vec<Vertex>>,
}

impl HopLabelDoc {
    pub fn new(l: &HopLabeling) -> Self {
        HopLabelDoc {
            format: HOPLABEL.into(),
            n: l.n(),
            l_out: l.l_out.clone(),
            l_in: l.l_in.clone(),
        }
    }

    /// Hops may name any id below `n`; lists must be ascending.
    pub fn into_labels(self) -> Result<HopLabeling> {
        expect_format(&self.format, HOPLABEL)?;
        check_len(self.l_out.len(), self.n, "l_out")?;
        check_len(self.l_in.len(), self.n, "l_in")?;
        for list in self.l_out.iter().chain(&self.l_in) {
            check_ids(list.iter().copied(), self.n, "hop")?;
        }
        let l = HopLabeling {
            l_out: self.l_out,
            l_in: self.l_in,
        };
        if !l.is_normalized() {
            return Err(bad("hop lists must be strictly ascending"));
        }
        Ok(l)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTreeTreeDoc {
    pub parent: Vec<i64>,
    pub interval: Vec<[u32; 2]>,
}

/// Several trees; each vertex keeps only the list of the tree it is assigned to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTreeDoc {
    pub format: String,
    pub n: usize,
    pub trees: Vec<KTreeTreeDoc>,
    pub assignment: Vec<u32>,
    pub ctc: Vec<Vec<[u32; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component_of: Option<Vec<Vertex>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrailDoc {
    pub format: String,
    pub n: usize,
    pub c: usize,
    pub edges: Vec<[Vertex; 2]>,
    /// Per vertex, one `[low, post]` per traversal.
    pub interval: Vec<Vec<[u32; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component_of: Option<Vec<Vertex>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteDoc {
    pub format: String,
    pub n: usize,
    /// Self-inclusive successor list per vertex, ascending.
    pub succ: Vec<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component_of: Option<Vec<Vertex>>,
}

/// The backbone query scheme: graph, backbone, interval labels and the
/// choice of inner index. Access sets and the inner index are rebuilt on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScarabDoc {
    pub format: String,
    pub n: usize,
    pub c: usize,
    pub edges: Vec<[Vertex; 2]>,
    pub backbone: BackboneDoc,
    pub inner: String,
    pub reduce: bool,
    pub interval: Vec<Vec<[u32; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component_of: Option<Vec<Vertex>>,
}

impl KTreeDoc {
    pub fn new(m: &MultiTreeIndex, component_of: Option<Vec<Vertex>>) -> Self {
        let n = m.assignment.len();
        KTreeDoc {
            format: KTREE.into(),
            n,
            trees: m
                .trees
                .iter()
                .map(|t| KTreeTreeDoc {
                    parent: parents_out(&t.parent),
                    interval: intervals_out(&t.interval),
                })
                .collect(),
            assignment: m.assignment.clone(),
            ctc: (0..n)
                .map(|u| intervals_out(&m.ctcs[m.assignment[u] as usize].lists[u]))
                .collect(),
            component_of,
        }
    }

    /// Lists of unassigned (vertex, tree) combinations come back empty.
    pub fn into_index(self) -> Result<(MultiTreeIndex, Option<Vec<Vertex>>)> {
        expect_format(&self.format, KTREE)?;
        let n = self.n;
        let k = self.trees.len();
        if k == 0 {
            return Err(bad("at least one tree required"));
        }
        check_len(self.assignment.len(), n, "assignment")?;
        check_len(self.ctc.len(), n, "ctc")?;
        check_components(&self.component_of, n)?;
        let trees = self
            .trees
            .iter()
            .map(|d| {
                check_len(d.parent.len(), n, "parent")?;
                check_len(d.interval.len(), n, "interval")?;
                Ok(TreeCover {
                    parent: parents_in(&d.parent, n)?,
                    interval: intervals_in(&d.interval, n)?,
                    weight: 0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut ctcs = vec![
            CompressedTC {
                lists: vec![Vec::new(); n]
            };
            k
        ];
        let mut objective = 0;
        for (u, (&i, list)) in self.assignment.iter().zip(&self.ctc).enumerate() {
            let i = i as usize;
            if i >= k {
                return Err(bad(format!("vertex {u} assigned to missing tree {i}")));
            }
            ctcs[i].lists[u] = intervals_in(list, n)?;
            objective += list.len() as u64;
        }
        let m = MultiTreeIndex {
            trees,
            ctcs,
            assignment: self.assignment,
            objective,
            history: vec![objective],
        };
        Ok((m, self.component_of))
    }
}

impl BruteDoc {
    pub fn new(succ: Vec<Vec<Vertex>>, component_of: Option<Vec<Vertex>>) -> Self {
        BruteDoc {
            format: BRUTE.into(),
            n: succ.len(),
            succ,
            component_of,
        }
    }

    pub fn into_lists(self) -> Result<(Vec<Vec<Vertex>>, ComponentMap)> {
        expect_format(&self.format, BRUTE)?;
        check_len(self.succ.len(), self.n, "succ")?;
        check_components(&self.component_of, self.n)?;
        for list in &self.succ {
            check_ids(list.iter().copied(), self.n, "succ")?;
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(bad("successor lists must be strictly ascending"));
            }
        }
        Ok((self.succ, self.component_of))
    }
}

impl GrailDoc {
    pub fn new(g: &Dag, gl: &GrailLabels, component_of: Option<Vec<Vertex>>) -> Self {
        GrailDoc {
            format: GRAIL.into(),
            n: g.n(),
            c: gl.c,
            edges: edges_out(g),
            interval: grail_out(g, gl),
            component_of,
        }
    }

    pub fn into_parts(self) -> Result<(Dag, GrailLabels, Option<Vec<Vertex>>)> {
        expect_format(&self.format, GRAIL)?;
        check_components(&self.component_of, self.n)?;
        let (g, gl) = grail_in(self.n, self.c, &self.edges, &self.interval)?;
        Ok((g, gl, self.component_of))
    }
}

/// Everything needed to rebuild a [`ScarabIndex`] deterministically.
pub struct ScarabParts {
    pub graph: Dag,
    pub backbone: Backbone,
    pub grail: GrailLabels,
    pub inner: InnerKind,
    pub reduce: bool,
    pub component_of: Option<Vec<Vertex>>,
}

impl ScarabDoc {
    pub fn new(
        g: &Dag,
        idx: &ScarabIndex,
        reduce: bool,
        component_of: Option<Vec<Vertex>>,
    ) -> Self {
        ScarabDoc {
            format: SCARAB.into(),
            n: g.n(),
            c: idx.grail.c,
            edges: edges_out(g),
            backbone: BackboneDoc::new(&idx.backbone),
            inner: idx.inner_kind.as_str().into(),
            reduce,
            interval: grail_out(g, &idx.grail),
            component_of,
        }
    }

    pub fn into_parts(self) -> Result<ScarabParts> {
        expect_format(&self.format, SCARAB)?;
        check_components(&self.component_of, self.n)?;
        let (graph, grail) = grail_in(self.n, self.c, &self.edges, &self.interval)?;
        let backbone = self.backbone.into_backbone(self.n)?;
        if backbone.mode != Mode::TwoSide {
            return Err(bad("query schemes need a two-side backbone"));
        }
        let inner = InnerKind::parse(&self.inner)
            .ok_or_else(|| bad(format!("unknown inner index {}", self.inner)))?;
        Ok(ScarabParts {
            graph,
            backbone,
            grail,
            inner,
            reduce: self.reduce,
            component_of: self.component_of,
        })
    }
}

fn edges_out(g: &Dag) -> Vec<[Vertex; 2]> {
    g.edges().map(|(u, v)| [u, v]).collect()
}

fn grail_out(g: &Dag, gl: &GrailLabels) -> Vec<Vec<[u32; 2]>> {
    g.vertices()
        .map(|v| gl.of(v).iter().map(|&(l, p)| [l, p]).collect())
        .collect()
}

fn grail_in(
    n: usize,
    c: usize,
    edges: &[[Vertex; 2]],
    interval: &[Vec<[u32; 2]>],
) -> Result<(Dag, GrailLabels)> {
    if c == 0 {
        return Err(bad("c must be at least 1"));
    }
    check_len(interval.len(), n, "interval")?;
    check_ids(edges.iter().flatten().copied(), n, "edges")?;
    let pairs: Vec<(Vertex, Vertex)> = edges.iter().map(|&[u, v]| (u, v)).collect();
    let g = Dag::from_edges(n, &pairs)?;
    let mut flat = Vec::with_capacity(n * c);
    for per_vertex in interval {
        check_len(per_vertex.len(), c, "traversal labels")?;
        flat.extend(per_vertex.iter().map(|&[l, p]| (l, p)));
    }
    Ok((g, GrailLabels { c, intervals: flat }))
}

/// Parses a pairs file: one `u v` per line, `#` comments and blank lines
/// skipped. Ids must be below `n`; errors name the 1-based line.
pub fn parse_pairs(text: &str, n: usize) -> Result<Vec<(Vertex, Vertex)>> {
    let mut pairs = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let mut it = line.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::Parse {
                line: lineno,
                reason: "expected two whitespace-separated ids".into(),
            });
        };
        let id = |s: &str| -> Result<Vertex> {
            let x: u64 = s.parse().map_err(|_| Error::Parse {
                line: lineno,
                reason: format!("`{s}` is not a non-negative integer"),
            })?;
            if x >= n as u64 {
                return Err(Error::IdOutOfRange { line: lineno });
            }
            Ok(x as Vertex)
        };
        pairs.push((id(a)?, id(b)?));
    }
    Ok(pairs)
}

/// Renders pairs one `u v` per line.
pub fn write_pairs(pairs: &[(Vertex, Vertex)]) -> String {
    pairs.iter().map(|(u, v)| format!("{u} {v}\n")).collect()
}

/// One `1` or `0` per line.
pub fn write_answers(answers: &[bool]) -> String {
    answers
        .iter()
        .map(|&a| if a { "1\n" } else { "0\n" })
        .collect()
}
