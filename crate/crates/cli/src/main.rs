//! `reachidx`: generate graphs, build and query reachability indexes,
//! benchmark them and check them against the brute-force closure.
//!
//! Exit status: 0 on success, 1 on invalid input or parameters, 2 when a
//! verification finds a violation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use reachidx::backbone::{discover_backbone, verify_backbone, DiscoveryParams, Mode};
use reachidx::dl::{check_non_redundancy, dl_build, rank_vertices};
use reachidx::format::{parse_pairs, write_answers, write_pairs};
use reachidx::graph::{
    condense, parse_edge_list, random_dag, write_edge_list, BfsScratch, EdgeList,
};
use reachidx::hl::{hl_build, HlParams};
use reachidx::index::{BuildConfig, Index, IndexKind};
use reachidx::labels::query_hop;
use reachidx::query::{make_workload, InnerKind, WorkloadKind};
use reachidx::tc::{bfs_reach, compute_tc, first_mismatch, reach};
use reachidx::tree_cover::{build_tree, compress_tc, exact_weights_streaming};
use reachidx::{Dag, Vertex};

#[derive(Parser)]
#[command(
    name = "reachidx",
    version,
    about = "Reachability indexes for directed graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded random DAG in edge-list format.
    Gen(GenArgs),
    /// Build an index and write it as a JSON document.
    Build(BuildArgs),
    /// Answer a pairs file with a previously built index.
    Query(QueryArgs),
    /// Build an index and time a generated query workload.
    Bench(BenchArgs),
    /// Check backbones and labelings of a graph against its closure.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    /// Average out-degree.
    #[arg(long, default_value_t = 2.0)]
    deg: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Params {
    /// Locality threshold for backbone-based kinds.
    #[arg(long, default_value_t = 2)]
    epsilon: u32,
    #[arg(long, default_value_t = 0.05)]
    theta: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Vertices per group in the sampled tree cover.
    #[arg(long, default_value_t = 1024)]
    group_size: usize,
    /// Maximum number of decomposition levels for hl.
    #[arg(long, default_value_t = 10)]
    levels: usize,
    #[arg(long, default_value_t = 10_000)]
    core_limit: usize,
    /// Fraction of vertices preselected by degree product.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Number of random traversals for interval labels.
    #[arg(long = "c", default_value_t = 5)]
    c: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of trees for ktree.
    #[arg(long, default_value_t = 4)]
    trees: usize,
    /// Index over the backbone for scarab: brute, dl or tree.
    #[arg(long, default_value = "dl")]
    inner: String,
}

impl Params {
    fn config(&self) -> Result<BuildConfig, Failure> {
        let inner = InnerKind::parse(&self.inner)
            .ok_or_else(|| Failure::invalid(format!("unknown inner index `{}`", self.inner)))?;
        let cfg = BuildConfig {
            epsilon: self.epsilon,
            theta: self.theta,
            delta: self.delta,
            group_size: self.group_size,
            levels: self.levels,
            core_limit: self.core_limit,
            alpha: self.alpha,
            c: self.c,
            seed: self.seed,
            trees: self.trees,
            inner,
            ..BuildConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    input: PathBuf,
    /// dl, hl, tree, tree-sampled, ktree, grail, brute or scarab.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    output: PathBuf,
    #[command(flatten)]
    params: Params,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    pairs: PathBuf,
    /// Answers file. Without it answers go to standard output and the
    /// stats record to standard error.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    kind: String,
    /// equal or random.
    #[arg(long, default_value = "random")]
    workload: String,
    #[arg(long, default_value_t = 100_000)]
    count: usize,
    /// Check every answer against the closure (or a search on large graphs).
    #[arg(long)]
    verify: bool,
    /// Also write the answer stream here.
    #[arg(long)]
    answers: Option<PathBuf>,
    /// Also write the generated pairs here.
    #[arg(long)]
    pairs_out: Option<PathBuf>,
    #[command(flatten)]
    params: Params,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated thresholds to check backbones and hl at.
    #[arg(long, default_value = "2", value_delimiter = ',')]
    epsilon: Vec<u32>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// An index document to check for exact answers on every pair.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Violation(String),
}

impl Failure {
    fn invalid(msg: impl Into<String>) -> Self {
        Failure::Invalid(msg.into())
    }
}

impl From<reachidx::Error> for Failure {
    fn from(e: reachidx::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<EdgeList, Failure> {
    parse_edge_list(&read(path)?)
        .map(|p| p.graph)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn parse_kind(s: &str) -> Result<IndexKind, Failure> {
    IndexKind::parse(s).ok_or_else(|| Failure::invalid(format!("unknown index kind `{s}`")))
}

/// The single machine-readable line every run reports.
#[derive(Serialize, Default)]
struct Stats {
    cmd: &'static str,
    kind: Option<String>,
    n: usize,
    m: Option<usize>,
    build_ms: u64,
    index_entries: u64,
    index_bytes: u64,
    query_ns_total: u64,
    queries: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    positives: Option<u64>,
}

impl Stats {
    fn line(&self) -> String {
        serde_json::to_string(self).expect("stats serialize")
    }
}

fn cmd_gen(a: GenArgs) -> Result<(), Failure> {
    if a.n == 0 {
        return Err(Failure::invalid("n must be at least 1"));
    }
    if !(a.deg.is_finite() && a.deg >= 0.0) {
        return Err(Failure::invalid("deg must be a non-negative number"));
    }
    let g = random_dag(a.n, a.deg, a.seed);
    let text = write_edge_list(&g);
    match a.out {
        Some(path) => {
            write(&path, &text)?;
            let stats = Stats {
                cmd: "gen",
                n: g.n(),
                m: Some(g.m()),
                ..Stats::default()
            };
            println!("{}", stats.line());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn timed_build(
    edges: &EdgeList,
    kind: IndexKind,
    cfg: &BuildConfig,
) -> Result<(Index, u64), Failure> {
    let start = Instant::now();
    let index = Index::build(edges, kind, cfg)?;
    Ok((index, start.elapsed().as_millis() as u64))
}

fn cmd_build(a: BuildArgs) -> Result<(), Failure> {
    let kind = parse_kind(&a.kind)?;
    let cfg = a.params.config()?;
    let edges = load_graph(&a.input)?;
    let (index, build_ms) = timed_build(&edges, kind, &cfg)?;
    let doc = index.to_json();
    write(&a.output, &doc)?;
    let stats = Stats {
        cmd: "build",
        kind: Some(kind.as_str().into()),
        n: edges.num_vertices,
        m: Some(edges.edges.len()),
        build_ms,
        index_entries: index.entries(),
        index_bytes: doc.len() as u64,
        ..Stats::default()
    };
    println!("{}", stats.line());
    Ok(())
}

fn cmd_query(a: QueryArgs) -> Result<(), Failure> {
    let doc = read(&a.index)?;
    let index = Index::from_json(&doc)?;
    let pairs = parse_pairs(&read(&a.pairs)?, index.n())
        .map_err(|e| Failure::invalid(format!("{}: {e}", a.pairs.display())))?;
    let mut q = index.querier();
    let start = Instant::now();
    let answers: Vec<bool> = pairs.iter().map(|&(u, v)| q.reaches(u, v)).collect();
    let query_ns_total = start.elapsed().as_nanos() as u64;
    let stats = Stats {
        cmd: "query",
        kind: Some(index.format().into()),
        n: index.n(),
        index_entries: index.entries(),
        index_bytes: doc.len() as u64,
        query_ns_total,
        queries: pairs.len(),
        positives: Some(answers.iter().filter(|&&x| x).count() as u64),
        ..Stats::default()
    };
    let text = write_answers(&answers);
    match a.output {
        Some(path) => {
            write(&path, &text)?;
            println!("{}", stats.line());
        }
        None => {
            print!("{text}");
            eprintln!("{}", stats.line());
        }
    }
    Ok(())
}

/// Closure-backed answers for small graphs, pruned search otherwise.
enum Oracle {
    Closure(reachidx::tc::TransitiveClosure),
    Search(Box<Dag>, BfsScratch),
}

impl Oracle {
    fn new(g: &Dag) -> Result<Oracle, Failure> {
        Ok(if g.n() <= 1 << 15 {
            Oracle::Closure(compute_tc(g)?)
        } else {
            Oracle::Search(Box::new(g.clone()), BfsScratch::new(g.n()))
        })
    }

    fn reaches(&mut self, u: Vertex, v: Vertex) -> bool {
        match self {
            Oracle::Closure(tc) => reach(tc, u, v),
            Oracle::Search(g, s) => bfs_reach(g, s, u, v),
        }
    }
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    let kind = parse_kind(&a.kind)?;
    let workload = WorkloadKind::parse(&a.workload)
        .ok_or_else(|| Failure::invalid(format!("unknown workload `{}`", a.workload)))?;
    if a.count == 0 {
        return Err(Failure::invalid("count must be at least 1"));
    }
    let cfg = a.params.config()?;
    let edges = load_graph(&a.input)?;
    let (dag, map) = condense(&edges);
    let (index, build_ms) = timed_build(&edges, kind, &cfg)?;

    // Workloads are drawn on the DAG and posed with one member per component.
    let w = make_workload(&dag, workload, a.count, cfg.seed)?;
    let pairs: Vec<(Vertex, Vertex)> = w
        .pairs
        .iter()
        .map(|&(x, y)| (map.components[x as usize][0], map.components[y as usize][0]))
        .collect();

    let mut q = index.querier();
    let start = Instant::now();
    let answers: Vec<bool> = pairs.iter().map(|&(u, v)| q.reaches(u, v)).collect();
    let query_ns_total = start.elapsed().as_nanos() as u64;

    if let Some(path) = &a.pairs_out {
        write(path, &write_pairs(&pairs))?;
    }
    if let Some(path) = &a.answers {
        write(path, &write_answers(&answers))?;
    }
    let stats = Stats {
        cmd: "bench",
        kind: Some(kind.as_str().into()),
        n: edges.num_vertices,
        m: Some(edges.edges.len()),
        build_ms,
        index_entries: index.entries(),
        index_bytes: index.to_json().len() as u64,
        query_ns_total,
        queries: pairs.len(),
        positives: Some(answers.iter().filter(|&&x| x).count() as u64),
    };
    println!("{}", stats.line());

    if a.verify {
        let mut oracle = Oracle::new(&dag)?;
        for (&(x, y), (&(u, v), &got)) in w.pairs.iter().zip(pairs.iter().zip(&answers)) {
            if oracle.reaches(x, y) != got {
                return Err(Failure::Violation(format!(
                    "answer for ({u}, {v}) is {got}, expected {}",
                    !got
                )));
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Check {
    property: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<u32>,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<[Vertex; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

impl Check {
    fn new(property: &'static str, epsilon: Option<u32>) -> Self {
        Check {
            property,
            epsilon,
            pass: true,
            counterexample: None,
            detail: None,
        }
    }

    fn fail(mut self, pair: Option<(Vertex, Vertex)>, detail: String) -> Self {
        self.pass = false;
        self.counterexample = pair.map(|(u, v)| [u, v]);
        self.detail = Some(detail);
        self
    }
}

fn mismatch_check(
    property: &'static str,
    epsilon: Option<u32>,
    m: Option<(Vertex, Vertex, bool)>,
) -> Check {
    let c = Check::new(property, epsilon);
    match m {
        None => c,
        Some((u, v, want)) => c.fail(
            Some((u, v)),
            format!("reach is {want} but the index answers {}", !want),
        ),
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    if a.epsilon.contains(&0) {
        return Err(Failure::invalid("epsilon must be at least 1"));
    }
    if !(0.0..=1.0).contains(&a.alpha) {
        return Err(Failure::invalid("alpha must lie in [0, 1]"));
    }
    let edges = load_graph(&a.input)?;
    let (g, map) = condense(&edges);
    let tc = compute_tc(&g)?;
    let mut checks = Vec::new();

    for &eps in &a.epsilon {
        let b = discover_backbone(
            &g,
            DiscoveryParams {
                epsilon: eps,
                mode: Mode::TwoSide,
                alpha: a.alpha,
                prune_edges: false,
            },
        )?;
        let r = verify_backbone(&g, &b, &tc);
        let c = Check::new("backbone", Some(eps));
        checks.push(if let Some(&p) = r.missing_witness.first() {
            c.fail(Some(p), "reachable pair without a backbone witness".into())
        } else if let Some(&p) = r.false_witness.first() {
            c.fail(Some(p), "unreachable pair with a backbone witness".into())
        } else if let Some(&p) = r.bad_edges.first() {
            c.fail(Some(p), "backbone edge between unreachable vertices".into())
        } else {
            c
        });

        let hl = hl_build(
            &g,
            HlParams {
                epsilon: eps,
                ..HlParams::default()
            },
        )?;
        checks.push(mismatch_check(
            "hl_completeness",
            Some(eps),
            first_mismatch(&tc, |u, v| query_hop(&hl, u, v)),
        ));
    }

    let dl = dl_build(&g, &rank_vertices(&g));
    checks.push(mismatch_check(
        "dl_completeness",
        None,
        first_mismatch(&tc, |u, v| query_hop(&dl, u, v)),
    ));
    let removable = check_non_redundancy(&g, &dl, &tc);
    let c = Check::new("dl_non_redundancy", None);
    checks.push(match removable.first() {
        None => c,
        Some(h) => c.fail(
            None,
            format!(
                "hop {} of vertex {} ({:?} side) is removable",
                h.hop, h.vertex, h.side
            ),
        ),
    });
    let c = Check::new("dl_size_bound", None);
    let entries = dl.total_entries() as u64;
    checks.push(if entries <= 2 * tc.total_size() {
        c
    } else {
        c.fail(
            None,
            format!("{entries} entries exceed twice the closure size"),
        )
    });

    let tree = build_tree(&g, &exact_weights_streaming(&g));
    let ctc = compress_tc(&g, &tree);
    let c = Check::new("tree_cover_identity", None);
    checks.push(if ctc.total_entries() + tree.weight == tc.total_size() {
        c
    } else {
        c.fail(
            None,
            format!(
                "{} compressed entries plus weight {} differ from closure size {}",
                ctc.total_entries(),
                tree.weight,
                tc.total_size()
            ),
        )
    });

    if let Some(path) = &a.labels {
        let index = Index::from_json(&read(path)?)?;
        if index.n() != edges.num_vertices {
            return Err(Failure::invalid(format!(
                "index covers {} vertices but the graph has {}",
                index.n(),
                edges.num_vertices
            )));
        }
        let mut q = index.querier();
        let comp = &map.component_of;
        let n = edges.num_vertices as Vertex;
        let mut found = None;
        'outer: for u in 0..n {
            for v in 0..n {
                let want = reach(&tc, comp[u as usize], comp[v as usize]);
                if q.reaches(u, v) != want {
                    found = Some((u, v, want));
                    break 'outer;
                }
            }
        }
        checks.push(mismatch_check("labels_completeness", None, found));
    }

    for c in &checks {
        println!("{}", serde_json::to_string(c).expect("check serializes"));
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(Failure::Violation(format!("{failed} properties failed")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Build(a) => cmd_build(a),
        Command::Query(a) => cmd_query(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
