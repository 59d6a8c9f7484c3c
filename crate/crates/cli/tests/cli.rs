use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use reachidx::graph::{parse_edge_list, random_dag};
use reachidx::Dag;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_reachidx"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn put(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const CHAIN3: &str = "3 2\n0 1\n1 2\n";
const DIAMOND: &str = "4 4\n0 1\n0 2\n1 3\n2 3\n";

fn stats(o: &Output) -> serde_json::Value {
    let line = stdout(o);
    let line = line.lines().last().expect("stats line");
    serde_json::from_str(line).unwrap()
}

#[test]
fn gen_is_deterministic_and_parsable() {
    let d = tempfile::tempdir().unwrap();
    for name in ["a.txt", "b.txt"] {
        assert_eq!(
            code(&run(
                d.path(),
                &["gen", "--n", "4", "--deg", "1", "--seed", "1", "--out", name]
            )),
            0
        );
    }
    assert_eq!(
        fs::read(d.path().join("a.txt")).unwrap(),
        fs::read(d.path().join("b.txt")).unwrap()
    );

    let o = run(d.path(), &["gen", "--n", "1"]);
    assert_eq!(stdout(&o), "1 0\n");

    let o = run(
        d.path(),
        &[
            "gen", "--n", "1000", "--deg", "2", "--seed", "7", "--out", "g.txt",
        ],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(stats(&o)["m"], 2000);
    let parsed = parse_edge_list(&fs::read_to_string(d.path().join("g.txt")).unwrap()).unwrap();
    let g = Dag::from_edges(parsed.graph.num_vertices, &parsed.graph.edges).unwrap();
    assert_eq!(g, random_dag(1000, 2.0, 7));
}

#[test]
fn gen_rejects_bad_input() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(d.path(), &["gen", "--n", "0"])), 1);
    assert_eq!(code(&run(d.path(), &["gen", "--n", "5", "--deg", "-1"])), 1);
    let o = run(
        d.path(),
        &["gen", "--n", "3", "--out", "/nonexistent-dir/x.txt"],
    );
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("cannot write"));
}

#[test]
fn build_and_query_dl_on_chain3() {
    let d = tempfile::tempdir().unwrap();
    put(d.path(), "c3.txt", CHAIN3);
    let o = run(
        d.path(),
        &[
            "build", "--input", "c3.txt", "--kind", "dl", "--output", "c3.json",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let s = stats(&o);
    assert_eq!(
        (s["cmd"].as_str(), s["kind"].as_str(), s["n"].as_u64()),
        (Some("build"), Some("dl"), Some(3))
    );
    // L_out = {1,2},{2},{3} and L_in = {1},{2},{2,3} in 1-based ids.
    assert_eq!(s["index_entries"], 8);
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("c3.json")).unwrap()).unwrap();
    assert_eq!(doc["format"], "hoplabel-v1");

    put(d.path(), "p.txt", "0 2\n2 0\n");
    let o = run(
        d.path(),
        &[
            "query", "--index", "c3.json", "--pairs", "p.txt", "--output", "a.txt",
        ],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(
        fs::read_to_string(d.path().join("a.txt")).unwrap(),
        "1\n0\n"
    );
    assert_eq!(stats(&o)["queries"], 2);

    put(d.path(), "empty.txt", "");
    let o = run(
        d.path(),
        &["query", "--index", "c3.json", "--pairs", "empty.txt"],
    );
    assert_eq!((code(&o), stdout(&o)), (0, String::new()));

    put(d.path(), "bad.txt", "0 1\n1 3\n");
    let o = run(
        d.path(),
        &["query", "--index", "c3.json", "--pairs", "bad.txt"],
    );
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn build_tree_on_diamond() {
    let d = tempfile::tempdir().unwrap();
    put(d.path(), "d.txt", DIAMOND);
    let o = run(
        d.path(),
        &[
            "build", "--input", "d.txt", "--kind", "tree", "--output", "d.json",
        ],
    );
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("d.json")).unwrap()).unwrap();
    assert_eq!(doc["format"], "treecover-v1");
    let total: usize = doc["ctc"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l.as_array().unwrap().len())
        .sum();
    assert_eq!(total, 5);
    assert_eq!(stats(&o)["index_entries"], 5);
}

#[test]
fn build_validates_parameters() {
    let d = tempfile::tempdir().unwrap();
    put(d.path(), "d.txt", DIAMOND);
    for extra in [
        &["--theta", "1.5"][..],
        &["--delta", "0"],
        &["--epsilon", "0"],
        &["--c", "0"],
        &["--alpha", "2"],
        &["--inner", "nope"],
        &["--bogus-flag", "1"],
    ] {
        let mut args = vec![
            "build",
            "--input",
            "d.txt",
            "--kind",
            "tree-sampled",
            "--output",
            "o.json",
        ];
        args.extend_from_slice(extra);
        assert_eq!(code(&run(d.path(), &args)), 1, "{extra:?}");
    }
    assert!(!d.path().join("o.json").exists());
    assert_eq!(
        code(&run(
            d.path(),
            &["build", "--input", "d.txt", "--kind", "magic", "--output", "o.json"]
        )),
        1
    );
    assert_eq!(
        code(&run(
            d.path(),
            &[
                "build",
                "--input",
                "missing.txt",
                "--kind",
                "dl",
                "--output",
                "o.json"
            ]
        )),
        1
    );
    put(d.path(), "broken.txt", "2 1\n0 5\n");
    let o = run(
        d.path(),
        &[
            "build",
            "--input",
            "broken.txt",
            "--kind",
            "dl",
            "--output",
            "o.json",
        ],
    );
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("id out of range at line 2"));
}

#[test]
fn query_rejects_foreign_documents() {
    let d = tempfile::tempdir().unwrap();
    put(d.path(), "i.json", r#"{"format":"mystery-v1"}"#);
    put(d.path(), "p.txt", "0 0\n");
    assert_eq!(
        code(&run(
            d.path(),
            &["query", "--index", "i.json", "--pairs", "p.txt"]
        )),
        1
    );
    put(d.path(), "j.json", "not json");
    assert_eq!(
        code(&run(
            d.path(),
            &["query", "--index", "j.json", "--pairs", "p.txt"]
        )),
        1
    );
}

const KINDS: [&str; 8] = [
    "dl",
    "hl",
    "tree",
    "tree-sampled",
    "ktree",
    "grail",
    "brute",
    "scarab",
];

#[test]
fn every_kind_roundtrips_through_files() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert_eq!(
        code(&run(
            p,
            &["gen", "--n", "300", "--deg", "2", "--seed", "5", "--out", "g.txt"]
        )),
        0
    );
    // The reference answers come from the brute closure, checked by --verify.
    let o = run(
        p,
        &[
            "bench",
            "--input",
            "g.txt",
            "--kind",
            "brute",
            "--workload",
            "equal",
            "--count",
            "400",
            "--seed",
            "2",
            "--verify",
            "--pairs-out",
            "pairs.txt",
            "--answers",
            "want.txt",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let want = fs::read_to_string(p.join("want.txt")).unwrap();
    assert_eq!(want.lines().filter(|l| *l == "1").count(), 200);

    for kind in KINDS {
        let (a, b) = (format!("{kind}-a.json"), format!("{kind}-b.json"));
        for out in [&a, &b] {
            let o = run(
                p,
                &[
                    "build", "--input", "g.txt", "--kind", kind, "--output", out, "--seed", "3",
                ],
            );
            assert_eq!(code(&o), 0, "{kind}: {}", stderr(&o));
        }
        assert_eq!(
            fs::read(p.join(&a)).unwrap(),
            fs::read(p.join(&b)).unwrap(),
            "{kind} is not byte-stable"
        );
        let o = run(p, &["query", "--index", &a, "--pairs", "pairs.txt"]);
        assert_eq!(code(&o), 0, "{kind}");
        assert_eq!(stdout(&o), want, "{kind}");
    }
}

#[test]
fn cyclic_input_is_answered_in_original_ids() {
    let d = tempfile::tempdir().unwrap();
    put(d.path(), "cyc.txt", "5 4\n0 1\n1 2\n2 0\n2 3\n");
    put(d.path(), "p.txt", "1 0\n0 3\n3 0\n4 3\n2 2\n");
    for kind in KINDS {
        let o = run(
            d.path(),
            &[
                "build", "--input", "cyc.txt", "--kind", kind, "--output", "i.json",
            ],
        );
        assert_eq!(code(&o), 0, "{kind}");
        let o = run(
            d.path(),
            &["query", "--index", "i.json", "--pairs", "p.txt"],
        );
        assert_eq!(stdout(&o), "1\n1\n0\n0\n1\n", "{kind}");
    }
}

#[test]
fn bench_matches_oracle_and_is_repeatable() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert_eq!(
        code(&run(
            p,
            &["gen", "--n", "10000", "--deg", "2", "--seed", "1", "--out", "g.txt"]
        )),
        0
    );
    let mut streams = Vec::new();
    for name in ["a1.txt", "a2.txt"] {
        let o = run(
            p,
            &[
                "bench",
                "--input",
                "g.txt",
                "--kind",
                "dl",
                "--workload",
                "random",
                "--count",
                "1000",
                "--seed",
                "4",
                "--verify",
                "--answers",
                name,
            ],
        );
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let s = stats(&o);
        assert_eq!(
            (s["cmd"].as_str(), s["queries"].as_u64()),
            (Some("bench"), Some(1000))
        );
        for key in [
            "n",
            "m",
            "build_ms",
            "index_entries",
            "index_bytes",
            "query_ns_total",
        ] {
            assert!(s[key].is_u64(), "{key}");
        }
        streams.push(fs::read_to_string(p.join(name)).unwrap());
    }
    assert_eq!(streams[0], streams[1]);
    assert_eq!(streams[0].lines().count(), 1000);

    let o = run(
        p,
        &["bench", "--input", "g.txt", "--kind", "dl", "--count", "0"],
    );
    assert_eq!(code(&o), 1);
    let o = run(
        p,
        &[
            "bench",
            "--input",
            "g.txt",
            "--kind",
            "dl",
            "--workload",
            "skewed",
        ],
    );
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_reports_properties() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    put(p, "d.txt", DIAMOND);
    let o = run(p, &["verify", "--input", "d.txt", "--epsilon", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let checks: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(checks.len() >= 6);
    assert!(checks.iter().all(|c| c["pass"] == true));

    put(p, "e.txt", "6 0\n");
    assert_eq!(
        code(&run(
            p,
            &["verify", "--input", "e.txt", "--epsilon", "1,2,3"]
        )),
        0
    );
    assert_eq!(
        code(&run(p, &["verify", "--input", "e.txt", "--epsilon", "0"])),
        1
    );
}

#[test]
fn verify_catches_a_mutated_label_file() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    put(p, "c3.txt", CHAIN3);
    assert_eq!(
        code(&run(
            p,
            &["build", "--input", "c3.txt", "--kind", "dl", "--output", "l.json"]
        )),
        0
    );
    assert_eq!(
        code(&run(
            p,
            &["verify", "--input", "c3.txt", "--labels", "l.json"]
        )),
        0
    );

    // Drop hop 2 (id 1) from L_in(3): the pair (1, 3) loses its only common hop.
    let mut doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(p.join("l.json")).unwrap()).unwrap();
    doc["l_in"][2] = serde_json::json!([2]);
    put(p, "m.json", &doc.to_string());
    let o = run(p, &["verify", "--input", "c3.txt", "--labels", "m.json"]);
    assert_eq!(code(&o), 2);
    let failed: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|c| c["pass"] == false)
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["property"], "labels_completeness");
    assert_eq!(failed[0]["counterexample"], serde_json::json!([0, 2]));
}

#[test]
fn help_exits_cleanly() {
    let d = tempfile::tempdir().unwrap();
    let o = run(d.path(), &["--help"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verify"));
    assert_eq!(code(&run(d.path(), &[])), 1);
}
