use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn autqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_autqm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect()
}

fn single(args: &[&str]) -> Value {
    let out = autqm(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut r = records(&out);
    assert_eq!(r.len(), 1);
    r.pop().unwrap()
}

#[test]
fn word_reduce() {
    let r = single(&["word", "reduce", "abA"]);
    assert_eq!(r["cmd"], "word reduce");
    assert_eq!(r["value"], "abA");
    assert_eq!(r["letters"], serde_json::json!([1, 2, -1]));
    assert_eq!(single(&["word", "reduce", "abBA"])["value"], "1");
    assert_eq!(single(&["word", "pow", "ab", "-2"])["value"], "BABA");
}

#[test]
fn acl_of_a_and_replay() {
    let r = single(&["norm", "acl", "--word", "a", "--rank", "2"]);
    assert_eq!(r["norm"]["status"], "finite");
    assert_eq!(r["norm"]["value"], 1);
    let w = &r["norm"]["witness"][0];
    assert_eq!(w["auto"], "tv(b->ab)");
    assert_eq!(w["word"], "b");
    let again = single(&[
        "auto",
        "autocomm",
        "--auto",
        w["auto"].as_str().unwrap(),
        "--word",
        w["word"].as_str().unwrap(),
    ]);
    assert_eq!(again["value"], "a");
}

#[test]
fn sacl_witnesses_replay() {
    let r = single(&["norm", "sacl", "--word", "abAB", "--n-max", "4"]);
    assert_eq!(r["upper"], "1/4");
    for t in r["trace"].as_array().unwrap() {
        let Some(ws) = t["acl"]["witness"].as_array() else {
            continue;
        };
        let mut acc = "1".to_string();
        for f in ws {
            let v = single(&[
                "auto",
                "autocomm",
                "--auto",
                f["auto"].as_str().unwrap(),
                "--word",
                f["word"].as_str().unwrap(),
            ]);
            acc = single(&["word", "mul", &acc, v["value"].as_str().unwrap()])["value"]
                .as_str()
                .unwrap()
                .to_string();
        }
        let n = t["n"].as_i64().unwrap().to_string();
        let target = single(&["word", "pow", "abAB", &n]);
        assert_eq!(acc, target["value"].as_str().unwrap());
    }
}

#[test]
fn verify_lemma63_suite() {
    let out = autqm(&["verify", "--suite", "lemma63"]);
    assert_eq!(out.status.code(), Some(0));
    let r = records(&out);
    assert_eq!(r.len(), 3);
    assert!(r.iter().all(|x| x["passed"] == true));
}

#[test]
fn runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(&cfg, "seed = 11\nsamples = 40\n").unwrap();
    let args = [
        "qm",
        "invariance",
        "--pattern",
        "ab",
        "--homogeneous",
        "--average",
        "--group",
        "elementary",
        "--config",
        cfg.to_str().unwrap(),
    ];
    let a = autqm(&args);
    let b = autqm(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = records(&a);
    assert_eq!(r[0]["seed"], 11);
    assert_eq!(r[0]["checked"], 40 * 11);
    let overridden = records(&autqm(&[&args[..], &["--seed", "12"]].concat()));
    assert_eq!(overridden[0]["seed"], 12);
    let v1 = autqm(&["verify", "--suite", "normalform", "--seed", "3"]);
    let v2 = autqm(&["verify", "--suite", "normalform", "--seed", "3"]);
    assert_eq!(v1.stdout, v2.stdout);
}

#[test]
fn output_file_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("records.jsonl");
    let cfg = dir.path().join("exp.toml");
    std::fs::write(&cfg, format!("output = {:?}\n", out_path.to_str().unwrap())).unwrap();
    let out = autqm(&["word", "inv", "ab", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let r: Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(r["value"], "BA");
}

#[test]
fn exit_codes() {
    let bad = autqm(&["word", "reduce", "ab?"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("column 3"));
    assert_eq!(autqm(&["word", "frobnicate"]).status.code(), Some(2));
    let capped = autqm(&[
        "norm",
        "bfs",
        "--word",
        "abAB",
        "--set",
        "a,b",
        "--closure",
        "--cutoff",
        "3",
    ]);
    assert_eq!(capped.status.code(), Some(3));
    assert_eq!(records(&capped)[0]["norm"]["status"], "greater_than_cutoff");
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tight.toml");
    std::fs::write(&cfg, "level_limit = 1\n").unwrap();
    let out = autqm(&[
        "wh",
        "freefactor",
        "--word",
        "abAB",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

fn write_graph(dir: &Path, text: &str) -> String {
    let p = dir.join("g.txt");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn graph_products() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write_graph(
        dir.path(),
        "vertices 4\nlabel 0 2\nlabel 1 2\nlabel 2 2\nlabel 3 2\nedge 0 1\nedge 1 2\nedge 2 3\nedge 3 0\n",
    );
    assert_eq!(
        single(&["gp", "classify", "--graph", &c4])["virtually_abelian"],
        true
    );
    let nf = single(&["gp", "nf", "--graph", &c4, "--word", "1^1 0^1 1^1"]);
    assert_eq!(nf["value"], "0^1");
    let d = single(&["gp", "dinfty", "--graph", &c4]);
    assert_eq!(d["factors"].as_array().unwrap().len(), 2);
    let broken = write_graph(dir.path(), "vertices 2\nedge 0 x\n");
    let out = autqm(&["gp", "join", "--graph", &broken]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 8"));
    let k1 = write_graph(
        dir.path(),
        "vertices 5\nedge 0 1\nedge 0 2\nedge 0 3\nedge 0 4\nedge 1 3\nedge 1 4\nedge 2 3\nedge 2 4\n",
    );
    let p = single(&[
        "gp",
        "pipeline",
        "--graph",
        &k1,
        "--word",
        "0^3 1^1 2^1 1^1 2^1 1^1 2^1",
    ]);
    assert_eq!(p["value"], "3/1");
    let q = single(&[
        "gp",
        "pipeline",
        "--graph",
        &k1,
        "--word",
        "3^1 4^1 3^1 4^1 3^1 4^1",
    ]);
    assert_eq!(q["value"], "3/1");
}
