use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;
use tofsynth::dense::{self, kron, Matrix};

struct Env {
    dir: TempDir,
}

impl Env {
    fn new() -> Env {
        Env {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_tofsynth"))
            .arg("--cache-dir")
            .arg(self.path("cache"))
            .args(args)
            .env_remove("TOFSYNTH_CONFIG")
            .output()
            .unwrap()
    }

    fn write_unitary(&self, name: &str, u: &Matrix) -> PathBuf {
        let rows: Vec<Value> = (0..u.nrows())
            .map(|i| (0..u.ncols()).map(|j| json!([u[(i, j)].re, u[(i, j)].im])).collect())
            .collect();
        let n = u.nrows().trailing_zeros();
        let p = self.path(name);
        std::fs::write(&p, json!({ "n": n, "matrix": rows }).to_string()).unwrap();
        p
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn cs_target(env: &Env) -> PathBuf {
    env.write_unitary("cs.json", &kron(&dense::identity(1), &dense::cs_gate()))
}

#[test]
fn gen_set_counts() {
    let env = Env::new();
    let o = env.run(&["gen-set", "-n", "3", "--mode", "canonical", "--count-only"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "135");
    // The literal enumeration; see the decisions ledger for the published 129.
    let o = env.run(&["gen-set", "-n", "3", "--mode", "paper-compat", "--count-only"]);
    assert_eq!(stdout(&o).trim(), "177");
    assert!(env.path("cache/genset-n3-canonical.json").exists());
}

#[test]
fn gen_set_rejects_small_n() {
    let env = Env::new();
    let o = env.run(&["gen-set", "-n", "2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("no generators for n<3"));
}

#[test]
fn stale_cache_is_regenerated() {
    let env = Env::new();
    std::fs::create_dir_all(env.path("cache")).unwrap();
    let stale = json!({"format": "tofsynth-genset", "version": 0, "n": 3, "mode": "canonical",
                       "set": {"n": 3, "mode": "canonical", "triples": []}});
    std::fs::write(env.path("cache/genset-n3-canonical.json"), stale.to_string()).unwrap();
    let o = env.run(&["gen-set", "-n", "3", "--count-only"]);
    assert_eq!(stdout(&o).trim(), "135");
    let text = std::fs::read_to_string(env.path("cache/genset-n3-canonical.json")).unwrap();
    assert!(text.contains("\"version\":1"));
}

#[test]
fn random_is_deterministic() {
    let env = Env::new();
    let args = ["random", "-n", "3", "--count", "5", "--seed", "7"];
    let a = env.run(&args);
    let b = env.run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["instances"].as_array().unwrap().len(), 5);
}

#[test]
fn controlled_s_end_to_end() {
    let env = Env::new();
    let target = cs_target(&env);
    let circ = env.path("cs.circ");
    let o = env.run(&[
        "synth",
        s(&target),
        "--engine",
        "heuristic",
        "--rule",
        "A",
        "--emit-circuit",
        s(&circ),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 3);
    assert_eq!(v["verification"]["verified"], true);

    let o = env.run(&["verify", "--target", s(&target), "--circuit", s(&circ)]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["distance"].as_f64().unwrap() < 1e-9);
}

#[test]
fn controlled_s_with_mitm() {
    let env = Env::new();
    let target = cs_target(&env);
    let o = env.run(&["synth", s(&target), "--engine", "mitm", "--max-count", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 3);
}

#[test]
fn decide_answers() {
    let env = Env::new();
    let target = cs_target(&env);
    let o = env.run(&["decide", s(&target), "-m", "2", "--engine", "mitm"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("\"NO\""));
    let o = env.run(&["decide", s(&target), "-m", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\"YES\""));
}

#[test]
fn t_gate_rejected_by_exact_engines() {
    let env = Env::new();
    let target = env.write_unitary("t.json", &kron(&dense::t_gate(), &dense::identity(2)));
    for engine in ["mitm", "heuristic"] {
        let o = env.run(&["synth", s(&target), "--engine", engine]);
        assert_eq!(code(&o), 1);
        assert!(stderr(&o).contains("not exactly implementable"), "{}", stderr(&o));
        assert!(stderr(&o).contains("Z[1/2]"));
    }
}

#[test]
fn clifford_approximation_has_count_zero() {
    let env = Env::new();
    let h = {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Matrix::from_row_slice(2, 2, &[r.into(), r.into(), r.into(), (-r).into()])
    };
    let u = kron(&h, &kron(&dense::identity(1), &dense::t_gate().map(|z| z * z)));
    let target = env.write_unitary("cliff.json", &u);
    let o = env.run(&["synth", s(&target), "--engine", "approx", "--eps", "1e-6"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 0);
    assert!(v["verification"]["distance"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn synth_on_random_instance() {
    let env = Env::new();
    let inst = env.path("inst.json");
    let o = env.run(&["random", "-n", "3", "--count", "3", "--seed", "1", "--out", s(&inst)]);
    assert_eq!(code(&o), 0);
    for i in 0..3 {
        let circ = env.path(&format!("c{i}.txt"));
        let idx = i.to_string();
        let o = env.run(&["synth", s(&inst), "--index", &idx, "--emit-circuit", s(&circ)]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v["count"].as_u64().unwrap() <= i + 1);
        let o = env.run(&["verify", "--target", s(&inst), "--index", &idx, "--circuit", s(&circ)]);
        assert_eq!(code(&o), 0);
    }
}

#[test]
fn verify_detects_wrong_circuit() {
    let env = Env::new();
    let target = cs_target(&env);
    let circ = env.path("wrong.circ");
    std::fs::write(&circ, "H 1\nCNOT 1 2\n").unwrap();
    let o = env.run(&["verify", "--target", s(&target), "--circuit", s(&circ)]);
    assert_eq!(code(&o), 1);
}

#[test]
fn bounds_print() {
    let env = Env::new();
    let o = env.run(&["bound", "--gen-set-size", "-n", "4"]);
    assert_eq!(stdout(&o).trim(), "30510");
    let o = env.run(&["bound", "--lower-exact", "--alpha", "0.75", "--support", "8", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["lower-exact"].as_f64().unwrap() - 0.5425).abs() < 1e-3);
    let o = env.run(&["bound"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn malformed_input_is_a_usage_error() {
    let env = Env::new();
    let p = env.path("bad.json");
    std::fs::write(&p, r#"{"n": 1, "matrix": [[1, 0], [0, "x"]]}"#).unwrap();
    let o = env.run(&["synth", s(&p)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("matrix[1][1]"), "{}", stderr(&o));
    std::fs::write(&p, "{ not json").unwrap();
    let o = env.run(&["synth", s(&p)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 1"));
}

#[test]
fn config_file_supplies_defaults() {
    let env = Env::new();
    let cfg = env.path("cfg.json");
    std::fs::write(&cfg, r#"{"mode": "paper-compat"}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_tofsynth"))
        .args(["--cache-dir", s(&env.path("cache")), "gen-set", "-n", "3", "--count-only"])
        .env("TOFSYNTH_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "177");
    std::fs::write(&cfg, r#"{"colour": 1}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_tofsynth"))
        .args(["gen-set", "-n", "3", "--count-only"])
        .env("TOFSYNTH_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn budget_exhaustion_exits_with_three() {
    let env = Env::new();
    let target = cs_target(&env);
    let o = env.run(&["synth", s(&target), "--engine", "mitm", "--max-count", "3", "--max-entries", "10"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}
