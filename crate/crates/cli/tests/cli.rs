use std::process::Command;

use serde_json::Value;

fn refdet(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_refdet")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn verify_k1_reports_equality() {
    let (code, out) = refdet(&["verify", "k1", "--family", "an:2"]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["equal"], true);
    assert_eq!(r["ratio"], "1");
    assert_eq!(r["elapsed_ms"], Value::Null);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    // serde_json sorts keys in Value, so check the raw text order instead
    let order = [
        "\"identity\"",
        "\"parameters\"",
        "\"lhs\"",
        "\"rhs\"",
        "\"equal\"",
        "\"ratio\"",
        "\"term_count\"",
        "\"elapsed_ms\"",
        "\"residual\"",
        "\"notes\"",
    ];
    let pos: Vec<usize> = order.iter().map(|k| out.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(keys.len(), order.len());
}

#[test]
fn matrix_tree_unit_weights_count_trees() {
    let (code, out) = refdet(&["verify", "matrix-tree", "--family", "an:3", "--weights", "unit"]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["lhs"], "16");
    assert_eq!(r["rhs"], "16");
}

#[test]
fn gendet_on_orthogonal_pair_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.json");
    std::fs::write(&path, r#"{"ambient_dim": 2, "vectors": [["1", "0"], ["0", "2/3"]]}"#).unwrap();
    let fam = format!("file:{}", path.display());
    let (code, out) = refdet(&["verify", "gendet", "--family", &fam, "--k", "2"]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["lhs"], "0");
    assert_eq!(r["rhs"], "0");
    assert_eq!(r["ratio"], Value::Null);
}

#[test]
fn mismatch_exits_one() {
    let (code, out) = refdet(&["verify", "bn-tree", "--family", "bn:2", "--variant", "stated"]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["equal"], false);
}

#[test]
fn usage_and_scale_errors_exit_two() {
    assert_eq!(refdet(&["verify", "nope"]).0, 2);
    assert_eq!(refdet(&["verify", "k1", "--family", "en:3"]).0, 2);
    assert_eq!(refdet(&["verify", "k1", "--family", "an:9"]).0, 2);
    assert_eq!(refdet(&["verify", "gendet", "--k", "7"]).0, 2);
    assert_eq!(refdet(&["verify", "k1", "--family", "file:/does/not/exist.json"]).0, 2);
    assert_eq!(refdet(&["frobnicate"]).0, 2);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let (code, _) = refdet(&[
            "verify",
            "gendet",
            "--family",
            "random:2:3",
            "--seed",
            "9",
            "--report",
            p.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn float_mode_reports_residual() {
    let (code, out) = refdet(&["verify", "keven-pf", "--family", "an:2", "--mode", "float", "--seed", "4"]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["parameters"]["mode"], "float");
    assert!(r["residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn calibrate_exit_codes() {
    let (code, out) = refdet(&["calibrate", "k1", "--range", "n=1..2"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["constant"], "1");
    let (code, out) = refdet(&["calibrate", "mv", "--range", "m=1..1"]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["rows"][0]["ratio"], "non-constant");
    let (code, out) = refdet(&["calibrate", "bn-tree", "--range", "n=1..2"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["exponent_fit"]["alpha"], -1);
    assert_eq!(refdet(&["calibrate", "k1", "--range", "x=1..2"]).0, 2);
}

#[test]
fn enumerate_counts() {
    let count = |args: &[&str]| {
        let (code, out) = refdet(args);
        assert_eq!(code, 0);
        json(&out)["count"].as_u64().unwrap()
    };
    assert_eq!(count(&["enumerate", "trees", "--vertices", "4", "--count-only"]), 16);
    assert_eq!(count(&["enumerate", "3trees", "--vertices", "5", "--count-only"]), 15);
    assert_eq!(count(&["enumerate", "bbasic", "--vertices", "2"]), 6);
    assert_eq!(count(&["enumerate", "doombs", "--vertices", "2", "--edges", "1"]), 4);
    let (_, out) = refdet(&["enumerate", "3trees", "--vertices", "3"]);
    assert_eq!(json(&out)["items"][0]["triangles"][0], serde_json::json!([0, 1, 2]));
}
