use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(dir: &Path, args: &[&str], config: &Value) -> (Output, Option<Value>) {
    let cfg = dir.join("config.json");
    let out = dir.join("report.json");
    let _ = std::fs::remove_file(&out);
    std::fs::write(&cfg, config.to_string()).unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_slicereg"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    let report = std::fs::read_to_string(&out)
        .ok()
        .map(|s| serde_json::from_str(&s).unwrap());
    (output, report)
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn eval_batch() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({
        "function": [[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]],
        "points": [[0, 0.7, 0, 0], [0.1, 0.2, 0.3, 0.4]]
    });
    let (out, rep) = run(dir.path(), &["eval"], &cfg);
    assert!(out.status.success());
    let rep = rep.unwrap();
    let v = &rep["result"]["values"];
    assert!((f(&v[0][0]) + 0.49).abs() < 1e-15);
    // q^2 = (w^2 - |v|^2) + 2 w v
    assert!((f(&v[1][0]) - (0.01 - 0.29)).abs() < 1e-15);
    assert!((f(&v[1][3]) - 0.08).abs() < 1e-15);

    let constant = json!({"function": [[0.5, 1, -2, 3]], "points": [[0.2, 0, 0.1, 0]]});
    let (_, rep) = run(dir.path(), &["eval"], &constant);
    assert_eq!(rep.unwrap()["result"]["values"][0], json!([0.5, 1.0, -2.0, 3.0]));
}

#[test]
fn malformed_input_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let (out, rep) = run(dir.path(), &["eval"], &json!({"function": "missing.json", "points": []}));
    assert_eq!(out.status.code(), Some(2));
    assert!(rep.is_none());
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
    let (out, _) = run(dir.path(), &["eval"], &json!({"function": [[0, 0, 0, 0]], "points": [[1, 0, 0, 0]]}));
    assert_eq!(out.status.code(), Some(2));
    let (out, _) = run(dir.path(), &["norm"], &json!({"function": [[1, 0, 0, 0]], "space": {"kind": "hardy", "p": 0.5}}));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn norm_examples() {
    let dir = tempfile::tempdir().unwrap();
    let q_plus_i = json!([[0, 1, 0, 0], [1, 0, 0, 0]]);
    let (out, rep) = run(dir.path(), &["norm"], &json!({"function": q_plus_i}));
    assert!(out.status.success());
    let rep = rep.unwrap();
    assert!((f(&rep["result"]["lift"]["value"]) - 2f64.sqrt()).abs() < 1e-15);
    assert_eq!(rep["result"]["lift"]["exact"], json!(true));
    assert!((f(&rep["result"]["sampled"]["value"]) - 2f64.sqrt()).abs() < 1e-14);

    let z = json!([[0, 0, 0, 0], [1, 0, 0, 0]]);
    let cfg = json!({"function": z, "space": {"kind": "besov", "p": 2, "alpha": 0}});
    let (out, rep) = run(dir.path(), &["norm"], &cfg);
    assert!(out.status.success());
    let v = f(&rep.unwrap()["result"]["lift"]["value"]);
    assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-8);

    // a general f in a Hardy p space: sampled supremum with an argmax unit
    let cfg = json!({"function": q_plus_i, "space": {"kind": "hardy", "p": 4}, "I": [0, 1, 0]});
    let (out, rep) = run(dir.path(), &["norm"], &cfg);
    assert!(out.status.success());
    let rep = rep.unwrap();
    assert_eq!(rep["result"]["lift"]["exact"], json!(false));
    assert!((f(&rep["result"]["slice_norm"]) - 2f64.sqrt()).abs() < 1e-12);
    assert!(rep["result"]["hardy_profile_f"]["monotone"].as_bool().unwrap());
}

#[test]
fn split_reports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({"function": [[1, 2, 3, 4], [0, 0, 1, 0]], "I": [0, 0, 1]});
    let (out, rep) = run(dir.path(), &["split"], &cfg);
    assert!(out.status.success());
    let rep = rep.unwrap();
    assert!(f(&rep["result"]["round_trip_max_error"]) <= 1e-12);
    assert_eq!(rep["result"]["symmetric_parts"].as_array().unwrap().len(), 4);
}

#[test]
fn project_merges_fibers_and_conserves_mass() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({
        "measure": {"atoms": [
            {"x": 0.1, "y": 0.5, "I": [0, 1, 0], "mass": 0.25},
            {"x": 0.1, "y": 0.5, "I": [0, 0, 1], "mass": 0.5},
            {"x": -0.3, "y": -0.2, "I": [1, 0, 0], "mass": 1.0},
            {"x": 0.4, "y": 0, "I": [1, 0, 0], "mass": 2.0}
        ]},
        "decompose_real": true,
        "reflect": true
    });
    let (out, rep) = run(dir.path(), &["project"], &cfg);
    assert!(out.status.success());
    let res = &rep.unwrap()["result"];
    let atoms = res["projection"]["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 3);
    let merged = atoms.iter().find(|a| f(&a["re"]) == 0.1).unwrap();
    assert_eq!(f(&merged["mass"]), 0.75);
    // y < 0 is stored on the opposite unit, so it projects to y > 0
    assert!(atoms.iter().any(|a| f(&a["re"]) == -0.3 && f(&a["im"]) == 0.2));
    assert_eq!(f(&res["mass_defect"]), 0.0);
    assert_eq!(res["real_part"]["atoms"].as_array().unwrap().len(), 1);
    assert_eq!(res["reflected"]["atoms"].as_array().unwrap().len(), 3);
}

#[test]
fn carleson_rays() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("shells.csv");
    let cfg = json!({"measure": {"ray": {"weights": "geometric2", "depth": 20}}});
    let (out, rep) = run(dir.path(), &["carleson", "--csv", csv.to_str().unwrap()], &cfg);
    assert!(out.status.success());
    let rep = rep.unwrap();
    assert!(rep["result"]["shell_max"].as_array().unwrap().iter().all(|m| f(m) <= 4.0));
    assert_eq!(rep["result"]["boxes"].as_array().unwrap().len(), 64 * 20);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("r,shell_max\n0.5,"));
    assert_eq!(text.lines().count(), 21);

    let cfg = json!({"measure": {"ray": {"weights": "linear2", "depth": 20}}, "depths": [5, 10, 15, 20]});
    let (out, rep) = run(dir.path(), &["carleson"], &cfg);
    assert!(out.status.success());
    assert_eq!(rep.unwrap()["result"]["sup_strictly_increasing"], json!(true));

    let cfg = json!({
        "measure": {"ray": {"weights": "linear2", "depth": 20, "angle": 0.1}},
        "arcs": [[0.0, 0.2], [1.0, 1.2]]
    });
    let (out, rep) = run(dir.path(), &["carleson"], &cfg);
    assert!(out.status.success());
    let res = &rep.unwrap()["result"];
    assert_eq!(res["arc_boxes"].as_array().unwrap().len(), 2);
    // the arc (0, 0.2) gives r = 0.9: the atoms with 1 - rho <= 0.1 are k >= 4
    let oracle: f64 = (4..=20).map(|k| k as f64 * 0.5f64.powi(k)).sum();
    assert!((f(&res["arc_box_masses"][0]) - oracle).abs() < 1e-15);
    assert_eq!(f(&res["arc_box_masses"][1]), 0.0);
    assert!((f(&res["arc_union_mass"]) - oracle).abs() < 1e-15);

    let cfg = json!({"measure": {"ray": {"weights": "geometric2", "depth": 4}}, "arcs": [[0.0, 1.0], [0.5, 1.5]]});
    let (out, _) = run(dir.path(), &["carleson"], &cfg);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn vanishing_verdicts_and_threshold_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({"measure": {"ray": {"weights": "geometric4", "depth": 20}}});
    let (_, rep) = run(dir.path(), &["vanishing"], &cfg);
    assert_eq!(rep.unwrap()["result"]["vanishing"], json!(true));
    let (_, rep) = run(dir.path(), &["vanishing", "--threshold", "1e-7"], &cfg);
    assert_eq!(rep.unwrap()["result"]["vanishing"], json!(false));
    let cfg = json!({"measure": {"ray": {"weights": "geometric2", "depth": 20}}});
    let (_, rep) = run(dir.path(), &["vanishing"], &cfg);
    assert_eq!(rep.unwrap()["result"]["vanishing"], json!(false));
    let (_, rep) = run(dir.path(), &["vanishing", "--shells", "0.5,0.75"], &json!({"measure": {"atoms": []}}));
    let rep = rep.unwrap();
    assert_eq!(rep["result"]["vanishing"], json!(true));
    assert_eq!(rep["config"]["r_levels"], json!([0.5, 0.75]));
}

#[test]
fn embed_and_equivalence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({"measure": {"random": {"atoms": 60}}, "seed": 9});
    let (out, rep) = run(dir.path(), &["embed", "--degree", "8"], &cfg);
    assert!(out.status.success());
    let rep = rep.unwrap();
    assert!(f(&rep["result"]["c_quat"]["constant"]) > 0.0);
    assert_eq!(rep["config"]["family"]["degree"], json!(8));

    for p in ["1", "2", "3"] {
        let cfg = json!({"measure": {"ray": {"weights": "geometric2", "depth": 12}}, "depths": [6, 9, 12]});
        let (out, rep) = run(dir.path(), &["equivalence", "--p", p], &cfg);
        assert!(out.status.success(), "p = {p}");
        let res = &rep.unwrap()["result"];
        assert_eq!(res["chain_ok"], json!(true));
        assert!(res["real_subfamily"]["abs_diff"].as_f64().unwrap() <= 1e-10);
        assert_eq!(res["truncations"].as_array().unwrap().len(), 3);
    }
}
