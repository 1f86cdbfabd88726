use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn aqg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aqg")).args(args).current_dir(root()).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn read(rel: &str) -> String {
    std::fs::read_to_string(root().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

fn index() -> Vec<Value> {
    let v: Value = serde_json::from_str(&read("corpus/index.json")).unwrap();
    v["entries"].as_array().unwrap().clone()
}

fn structure_entries() -> Vec<Value> {
    index().into_iter().filter(|e| e["kind"] == "structure").collect()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("aqg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn exact_verify_reports_match_the_golden_files() {
    for e in structure_entries() {
        let file = format!("corpus/{}", e["file"].as_str().unwrap());
        let out = aqg(&["--exact", "verify", &file, "--json", "-"]);
        assert_eq!(out.status.code(), Some(0), "{file}: {}", stderr(&out));
        let golden = read(&format!("corpus/{}", e["golden"]["verify"].as_str().unwrap()));
        assert_eq!(stdout(&out), golden, "{file}");
    }
}

#[test]
fn reports_are_byte_stable_across_runs() {
    for args in [
        &["verify", "corpus/k_d4.json", "--json", "-"][..],
        &["--seed", "7", "amen", "corpus/c_s3.json", "--samples", "40", "--json", "-"],
        &["kesten", "--group", "Z^2", "--radius", "6", "--json", "-"],
    ] {
        let a = aqg(args);
        let b = aqg(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn float_verify_agrees_with_the_index() {
    for e in structure_entries() {
        let file = format!("corpus/{}", e["file"].as_str().unwrap());
        let out = aqg(&["verify", &file, "--json", "-"]);
        assert_eq!(out.status.code(), Some(0), "{file}");
        let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
        let details = &report["details"];
        for key in ["type", "tracial", "s_squared_identity"] {
            assert_eq!(details[key], e["expected"][key], "{file} {key}");
        }
        for c in report["checks"].as_array().unwrap() {
            assert!(c["residual"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap());
            assert_eq!(c["pass"], true);
            assert!(!c["reference"].as_str().unwrap().is_empty());
        }
    }
}

#[test]
fn dual_structure_files_match_the_golden_files() {
    for e in structure_entries() {
        let file = format!("corpus/{}", e["file"].as_str().unwrap());
        let dual = scratch(&format!("dual_{}", e["file"].as_str().unwrap()), "");
        let out = aqg(&["--exact", "dualize", &file, "--out", dual.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{file}: {}", stdout(&out));
        let golden = read(&format!("corpus/{}", e["golden"]["dual"].as_str().unwrap()));
        assert_eq!(std::fs::read_to_string(&dual).unwrap(), golden, "{file}");
        // The dual file is itself a valid input.
        let again = aqg(&["verify", dual.to_str().unwrap()]);
        assert_eq!(again.status.code(), Some(0), "dual of {file}");
    }
}

#[test]
fn gns_pentagon_and_amen_pass_on_the_corpus() {
    for e in structure_entries() {
        let file = format!("corpus/{}", e["file"].as_str().unwrap());
        for cmd in ["gns", "pentagon", "amen"] {
            let out = aqg(&[cmd, &file]);
            assert_eq!(out.status.code(), Some(0), "{cmd} {file}: {}", stdout(&out));
            assert!(stdout(&out).ends_with(" 0 failed\n"));
        }
    }
}

#[test]
fn export_reproduces_the_shipped_corpus() {
    for e in structure_entries() {
        let file = e["file"].as_str().unwrap();
        let (kind, group) = file.trim_end_matches(".json").split_once('_').unwrap();
        let out = aqg(&["export", &kind.to_uppercase(), &group.to_uppercase()]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out), read(&format!("corpus/{file}")), "{file}");
    }
    for g in ["s3", "d4", "q8"] {
        let out = aqg(&["export", "table", &g.to_uppercase()]);
        assert_eq!(stdout(&out), read(&format!("corpus/groups/{g}.json")), "{g}");
    }
}

#[test]
fn group_table_files_feed_export_and_kesten() {
    let out = aqg(&["export", "K", "corpus/groups/q8.json"]);
    assert_eq!(stdout(&out), read("corpus/k_q8.json"));
    let out = aqg(&["kesten", "--group", "finite:corpus/groups/s3.json", "--radius", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn modular_sandbox_matches_the_golden_haar_values() {
    for e in index().into_iter().filter(|e| e["kind"] == "relations") {
        let file = format!("corpus/{}", e["file"].as_str().unwrap());
        let out = aqg(&["modular", &file, "--json", "-"]);
        assert_eq!(out.status.code(), Some(0), "{file}: {}", stderr(&out));
        let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
        let golden: Value =
            serde_json::from_str(&read(&format!("corpus/{}", e["golden"]["haar"].as_str().unwrap()))).unwrap();
        for key in ["name", "q", "truncation", "dim", "haar"] {
            assert_eq!(report["details"][key], golden[key], "{file} {key}");
        }
    }
}

#[test]
fn modular_flags_override_the_file_defaults() {
    let out =
        aqg(&["modular", "corpus/suq2_q1_2.json", "--q", "2/3", "--truncate", "2", "--t", "-0.4,1.3", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["details"]["q"], "2/3");
    assert_eq!(report["details"]["truncation"], 2);
    assert_eq!(report["details"]["dim"], 14);
    assert_eq!(report["details"]["flow"]["times"], serde_json::json!([-0.4, 1.3]));
}

#[test]
fn modular_on_a_structure_file_reports_the_trivial_flow() {
    let out = aqg(&["modular", "corpus/c_d4.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS tracial_equivalence"));
}

#[test]
fn kesten_is_advisory() {
    let out = aqg(&["kesten", "--group", "F_2", "--radius", "6", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report["details"].is_object());
    // An absurd tolerance turns checks red without changing the exit code.
    let out = aqg(&["--tol", "0", "kesten", "--group", "F_2", "--radius", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let out = aqg(&["kesten", "--group", "Q_17"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_2_with_the_field_path() {
    let mut v: Value = serde_json::from_str(&read("corpus/k_z3.json")).unwrap();
    v["mult"][2][1].as_array_mut().unwrap().pop();
    let bad = scratch("short_row.json", &v.to_string());
    let out = aqg(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("mult[2][1]"), "{}", stderr(&out));

    let mut v: Value = serde_json::from_str(&read("corpus/k_z3.json")).unwrap();
    v["mult"][1][1][0] = serde_json::json!({"num": 1, "den": 0});
    let bad = scratch("zero_den.json", &v.to_string());
    let out = aqg(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("mult[1][1][0]"), "{}", stderr(&out));

    let bad = scratch("not_json.json", "{\"format\": ");
    assert_eq!(aqg(&["verify", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(aqg(&["verify", "corpus/missing.json"]).status.code(), Some(2));
}

#[test]
fn a_broken_structure_exits_1() {
    let mut v: Value = serde_json::from_str(&read("corpus/k_z3.json")).unwrap();
    v["mult"][1][1] = serde_json::json!([1, 0, 0]);
    let bad = scratch("broken.json", &v.to_string());
    let out = aqg(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL associativity"));
}

#[test]
fn json_file_output_keeps_the_text_report() {
    let path = scratch("report.json", "");
    let out = aqg(&["verify", "corpus/c_z2.json", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("verify corpus/c_z2.json\n"));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(report["command"], "verify");
}
