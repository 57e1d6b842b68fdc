use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn frobrel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobrel")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    fs::create_dir_all(&d).unwrap();
    d.join(name)
}

#[test]
fn lpoly_and_count_agree() {
    let l = stdout_json(&frobrel(&["lpoly", "--f", "1,1,1", "--t", "2", "--p", "5"]));
    assert_eq!(l["coeffs"], serde_json::json!(["1", "-4", "5"]));
    assert_eq!(l["rh"], true);
    let c = stdout_json(&frobrel(&["count", "--f", "1,1,1", "--t", "2", "--p", "5", "--n", "1"]));
    // #C = q + 1 + c_1
    assert_eq!(c["counts"][0], 2);
}

#[test]
fn exit_codes() {
    let singular = frobrel(&["count", "--f", "-1,6,1", "--t", "0", "--p", "5"]);
    assert_eq!(singular.status.code(), Some(2));
    let big = frobrel(&["count", "--f", "1,1,1", "--t", "1", "--p", "5", "--n", "20"]);
    assert_eq!(big.status.code(), Some(3));
    let method = frobrel(&["sieve-bound", "--method", "chebotarev"]);
    assert_eq!(method.status.code(), Some(2));
    let missing = frobrel(&["survey", "/nonexistent/survey.cfg"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn honda_tate_relation_report() {
    let ht = stdout_json(&frobrel(&["honda-tate", "--p", "541", "--d", "3"]));
    assert_eq!(ht["system"]["traces"], serde_json::json!([17, 29, 46]));
    let o = frobrel(&["relations", "--q", "541", "--poly", "1,-17,541", "--poly", "1,-29,541", "--poly", "1,-46,541"]);
    let r = stdout_json(&o);
    let found = r["verdicts"][0]["HasRelations"].as_array().expect("relations found");
    // alpha_3 = alpha_1 + conj(alpha_2), and the multiplicative one
    assert!(found.iter().any(|x| x["kind"] == "Additive" && x["exponents"] == serde_json::json!([1, 0, 0, 1, -1, 0])));
    assert!(found.iter().any(|x| x["kind"] == "Multiplicative"));
}

#[test]
fn survey_outputs_are_deterministic() {
    let cfg = scratch("pairs.cfg");
    fs::write(&cfg, "# pairs over F_25\nf = 1,1,1\np = 5\ne = 2\nk = 2\ntuple_budget = 40\nseed = 7\n").unwrap();
    let mut outs = vec![];
    for jobs in ["1", "3"] {
        let out = scratch(&format!("pairs-{jobs}.json"));
        let o = frobrel(&["--jobs", jobs, "--out", out.to_str().unwrap(), "survey", cfg.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
    // json -> csv -> json
    let json_path = scratch("pairs-1.json");
    let csv = frobrel(&["export", json_path.to_str().unwrap()]);
    assert!(csv.status.success());
    let csv_path = scratch("pairs.csv");
    fs::write(&csv_path, &csv.stdout).unwrap();
    let back = frobrel(&["--format", "json", "export", csv_path.to_str().unwrap()]);
    assert!(back.status.success());
    assert_eq!(back.stdout, outs[0]);
}

#[test]
fn sieve_and_fermat() {
    let p = stdout_json(&frobrel(&["sieve-bound", "--constants", "2,1,5", "--g", "1", "--k", "2", "--q", "390625"]));
    assert_eq!(p["c"], "24576");
    assert_eq!(p["gamma"], 58);
    let f = stdout_json(&frobrel(&["fermat", "--m", "7"]));
    assert_eq!(f["a_count"], 30);
}
