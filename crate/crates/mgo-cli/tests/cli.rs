use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output};

fn mgo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgo")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const UNEQUAL_A2: &str = r#"{"s_block":[["4","2"],["2","4"]],"summands":[
    {"id":1,"kind":"scalar","lambda":"1"},
    {"id":2,"kind":"scalar","lambda":"2"},
    {"id":3,"kind":"scalar","lambda":"3"}]}"#;

#[test]
fn describe_full_flag_a2() {
    let out = mgo(&["describe", "--algebra", "A2", "--painted", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["s"], 3);
    assert_eq!(v["dim_s"], 2);
    assert_eq!(v["dim_k1"], 0);
    assert_eq!(v["k1"], "trivial");
}

#[test]
fn describe_cp2_from_descriptor_file() {
    let desc = temp_json(r#"{"family":"A","rank":2}"#);
    let out = mgo(&["describe", "--algebra", desc.path().to_str().unwrap(), "--painted", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["s"], 1);
    assert_eq!(v["summands"][0]["dim"], 4);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(mgo(&["describe", "--algebra", "A2", "--painted", "3"]).status.code(), Some(2));
    assert_eq!(mgo(&["describe", "--algebra", "Q7", "--painted", "1"]).status.code(), Some(2));
    assert_eq!(mgo(&["describe", "--algebra", "A2"]).status.code(), Some(2));
    let bad = temp_json("{not json");
    let out = mgo(&["check-go", "--algebra", "A2", "--painted", "1,2", "--metric", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let wrong_shape = temp_json(r#"{"s_block":[["1"]],"summands":[]}"#);
    let out =
        mgo(&["check-go", "--algebra", "A2", "--painted", "1,2", "--metric", wrong_shape.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(mgo(&["refute", "--algebra", "A2", "--painted", "1", "--theorem", "T1"]).status.code(), Some(2));
    assert_eq!(mgo(&["refute", "--algebra", "A2", "--painted", "1,2", "--theorem", "T9"]).status.code(), Some(2));
}

#[test]
fn check_go_standard_passes() {
    let out = mgo(&["check-go", "--algebra", "B2", "--painted", "1", "--probes", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "PASSED_SAMPLES");
    assert!(v["probes_run"].as_u64().unwrap() >= 200);
}

#[test]
fn check_go_unequal_lambdas_refuted() {
    let metric = temp_json(UNEQUAL_A2);
    let out = mgo(&["check-go", "--algebra", "A2", "--painted", "1,2", "--metric", metric.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "REFUTED");
    assert!(v["counterexample"].is_array());
    assert!(v["certificate"].is_array());
}

#[test]
fn find_geodesic_reports_witness_or_certificate() {
    let metric = temp_json(UNEQUAL_A2);
    let path = metric.path().to_str().unwrap();
    let base = ["find-geodesic", "--algebra", "A2", "--painted", "1,2", "--metric", path, "--vector"];
    let single = mgo(&[&base[..], &["0,0,1,0,0,0,0,0"]].concat());
    assert_eq!(single.status.code(), Some(0));
    assert_eq!(json(&single)["status"], "FEASIBLE");
    let mixed = mgo(&[&base[..], &["0,0,1,0,1,0,0,0"]].concat());
    assert_eq!(json(&mixed)["status"], "INFEASIBLE");
    assert_eq!(mgo(&[&base[..], &["1,2"]].concat()).status.code(), Some(2));
}

#[test]
fn refute_t1_on_full_flag_a2_is_consistent() {
    let out = mgo(&["refute", "--algebra", "A2", "--painted", "1,2", "--theorem", "T1", "--probes", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["consistent"], true);
    let cases = v["cases"].as_array().unwrap();
    assert!(cases.iter().any(|c| c["verdict"]["status"] == "REFUTED"));
    assert!(cases.iter().any(|c| c["verdict"]["status"] == "PASSED_SAMPLES"));
}

#[test]
fn decompose_cp2_reports_criterion_disagreement() {
    let out = mgo(&["decompose", "--algebra", "A2", "--painted", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["summands"][0]["oracle"]["kind"], "quaternionic");
    assert_eq!(v["summands"][0]["reducible"], false);
}

#[test]
fn decompose_a3_middle_node_splits_in_halves() {
    let out = mgo(&["decompose", "--algebra", "A3", "--painted", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["summands"][0]["split_dims"], serde_json::json!([4, 4]));
}

#[test]
fn troots_and_graph() {
    let v = json(&mgo(&["troots", "--algebra", "A2", "--painted", "1,2"]));
    assert_eq!(v["s"], 3);
    assert_eq!(v["components"], 1);
    assert_eq!(v["troots"].as_array().unwrap().len(), 6);
    let dot = mgo(&["graph", "--algebra", "A2", "--painted", "1", "--dot"]);
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("graph troots {"));
    assert_eq!(text.matches("[label=").count(), 2);
    assert_eq!(text.matches(" -- ").count(), 1);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        &["graph", "--algebra", "G2", "--painted", "1,2", "--dot"][..],
        &["check-go", "--algebra", "A3", "--painted", "1,3", "--probes", "20", "--seed", "9"][..],
        &["decompose", "--algebra", "B3", "--painted", "2"][..],
    ] {
        assert_eq!(mgo(args).stdout, mgo(args).stdout);
    }
}
