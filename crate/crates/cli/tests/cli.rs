use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scenes() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenes")
}

fn tenv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tenv"))
        .args(args)
        .env_remove("TENV_MAX_SETSIZE")
        .env_remove("TENV_MAX_QDIM")
        .env_remove("TENV_MAX_PSIZE")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn singular_setop() {
    let out = tenv(&["singular", "--backend", "setop", "--max-size", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["singular_params"], serde_json::json!([0, 1, 2, 3]));
    assert_eq!(v["bound"], 4);
}

#[test]
fn singular_vect() {
    let out = tenv(&[
        "singular",
        "--backend",
        "vect",
        "--q",
        "3",
        "--max-size",
        "3",
    ]);
    assert_eq!(
        json_of(&out)["singular_params"],
        serde_json::json!([1, 3, 9])
    );
}

#[test]
fn gram_two_set() {
    let out = tenv(&["gram", "--backend", "setop", "--size", "2", "--param", "t"]);
    let v = json_of(&out);
    assert_eq!(v["det"], "t^2*(t-1)");
    assert_eq!(v["factorization"], "pass");
    assert_eq!(v["factors"].as_array().unwrap().len(), 2);
    let text = tenv(&[
        "gram",
        "--backend",
        "setop",
        "--size",
        "2",
        "--param",
        "t",
        "--format",
        "text",
    ]);
    assert!(stdout(&text).contains("Omega = t * (t^2 - t)"));
}

#[test]
fn gram_from_scene_file() {
    let path = scenes().join("two_set_gram.json");
    let out = tenv(&["gram", "--scene", path.to_str().unwrap()]);
    assert_eq!(json_of(&out)["det"], "t^2*(t-1)");
}

#[test]
fn endalg_table() {
    let out = tenv(&[
        "endalg",
        "--backend",
        "setop",
        "--size",
        "2",
        "--param",
        "t",
    ]);
    let v = json_of(&out);
    assert_eq!(v["dim"], 15);
    assert_eq!(v["associativity"], "pass");
    assert_eq!(v["table"].as_array().unwrap().len(), 225);

    let tsv = stdout(&tenv(&[
        "endalg",
        "--backend",
        "setop",
        "--size",
        "2",
        "--param",
        "t",
        "--format",
        "tsv",
    ]));
    let mut lines = tsv.lines();
    let header: Value =
        serde_json::from_str(lines.next().unwrap().trim_start_matches("# ")).unwrap();
    assert_eq!(header["scalar"], "poly");
    assert_eq!(header["dim"], 15);
    for line in lines {
        assert_eq!(line.split('\t').count(), 4, "{line}");
    }
}

#[test]
fn deterministic_output() {
    for args in [
        &[
            "endalg",
            "--backend",
            "setop",
            "--size",
            "2",
            "--param",
            "t",
        ][..],
        &["census", "--backend", "setop", "--size", "2"][..],
        &[
            "specialize",
            "--backend",
            "setop",
            "--X",
            "3",
            "--size",
            "2",
            "--format",
            "tsv",
        ][..],
        &["gram", "--backend", "vect", "--size", "2"][..],
    ] {
        let a = tenv(args);
        let b = tenv(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_keys_sorted_and_round_trip() {
    let out = tenv(&["hom", "--backend", "setop", "--size", "1"]);
    let text = stdout(&out);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn composite_q_is_schema_error() {
    let out = tenv(&["hom", "--backend", "vect", "--q", "4", "--size", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("q must be prime"));
    assert!(stderr(&out).contains("/q"));
}

#[test]
fn overlapping_partition_points_at_label() {
    let path = scenes().join("overlapping_partition.json");
    let out = tenv(&["compose", "--scene", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/relations/0/partition/1/0"));
}

#[test]
fn resource_bound_names_key() {
    let out = tenv(&["hom", "--backend", "setop", "--size", "9", "--target", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(err.contains("max_setsize"));
    assert!(err.contains("--max-setsize 10"));
    assert!(err.contains("TENV_MAX_SETSIZE=10"));
}

#[test]
fn environment_lifts_bounds() {
    let out = Command::new(env!("CARGO_BIN_EXE_tenv"))
        .args(["hom", "--backend", "setop", "--size", "2", "--target", "1"])
        .env("TENV_MAX_SETSIZE", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_tenv"))
        .args([
            "hom",
            "--backend",
            "setop",
            "--size",
            "2",
            "--target",
            "1",
            "--max-setsize",
            "3",
        ])
        .env("TENV_MAX_SETSIZE", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["dim"], 5);
}

#[test]
fn bad_table_is_contract_violation() {
    let path = scenes().join("bad_table.json");
    let out = tenv(&["validate-degree", "--scene", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json_of(&out)["counterexample"]["axiom"], "D1");
    let out = tenv(&["gram", "--scene", path.to_str().unwrap(), "--size", "1"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn natural_degrees_validate() {
    let out = tenv(&[
        "validate-degree",
        "--backend",
        "setop",
        "--param",
        "5/2",
        "--max-size",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["verdict"], "pass");
}

#[test]
fn compose_and_omega_scenes() {
    let path = scenes().join("compose_partitions.json");
    let v = json_of(&tenv(&["compose", "--scene", path.to_str().unwrap()]));
    assert_eq!(v["coefficient"], "t");
    let path = scenes().join("omega_injection.json");
    let v = json_of(&tenv(&["omega", "--scene", path.to_str().unwrap()]));
    assert_eq!(v["omegas"][0]["omega"], "t - 2");
}

#[test]
fn radical_and_census() {
    let v = json_of(&tenv(&[
        "radical",
        "--backend",
        "setop",
        "--size",
        "2",
        "--param",
        "7/2",
    ]));
    assert_eq!(v["radical_dim"], 0);
    let v = json_of(&tenv(&[
        "radical",
        "--backend",
        "setop",
        "--size",
        "2",
        "--param",
        "-1",
    ]));
    assert_eq!(v["radical_dim"], 0);
    let v = json_of(&tenv(&[
        "radical",
        "--backend",
        "setop",
        "--size",
        "2",
        "--param",
        "1",
    ]));
    assert!(v["radical_dim"].as_u64().unwrap() > 0);
    let v = json_of(&tenv(&["census", "--backend", "setop", "--size", "2"]));
    assert_eq!(v["predicted_blocks"], 4);
    assert_eq!(v["agrees"], true);
}

#[test]
fn specialize_reports() {
    let path = scenes().join("specialize_s3.json");
    let out = tenv(&["specialize", "--scene", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("interpolation: 14 = 14 (pass)"));
    let v = json_of(&tenv(&[
        "specialize",
        "--backend",
        "setop",
        "--X",
        "3",
        "--size",
        "1",
        "--param",
        "2",
    ]));
    assert_eq!(v["adapted"]["adapted"], false);
    assert_eq!(v["functoriality"]["holds"], false);
    let out = tenv(&["specialize", "--backend", "setop", "--size", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/X"));
}

#[test]
fn schema_is_published() {
    let out = tenv(&["schema"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["required"], serde_json::json!(["backend"]));
}
