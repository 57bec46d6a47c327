use std::path::PathBuf;
use std::process::{Command, Output};

use omniscio::cli::Report;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omniscio"))
        .args(args)
        .current_dir(crate_dir())
        .env_remove("OMNISCIO_MAX_M")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(crate_dir().join("tests/golden").join(name)).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("omniscio-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn generative_counterexample_matches_golden() {
    let out = run(&["counterexample", "--mode", "generative", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("counterexample_generative.json"));
    let report = Report::from_json(&stdout(&out)).unwrap();
    let cap = report.capacity.unwrap();
    assert_eq!(cap.h_full.to_string(), "3");
    assert_eq!(cap.r_co.to_string(), "9/4");
    assert_eq!(cap.c_sk.to_string(), "3/4");
    assert_eq!(report.dependence.unwrap().i_a.to_string(), "1");
}

#[test]
fn quoted_table_reproduces_headline_numbers() {
    let out = run(&["counterexample", "--mode", "paper-h"]);
    let text = stdout(&out);
    assert_eq!(text, golden("counterexample_paper_h.txt"));
    assert!(text.contains("R_CO = 9/4 (≈2.25)"));
    assert!(text.contains("C_SK = 7/4 (≈1.75)"));
    assert!(text.contains("I(A) = 2 (≈2)"));
    // the dual vertex differs from the quoted one, so an assertion fails
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_round_trips_byte_for_byte() {
    for args in [
        &["counterexample", "--mode", "generative", "--json"][..],
        &["counterexample", "--mode", "paper-h", "--json"],
        &["audit", "--json"],
        &["tight", "data/noisy_pair.json", "--constructive", "--json"],
    ] {
        let text = stdout(&run(args));
        let report = Report::from_json(&text).unwrap();
        assert_eq!(report.to_json() + "\n", text, "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["audit"][..],
        &["tight", "data/xor_pairs.json", "--constructive", "--json"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout);
    }
}

#[test]
fn shared_bit_solve() {
    let out = run(&["solve", "data/shared_bit.json", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("solve_shared_bit.json"));
    let cap = Report::from_json(&stdout(&out)).unwrap().capacity.unwrap();
    assert_eq!(cap.r_co.to_string(), "0");
    assert_eq!(cap.c_sk.to_string(), "1");
}

#[test]
fn xor_file_matches_builtin() {
    let out = run(&["solve", "data/xor_pairs.json", "--json"]);
    let cap = Report::from_json(&stdout(&out)).unwrap().capacity.unwrap();
    assert_eq!(cap.h_full.to_string(), "3");
    assert_eq!(cap.c_sk.to_string(), "3/4");
}

#[test]
fn invalid_table_is_rejected_with_the_violating_pair() {
    let out = run(&["solve", "data/cardinality_table.json"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("h({1,2,4}) + h({1,2,5})"), "{err}");

    let out = run(&["solve", "data/cardinality_table.json", "--no-validate"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("C_SK = 7/4"));

    let out = run(&["validate", "data/cardinality_table.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("INVALID"));
    assert_eq!(
        run(&["validate", "data/xor_pairs.json"]).status.code(),
        Some(0)
    );
}

#[test]
fn malformed_inputs_exit_2() {
    let cases = [
        ("garbage", "{ not json"),
        (
            "width",
            r#"{"m":2,"active":[1,2],"source":{"type":"linear_gf2","base_bits":2,"terminals":[["1"],["01"]]}}"#,
        ),
        (
            "count",
            r#"{"m":3,"active":[1,2],"source":{"type":"linear_gf2","base_bits":1,"terminals":[["1"],["1"]]}}"#,
        ),
        (
            "active",
            r#"{"m":2,"active":[1,5],"source":{"type":"linear_gf2","base_bits":1,"terminals":[["1"],["1"]]}}"#,
        ),
        (
            "pmf",
            r#"{"m":2,"active":[1,2],"source":{"type":"tabular","alphabets":[2,2],"pmf":[{"symbols":[0,0],"p":"1/2"}]}}"#,
        ),
        (
            "vector",
            r#"{"m":2,"active":[1,2],"source":{"type":"entropy_vector","entropies":{"1":"1","2":"1"}}}"#,
        ),
    ];
    for (name, text) in cases {
        let path = temp_file(name, text);
        let out = run(&["solve", path.to_str().unwrap()]);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        std::fs::remove_file(path).ok();
    }
    assert_eq!(
        run(&["solve", "data/does_not_exist.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn single_bit_pair_has_unit_entropies() {
    let path = temp_file(
        "pair",
        r#"{"m":2,"active":[1,2],"source":{"type":"linear_gf2","base_bits":1,"terminals":[["1"],["1"]]}}"#,
    );
    let (oracle, _) = omniscio::cli::parse_source_file(&path, true).unwrap();
    for bits in 1..4u32 {
        let s = omniscio::SubsetMask::new(bits, 2).unwrap();
        assert_eq!(oracle.joint_entropy(s).unwrap().to_string(), "1");
    }
    std::fs::remove_file(path).ok();
}

#[test]
fn enumeration_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_omniscio"))
        .args(["mdb", "data/xor_pairs.json"])
        .current_dir(crate_dir())
        .env("OMNISCIO_MAX_M", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("OMNISCIO_MAX_M"));
    let out = run(&["mdb", "data/xor_pairs.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("I(A) = 1 (≈1)"));
}

#[test]
fn tight_verbs() {
    let out = run(&["tight", "data/xor_pairs.json", "--constructive"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("bound is loose"));
    assert!(text.contains("gap I(A) - C_SK = 1/4 (≈0.25)"));

    let out = run(&["tight", "data/shared_bit.json", "--constructive", "--json"]);
    let t = Report::from_json(&stdout(&out)).unwrap().tightness.unwrap();
    assert!(t.tight);
    assert_eq!(t.search_tight, Some(true));
    assert_eq!(t.dual_partition, Some(vec![vec![1], vec![2]]));
    assert_eq!(t.witness.unwrap().partition, vec![vec![1], vec![2]]);
}

#[test]
fn audit_flags_sixteen_entries() {
    let out = run(&["audit", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let audit = Report::from_json(&stdout(&out)).unwrap().audit.unwrap();
    assert_eq!(audit.rows.len(), 56);
    assert_eq!(audit.differing, 16);
    assert!(!audit.quoted.validity.valid);
    assert!(audit.generative.validity.valid);
}

#[test]
fn usage_errors() {
    assert_ne!(
        run(&["counterexample", "--mode", "other"]).status.code(),
        Some(0)
    );
    assert_ne!(run(&[]).status.code(), Some(0));
}
