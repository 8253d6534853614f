//! End-to-end checks of the command-line interface: exit codes, output
//! determinism, and the machine-readable format.

use std::path::PathBuf;
use std::process::{Command, Output};

fn sample(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples").join(name);
    p.to_str().expect("utf-8 path").to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptscheme"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn multilinearize_prints_the_three_relations() {
    let out = run(&["multilinearize", &sample("quantum-affine3-case1.alg")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "g1 = y0*x1 - 2*x0*y1\ng2 = z0*x1 - 6*x0*z1\ng3 = z0*y1 - 3*y0*z1\n"
    );
}

#[test]
fn scheme_counts_both_parameter_cases() {
    let out = run(&["scheme", &sample("quantum-affine3-case1.alg"), "--p", "7", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("X_2 over F_7: 57 point(s)\n"));

    let out = run(&["scheme", &sample("quantum-affine3-case2.alg"), "--p", "7", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("X_2 over F_7: 21 point(s)\n"));
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = run(&["scheme", "missing.alg", "--p", "7", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot read"));
}

#[test]
fn unparsable_input_is_a_usage_error() {
    let out = run(&["multilinearize", &sample("usl2.ext")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("SyntaxError"));
}

#[test]
fn non_prime_modulus_is_a_usage_error() {
    let out = run(&["scheme", &sample("quantum-plane-f5.alg"), "--p", "6", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("InvalidModulus"));
}

#[test]
fn domain_errors_carry_their_structured_name() {
    // The Jordan plane is not a quantum affine space.
    let out = run(&["qaffine", &sample("jordan-plane-f5.alg"), "--p", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("NotQuantumAffine"));

    let out = run(&["catalog", "no-such-entry"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("NotInCatalog"));

    // q13 = 5 vanishes mod 5, so the reduction is impossible.
    let out = run(&["qaffine", &sample("quantum-affine3-case2.alg"), "--p", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("ParameterVanishes"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(run(&["scheme", &sample("quantum-plane-f5.alg")]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        run(&["scheme", &sample("quantum-plane-f5.alg"), "--p", "5", "--m", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn output_is_byte_deterministic() {
    for args in [
        vec!["scheme", &sample("quantum-affine3-case1.alg"), "--p", "7", "--m", "2", "--json"],
        vec!["skewpbw", &sample("usl2.ext"), "--p", "7", "--m-max", "3"],
        vec!["qaffine", "q12=2,q13=6,q23=3", "--p", "7"],
        vec!["stabilize", &sample("jordan-plane-f5.alg"), "--p", "5", "--m-max", "4", "--json"],
    ] {
        let strs: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let refs: Vec<&str> = strs.iter().map(String::as_str).collect();
        let first = run(&refs);
        let second = run(&refs);
        assert_eq!(first.status.code(), Some(0), "{args:?}: {}", stderr(&first));
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn json_reports_are_well_formed() {
    let out = run(&["scheme", &sample("quantum-plane-f5.alg"), "--p", "5", "--m", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(value["count"], 6);
    assert_eq!(value["points"].as_array().unwrap().len(), 6);
    // Points are arrays of integer residue rows.
    assert!(value["points"][0][0][0].is_u64());

    let out = run(&["skewpbw", &sample("shift-operators.ext"), "--p", "7", "--m-max", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(value["n"], 2);
    assert_eq!(value["sigma"]["e_size"], 8);

    let out = run(&["catalog", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(value.as_array().unwrap().len(), 8);
}

#[test]
fn skewpbw_report_is_invariant_under_lower_terms() {
    // The shipped sl2 file and the same relations with brackets dropped.
    let with_lower = run(&["skewpbw", &sample("usl2.ext"), "--p", "7", "--m-max", "3"]);
    assert_eq!(with_lower.status.code(), Some(0));

    let dir = std::env::temp_dir().join("ptscheme-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let stripped = dir.join("usl2-graded.ext");
    std::fs::write(
        &stripped,
        "field Q\nvars e f h\next f e : 1 => 0\next h e : 1 => 0\next h f : 1 => 0\n",
    )
    .unwrap();
    let graded = run(&["skewpbw", stripped.to_str().unwrap(), "--p", "7", "--m-max", "3"]);
    assert_eq!(graded.status.code(), Some(0));

    assert_eq!(stdout(&with_lower), stdout(&graded));
    assert!(stdout(&with_lower).contains("|E(F_7)| = 57"));
}

#[test]
fn qaffine_accepts_inline_parameters_and_threads_flag() {
    let out = run(&["qaffine", "q12=2,q13=6,q23=3", "--p", "7", "--threads", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("|E(F_7)| = 57"));

    let out = run(&["qaffine", "q12=bad", "--p", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("inline parameters"));
}
