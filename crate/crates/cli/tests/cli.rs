//! End-to-end behavior of the binary: exit codes, output shape, and the
//! scriptability contract.

use std::process::{Command, Output};

fn fbl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn parse_prints_canonical_form() {
    let out = fbl(&["parse", "circ (p & q)"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "~bullet (p & q)\natoms: p, q\n");
}

#[test]
fn parse_error_is_an_input_error() {
    let out = fbl(&["parse", "p &"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn eval_refutation_exits_one() {
    let out = fbl(&[
        "eval",
        "--model",
        &fixture("two_world_chain.json"),
        "--world",
        "w",
        "~ dia ~ p -> box p",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("world w does not force '~dia ~p -> box p'"), "{text}");
    assert!(text.contains("ext(~dia ~p) = {w, v}"), "{text}");
    assert!(text.contains("ext(box p) = {}"), "{text}");
}

#[test]
fn eval_success_exits_zero() {
    let out = fbl(&[
        "eval",
        "--model",
        &fixture("two_world_chain.json"),
        "--world",
        "v",
        "p",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("world v forces 'p'"));
}

#[test]
fn eval_rejects_unknown_worlds_and_missing_files() {
    let out = fbl(&[
        "eval",
        "--model",
        &fixture("two_world_chain.json"),
        "--world",
        "nowhere",
        "p",
    ]);
    assert_eq!(code(&out), 2);
    let out = fbl(&["eval", "--model", "/no/such/file.json", "--world", "w", "p"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn check_model_reports_all_conditions() {
    let out = fbl(&["check-model", &fixture("two_world_chain.json")]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for flag in [
        "C1", "C2", "CAP", "SUP", "NEGSUP", "CBOX", "CDIA", "CBSQ", "CBLT", "CN", "CONS",
    ] {
        assert!(text.contains(&format!("{flag}: holds")), "{flag} in {text}");
    }
}

#[test]
fn check_model_fails_a_violated_class() {
    let out = fbl(&[
        "check-model",
        &fixture("c1_violating.json"),
        "--class",
        "C1",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("C1: fails at"), "{text}");
    assert!(text.contains("class C1 fails"), "{text}");
}

#[test]
fn check_model_rejects_invalid_models() {
    let out = fbl(&["check-model", &fixture("invalid_valuation.json")]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("invalid model:"));
    let out = fbl(&["check-model", &fixture("garbage.json")]);
    assert_eq!(code(&out), 2);
}

#[test]
fn valid_requires_exactly_one_scope() {
    let out = fbl(&["valid", "p -> p"]);
    assert_eq!(code(&out), 2);
    let out = fbl(&["valid", "p -> p", "--logic", "W", "--class", "C1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn valid_reports_at_bound() {
    let out = fbl(&["valid", "W p -> ~p", "--logic", "W", "--max-worlds", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "valid at bound 2 (1896 models checked)\n");
}

#[test]
fn valid_rejects_unknown_ids_and_oversize_bounds() {
    let out = fbl(&["valid", "p", "--logic", "Z"]);
    assert_eq!(code(&out), 2);
    let out = fbl(&["valid", "p", "--class", "C1,NOPE"]);
    assert_eq!(code(&out), 2);
    let out = fbl(&["valid", "p", "--class", "C1", "--max-worlds", "4"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn countermodel_exits_one_when_found() {
    let out = fbl(&[
        "countermodel",
        "box p -> dia p",
        "--class",
        "CBOX,CDIA",
        "--max-worlds",
        "1",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("countermodel found after 8 models"), "{text}");
    assert!(text.contains("witness: w0 does not force 'box p -> dia p'"), "{text}");
}

#[test]
fn countermodel_exits_zero_when_none_exists() {
    let out = fbl(&[
        "countermodel",
        "box p -> dia p",
        "--class",
        "CBOX,CDIA,CONS",
        "--max-worlds",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("no countermodel with up to 2 worlds"));
}

#[test]
fn prove_accepts_the_corpus() {
    for (file, lines) in [
        ("ntax.json", "1 line"),
        ("wc_chain.json", "7 lines"),
        ("mw_wn.json", "2 lines"),
    ] {
        let out = fbl(&["prove", "--file", &fixture(file)]);
        assert_eq!(code(&out), 0, "{file}");
        assert_eq!(stdout(&out), format!("derivation ok ({lines})\n"), "{file}");
    }
}

#[test]
fn prove_rejects_rule_application_under_premises() {
    let out = fbl(&["prove", "--file", &fixture("wn_premise_bad.json")]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        stdout(&out),
        "derivation rejected: line 2: rule applied to premise-dependent line\n"
    );
}

#[test]
fn prove_distinguishes_load_errors() {
    let out = fbl(&["prove", "--file", &fixture("garbage.json")]);
    assert_eq!(code(&out), 2);
    let out = fbl(&["prove", "--file", "/no/such/file.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn experiments_run_and_unknown_names_are_input_errors() {
    for name in [
        "duality",
        "classical_w_persistence",
        "box_dia_bridge",
        "cons_bridge",
        "bk_soundness",
    ] {
        let out = fbl(&["experiment", name]);
        assert_eq!(code(&out), 0, "{name}: {}", stdout(&out));
    }
    let out = fbl(&["experiment", "frobnicate"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown experiment"));
}

#[test]
fn json_reports_are_valid_json() {
    let model = fixture("two_world_chain.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["parse", "W p -> ~p", "--json"],
        vec!["eval", "--model", &model, "--world", "w", "p", "--json"],
        vec!["check-model", &model, "--json"],
        vec!["valid", "p | ~p", "--class", "C1", "--json"],
        vec!["experiment", "duality", "--json"],
    ];
    for args in &cases {
        let out = fbl(args);
        let text = stdout(&out);
        serde_json::from_str::<serde_json::Value>(&text)
            .unwrap_or_else(|e| panic!("bad json from {args:?}: {e}\n{text}"));
    }
}

#[test]
fn json_search_report_round_trips_documented_fields() {
    let out = fbl(&["valid", "p | ~p", "--class", "C1", "--json"]);
    assert_eq!(code(&out), 1);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["query"], "p | ~p");
    assert_eq!(value["class"], "C1");
    assert_eq!(value["bound"], 2);
    assert_eq!(value["mode"], "exhaustive");
    assert_eq!(value["outcome"], "countermodel found");
    assert_eq!(value["witness"], "w0");
    assert!(value["model"]["worlds"].is_array());
    assert!(value["stats"]["models_checked"].is_u64());
    assert!(value.get("logic").is_none(), "logic omitted under --class");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "valid",
        "(W p & W q) -> W (p & q)",
        "--logic",
        "W",
        "--max-worlds",
        "2",
        "--json",
    ];
    let first = fbl(&args);
    let second = fbl(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(code(&first), code(&second));
}
