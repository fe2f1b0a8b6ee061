use std::path::PathBuf;
use std::process::{Command, Output};

use convexqe_core::classify::{classify, CutKind};
use convexqe_core::fixtures;
use convexqe_core::model::{oracle_truth, Point};
use convexqe_core::syntax::parse_formula;
use serde_json::Value;

fn fixture(path: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(path).to_string_lossy().into_owned()
}

fn convexqe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convexqe"))
        .args(args)
        .env_remove("CONVEXQE_FIXTURES")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = convexqe(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn classify_reports_the_fixture_kind() {
    let v = json(&["classify", "--model", &fixture("q3_11pi.json")]);
    assert_eq!(v["cut_kind"], "IrrationalNonvaluational");
    assert_eq!(v["uniquely_realizable"], true);
    assert_eq!(v["config"]["seed"], 0);

    let v = json(&["classify", "--model", "lex2_1inf"]);
    assert_eq!(v["cut_kind"], "IrrationalValuational");
    assert_eq!(v["epsilon_witness"], serde_json::json!(["0", "1"]));
}

#[test]
fn eliminate_matches_the_oracle() {
    let o = convexqe(&["eliminate", "--model", &fixture("lex2_sub1.json"), "E y. (x < y & U(y))"]);
    assert_eq!(o.status.code(), Some(0));
    let out = parse_formula(stdout(&o).trim()).unwrap();
    assert!(out.is_quantifier_free());
    let m = fixtures::lex2_sub1();
    let expected = parse_formula("~((0 < x) & ~U(x))").unwrap();
    for a in [[0, 0], [0, 5], [0, -3], [1, 0], [-1, 7], [2, -2]] {
        let x = Point(a.iter().map(|&k| convexqe_core::rational::int(k)).collect());
        let asgn = [("x".to_string(), x)].into();
        assert_eq!(oracle_truth(&m, &out, &asgn).unwrap(), oracle_truth(&m, &expected, &asgn).unwrap(), "{a:?}");
    }
}

#[test]
fn parse_echoes_canonical_printing() {
    let o = convexqe(&["parse", "E y. y + y = x"]);
    assert_eq!(o.status.code(), Some(0));
    let printed = stdout(&o);
    let again = convexqe(&["parse", printed.trim()]);
    assert_eq!(stdout(&again), printed);
}

#[test]
fn exit_codes() {
    assert_eq!(convexqe(&["parse", "E y. y +"]).status.code(), Some(2));
    assert_eq!(convexqe(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(convexqe(&["classify", "--model", "no/such/model.json"]).status.code(), Some(2));
    assert_eq!(convexqe(&["classify"]).status.code(), Some(2));
    assert_eq!(convexqe(&["--samples", "0", "classify", "--model", "q1_pi"]).status.code(), Some(2));
    let refused = convexqe(&["eliminate", "--model", "q1_pi", "E y. x < y"]);
    assert_eq!(refused.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("nonvaluational"));
    let constant = convexqe(&["obstruct", "--model", "lex2_1inf", "--fn", &fixture("functions/abs.json")]);
    assert_eq!(constant.status.code(), Some(1));
    assert_eq!(convexqe(&["--help"]).status.code(), Some(0));
}

#[test]
fn fixture_directory_can_be_overridden() {
    let dir = std::env::temp_dir().join(format!("convexqe-fixtures-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::copy(fixture("q1_pi.json"), dir.join("renamed.json")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_convexqe"))
        .args(["classify", "--model", "renamed"])
        .env("CONVEXQE_FIXTURES", &dir)
        .output()
        .unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("IrrationalNonvaluational"));
}

#[test]
fn skolemize_then_verify() {
    let v = json(&["skolemize", "--model", "lex2_sub1", "x < y & U(y)"]);
    assert_eq!(v["target"], "y");
    let path = std::env::temp_dir().join(format!("convexqe-sk-{}.json", std::process::id()));
    std::fs::write(&path, v.to_string()).unwrap();
    let report = json(&[
        "verify-skolem",
        "--model",
        "lex2_sub1",
        "--phi",
        "x < y & U(y)",
        "--sk",
        path.to_str().unwrap(),
        "--samples",
        "200",
        "--seed",
        "5",
    ]);
    assert_eq!(report["passed"], true);
    assert_eq!(report["config"]["seed"], 5);

    std::fs::write(&path, r#"[{"guard": "true", "witness": "x"}]"#).unwrap();
    let o = convexqe(&["verify-skolem", "--model", "lex2_sub1", "--phi", "x < y", "--sk", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn normalize_examples() {
    let v = json(&["normalize-monotone", "--fn", &fixture("functions/abs.json")]);
    assert_eq!(v["function"], serde_json::json!({"breakpoints": [], "pieces": [{"slope": "1", "intercept": "0"}]}));
    let v = json(&["normalize-monotone", "--fn", &fixture("functions/zigzag.json")]);
    assert_eq!(v["function"], serde_json::json!({"breakpoints": [], "pieces": [{"slope": "1", "intercept": "-2"}]}));
}

#[test]
fn obstruction_and_choice_reports() {
    let v = json(&["obstruct", "--model", "q1_pi", "--fn", &fixture("functions/half_plus_three_halves.json")]);
    assert_eq!(v["violation"], "NotIncreasing");
    assert!(v["certificate"][0]["interval"]["lo"].is_string());

    let v = json(&["choice-demo", "--model", "lex2_1inf"]);
    assert!(v["candidate"].is_array());
    assert!(v["violation"]["kind"].is_string());
    let v = json(&["choice-demo", "--model", "lex2_sub1", "--fn", &fixture("functions/abs.json")]);
    assert!(v["candidate"]["pieces"].is_array());
}

#[test]
fn pluslike_reports() {
    let v = json(&["check-pluslike", "--fn", &fixture("functions/minus.json")]);
    assert_eq!(v["pluslike"]["pluslike"], false);
    assert_eq!(v["pluslike"]["reason"]["kind"], "NotIncreasingInY");
    let v = json(&["check-pluslike", "--model", "lex2_1inf", "--fn", &fixture("functions/plus.json")]);
    assert_eq!(v["f_valuational"]["f_valuational"], true);
    let v = json(&["check-pluslike", "--model", "q1_pi", "--fn", &fixture("functions/plus.json")]);
    assert_eq!(v["f_valuational"]["f_valuational"], false);
}

#[test]
fn eval_quantified_and_free() {
    let v = json(&["eval", "--model", "lex2_1inf", "U(x)", "--at", "x=1,5"]);
    assert_eq!(v["value"], true);
    let v = json(&["eval", "--model", "lex2_1inf", "E y. x < y & U(y)", "--at", "x=2,0"]);
    assert_eq!(v["value"], false);
    assert_eq!(convexqe(&["eval", "--model", "lex2_1inf", "U(x)", "--at", "x=oops"]).status.code(), Some(2));
}

#[test]
fn fuzz_is_deterministic_and_catches_an_injected_bug() {
    let args = ["fuzz", "--model", "lex2_sub1", "--formulas", "60", "--samples", "100", "--seed", "7"];
    let a = convexqe(&[&["--format", "json"], &args[..]].concat());
    let b = convexqe(&[&["--format", "json"], &args[..]].concat());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["discrepancies"], serde_json::json!([]));
    assert_eq!(v["config"]["seed"], 7);

    let v = json(&[&args[..], &["--inject-bug"]].concat());
    let found = v["discrepancies"].as_array().unwrap();
    assert!(!found.is_empty());
    for d in found {
        let original = parse_formula(d["formula"].as_str().unwrap()).unwrap();
        let minimized = parse_formula(d["minimized"].as_str().unwrap()).unwrap();
        assert!(minimized.size() <= original.size());
    }

    let v = json(&["fuzz", "--model", "lex2_1inf", "--formulas", "20", "--samples", "50", "--depth", "0"]);
    assert_eq!(v["discrepancies"], serde_json::json!([]));
    assert_eq!(convexqe(&["fuzz", "--model", "q1_pi", "--formulas", "1"]).status.code(), Some(1));
}

#[test]
fn shipped_models_agree_with_the_library_fixtures() {
    for (name, m) in fixtures::all() {
        let loaded = convexqe::fixtures::load_model(&fixture(&format!("{name}.json"))).unwrap();
        assert_eq!(loaded, m, "{name}");
    }
    assert!(classify(&fixtures::q1_pi()).cut_kind == CutKind::IrrationalNonvaluational);
}

#[test]
fn corpus_matches_its_sidecars() {
    let corpus = convexqe::fixtures::corpus().unwrap();
    assert_eq!(corpus.len(), fixtures::all().len());
    for (name, m, expect) in corpus {
        let r = classify(&m);
        assert_eq!(convexqe::format::cut_kind_name(r.cut_kind), expect.cut_kind, "{name}");
        assert_eq!(r.stabilizer_level, expect.stabilizer_level, "{name}");
        assert_eq!(r.uniquely_realizable, expect.uniquely_realizable, "{name}");
    }
}
