use std::process::{Command, Output};

use serde_json::Value;

fn gyb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gyb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    let o = gyb(&all);
    let doc = serde_json::from_str(&stdout(&o)).expect("structured output parses");
    (o.status.code().unwrap(), doc)
}

#[test]
fn check_passes_for_valid_parameters() {
    for args in [["--n", "4", "--m", "3"], ["--n", "2", "--m", "5"]] {
        let mut all = vec!["check"];
        all.extend(args);
        let o = gyb(&all);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("[PASS] gyb_equation"));
        assert!(!stdout(&o).contains("[FAIL]"));
    }
}

#[test]
fn even_m_is_invalid_input() {
    let o = gyb(&["check", "--n", "4", "--m", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("odd"));
}

#[test]
fn check_output_is_sorted_by_name() {
    let o = gyb(&["check", "--n", "3", "--m", "5"]);
    let names: Vec<String> = stdout(&o)
        .lines()
        .filter_map(|l| l.strip_prefix("[PASS] "))
        .map(|l| l.split(" (n=").next().unwrap().to_string())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(names.len(), 11);
}

#[test]
fn braid_relation_gives_identical_normal_forms() {
    let (c1, a) = structured(&["eval", "--n", "3", "--m", "5", "--word", "1 2 1"]);
    let (c2, b) = structured(&["eval", "--n", "3", "--m", "5", "--word", "2 1 2"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a["reports"]["eval.normal_form"], b["reports"]["eval.normal_form"]);
    assert_eq!(a["reports"]["eval.normal_form"]["perm"], serde_json::json!([3, 2, 1]));
}

#[test]
fn empty_word_is_identity() {
    let (code, doc) = structured(&["eval", "--word", ""]);
    assert_eq!(code, 0);
    let nf = &doc["reports"]["eval.normal_form"];
    assert_eq!(nf["perm"], serde_json::json!([1, 2, 3]));
    assert!(nf["exponents"].as_object().unwrap().values().all(|v| v == 0));
    let m = &doc["reports"]["eval.matrix"];
    let dim = m["dim"].as_u64().unwrap() as usize;
    assert_eq!(dim, 16);
    for (idx, e) in m["entries"].as_array().unwrap().iter().enumerate() {
        let expected = if idx / dim == idx % dim { 1.0 } else { 0.0 };
        assert_eq!(e[0].as_f64().unwrap(), expected);
        assert_eq!(e[1].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn sixth_power_of_generator_is_identity_at_m3() {
    let (code, doc) = structured(&["eval", "--n", "2", "--m", "3", "--word", "1 1 1 1 1 1"]);
    assert_eq!(code, 0);
    let m = &doc["reports"]["eval.matrix"];
    for (idx, e) in m["entries"].as_array().unwrap().iter().enumerate() {
        let expected = if idx / 8 == idx % 8 { 1.0 } else { 0.0 };
        assert!((e[0].as_f64().unwrap() - expected).abs() < 1e-12);
        assert!(e[1].as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn inverse_letters_parse() {
    let (code, doc) = structured(&["eval", "--n", "3", "--m", "3", "--word", "-1 1 -2 2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["reports"]["eval.normal_form"]["perm"], serde_json::json!([1, 2, 3]));
}

#[test]
fn bad_word_is_invalid_input() {
    assert_eq!(gyb(&["eval", "--n", "3", "--word", "1 x"]).status.code(), Some(2));
    assert_eq!(gyb(&["eval", "--n", "3", "--word", "3"]).status.code(), Some(2));
}

#[test]
fn export_text_has_seventeen_significant_digits() {
    let o = gyb(&["eval", "--n", "2", "--m", "5", "--word", "1"]);
    let line = stdout(&o).lines().find(|l| l.starts_with("matrix: ")).unwrap().to_string();
    let parsed = gyb_braid::Operator::from_export_text(line.trim_start_matches("matrix: ")).unwrap();
    let ctx = gyb_braid::RepContext::new(2, 5).unwrap();
    let word = gyb_braid::BraidWord::parse("1", 2).unwrap();
    assert_eq!(parsed, gyb_braid::braidrep::eval_word(&word, &ctx).unwrap());
    let r = gyb_braid::gates::build_r_direct(5).unwrap();
    assert!(gyb_braid::qlinalg::max_entry_distance(&parsed, &r).unwrap() < 1e-15);
    assert!(line.contains("e-1, "));
}

#[test]
fn image_orders_match_formula() {
    for (m, order) in [("3", 162), ("5", 750)] {
        let (code, doc) = structured(&["image", "--n", "3", "--m", m]);
        assert_eq!(code, 0);
        for backend in ["matrix", "symbolic"] {
            let r = &doc["reports"][format!("image_order.{backend}")];
            assert_eq!(r["order_found"], order);
            assert_eq!(r["order_predicted"], order);
        }
    }
}

#[test]
fn image_truncation_exits_3() {
    let o = gyb(&["image", "--n", "4", "--m", "5", "--max-elements", "1000", "--backend", "symbolic"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("predicted 375000"));
}

#[test]
fn witness_n3_passes_and_duplicate_fails() {
    for m in ["3", "5"] {
        assert_eq!(gyb(&["witness", "--n", "3", "--m", m]).status.code(), Some(0));
    }
    let o = gyb(&["witness", "--n", "3", "--m", "3", "--inject-duplicate"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(NOT2) and (NOT2) agree on the state"));
}

#[test]
fn witness_n4_default_state_reports_collisions() {
    // No 5-qubit basis state separates all seven words.
    let (code, doc) = structured(&["witness", "--n", "4", "--m", "5"]);
    assert_eq!(code, 1);
    assert_eq!(doc["reports"]["witness.not.state_01100"]["pass"], false);
    assert_eq!(doc["reports"]["witness.not.operators"]["pass"], true);
    assert_eq!(doc["reports"]["witness.gamma_not.operators"]["pass"], true);
}

#[test]
fn witness_signed_not_separates_on_00100() {
    let (_, doc) = structured(&["witness", "--n", "4", "--m", "5", "--state", "|00100⟩"]);
    assert_eq!(doc["reports"]["witness.gamma_not.state_00100"]["pass"], true);
}

#[test]
fn witness_rejects_unsupported_n() {
    assert_eq!(gyb(&["witness", "--n", "5"]).status.code(), Some(2));
    assert_eq!(gyb(&["witness", "--n", "3", "--state", "01"]).status.code(), Some(2));
}

#[test]
fn out_writes_file_and_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let p = path.to_str().unwrap();
    let o = gyb(&["check", "--n", "3", "--m", "7", "--threads", "2", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let first = std::fs::read_to_string(&path).unwrap();
    gyb(&["check", "--n", "3", "--m", "7", "--out", p]);
    let second = std::fs::read_to_string(&path).unwrap();
    let strip = |s: &str| s.lines().map(str::to_string).collect::<Vec<_>>();
    assert_eq!(strip(&first), strip(&second));
}

#[test]
fn structured_payload_is_stable_apart_from_timings() {
    let scrub = |mut v: Value| {
        for r in v["reports"].as_object_mut().unwrap().values_mut() {
            r.as_object_mut().unwrap().remove("elapsed_ms");
        }
        v
    };
    let (_, a) = structured(&["image", "--n", "3", "--m", "3"]);
    let (_, b) = structured(&["image", "--n", "3", "--m", "3", "--threads", "1"]);
    assert_eq!(scrub(a), scrub(b));
}
