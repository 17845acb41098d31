use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ado4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ado4")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = ado4(&all);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}{}", stdout(&o), stderr(&o)));
    (code(&o), v)
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn catalog_list_has_every_row() {
    let (c, v) = json(&["catalog", "list"]);
    assert_eq!(c, 0);
    let rows = v.as_array().unwrap();
    let count = |d: u64| rows.iter().filter(|r| r["dim"] == d).count();
    assert_eq!((count(1), count(2), count(3), count(4)), (1, 2, 6, 16));
}

#[test]
fn catalog_show_n3() {
    let o = ado4(&["catalog", "show", "n3"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("[e1,e2]=e3"), "{out}");
    assert!(out.contains("mu = 3"), "{out}");

    let (_, v) = json(&["catalog", "show", "n3"]);
    assert_eq!(v["mu"], 3);
    assert_eq!(v["algebra"]["brackets"][0]["pair"], serde_json::json!([1, 2]));
    assert_eq!(v["algebra"]["brackets"][0]["value"], serde_json::json!(["0", "0", "1"]));
}

#[test]
fn catalog_show_rejects_bad_input() {
    let o = ado4(&["catalog", "show", "r3lambda", "--param", "lambda=0"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("λ∈C*"), "{}", stderr(&o));

    assert_eq!(code(&ado4(&["catalog", "show", "n7"])), 2);
    assert_eq!(code(&ado4(&["catalog", "show", "g8", "--param", "beta=1"])), 2);
    assert_eq!(code(&ado4(&["catalog", "show", "g8", "--param", "alpha=1/0"])), 2);
    assert_eq!(code(&ado4(&["--tol=-1", "catalog", "list"])), 2);
}

#[test]
fn verify_rep_documents() {
    let dir = tempfile::tempdir().unwrap();
    let doc = stdout(&ado4(&["catalog", "show", "n3", "--emit", "rep"]));
    let good = write(dir.path(), "n3.json", &doc);
    let o = ado4(&["verify", "rep", &good]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    // rho(e3) = e13 breaks [rho(e1), rho(e2)] = rho(e3)
    let mut v: Value = serde_json::from_str(&doc).unwrap();
    v["images"][2] = serde_json::json!([["0", "0", "1"], ["0", "0", "0"], ["0", "0", "0"]]);
    let bad = write(dir.path(), "bad.json", &v.to_string());
    let o = ado4(&["verify", "rep", &bad]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("(1,2) residual e13"), "{}", stdout(&o));
    let (c, report) = json(&["verify", "rep", &bad]);
    assert_eq!(c, 1);
    let hom = report["checks"].as_array().unwrap().iter().find(|c| c["check"] == "homomorphism").unwrap();
    assert_eq!(hom["passed"], false);
    assert_eq!(hom["residual"], 1.0);

    let truncated = write(dir.path(), "cut.json", &doc[..doc.len() / 2]);
    assert_eq!(code(&ado4(&["verify", "rep", &truncated])), 2);
    assert_eq!(code(&ado4(&["verify", "rep", "/nonexistent/file.json"])), 2);
}

#[test]
fn verify_lsa_and_affine_documents() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, name, params) in [("lsa", "n3", vec![]), ("lsa", "g8", vec!["--param", "alpha=2"]), ("affine", "r2", vec![])] {
        let mut args = vec!["catalog", "show", name, "--emit", kind];
        args.extend(params);
        let doc = stdout(&ado4(&args));
        let path = write(dir.path(), &format!("{name}.{kind}.json"), &doc);
        let o = ado4(&["verify", kind, &path]);
        assert_eq!(code(&o), 0, "{kind} {name}: {}", stdout(&o));
    }

    // adding e3*e3 = e1 to the n3 product breaks left symmetry
    let doc = stdout(&ado4(&["catalog", "show", "n3", "--emit", "lsa"]));
    let mut v: Value = serde_json::from_str(&doc).unwrap();
    v["products"].as_array_mut().unwrap().push(serde_json::json!({"pair": [3, 3], "value": ["1", "0", "0"]}));
    let bad = write(dir.path(), "bad.lsa.json", &v.to_string());
    let o = ado4(&["verify", "lsa", &bad]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL left_symmetric"), "{}", stdout(&o));
}

#[test]
fn derive_lsa_matches_tables() {
    let (c, v) = json(&["derive", "lsa", "n3"]);
    assert_eq!(c, 0);
    assert_eq!(v["diff"]["erratum"], Value::Null);
    assert_eq!(v["verified"], true);

    let (c, v) = json(&["derive", "lsa", "g8", "--param", "alpha=1/4"]);
    assert_eq!(c, 0);
    assert_eq!(v["diff"]["table"], "table3");
    assert_eq!(v["diff"]["erratum"], Value::Null);

    let o = ado4(&["derive", "lsa", "sl2"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn derive_lsa_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let doc = stdout(&ado4(&["catalog", "show", "r3", "--emit", "rep"]));
    let rep = write(dir.path(), "r3.json", &doc);
    let out = dir.path().join("r3.lsa.json");
    let o = ado4(&["derive", "lsa", "r3", "--rep", &rep, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let o = ado4(&["verify", "lsa", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn derive_reports_rank_when_not_etale() {
    // e12, e23, e13 is faithful for n3 but sends (1,1,1) to a plane
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{"algebra": {"name": "n3", "dim": 3, "brackets": [{"pair": [1, 2], "value": ["0", "0", "1"]}]},
        "dim": 3,
        "images": [[["0","1","0"],["0","0","0"],["0","0","0"]],
                   [["0","0","0"],["0","0","1"],["0","0","0"]],
                   [["0","0","1"],["0","0","0"],["0","0","0"]]]}"#;
    let rep = write(dir.path(), "strict.json", doc);
    assert_eq!(code(&ado4(&["verify", "rep", &rep])), 0);
    let o = ado4(&["derive", "lsa", "n3", "--rep", &rep]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("rank"), "{}", stderr(&o));
}

#[test]
fn mu_certify_and_search() {
    let (c, v) = json(&["mu", "certify", "n4"]);
    assert_eq!(c, 0);
    assert_eq!(v["certificate"]["lower"], 4);
    assert_eq!(v["certificate"]["upper"], 4);
    assert_eq!(v["certificate"]["grade"], "proven");

    // pad the dim-3 witness of r2+C^2 to dim 4 so that the bounds are 3 and 4
    let dir = tempfile::tempdir().unwrap();
    let doc = stdout(&ado4(&["catalog", "show", "r2_c2", "--emit", "rep"]));
    let mut w: Value = serde_json::from_str(&doc).unwrap();
    w["dim"] = 4.into();
    for m in w["images"].as_array_mut().unwrap() {
        let rows = m.as_array_mut().unwrap();
        for r in rows.iter_mut() {
            r.as_array_mut().unwrap().push("0".into());
        }
        rows.push(serde_json::json!(["0", "0", "0", "0"]));
    }
    let witness = write(dir.path(), "w.json", &w.to_string());
    let (c, v) = json(&["mu", "certify", "r2_c2", "--witness", &witness]);
    assert_eq!(c, 0);
    assert_eq!(v["certificate"]["upper"], 4);
    let (c, v) = json(&["mu", "certify", "r2_c2", "--witness", &witness, "--search", "--restarts", "8"]);
    assert_eq!(c, 0);
    assert_eq!(v["certificate"]["upper"], 3);
    assert_eq!(v["search"]["verdict"], "found");

    let (c, v) = json(&["mu", "search", "r2_c2", "--dim", "3", "--restarts", "4", "--seed", "3"]);
    assert_eq!(c, 0);
    assert_eq!(v["search"]["residuals"].as_array().unwrap().len(), 4);

    let o = ado4(&["mu", "search", "sl2", "--dim", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn check_tables_without_search() {
    let (c, v) = json(&["check-tables", "--skip-search"]);
    assert_eq!(c, 0);
    assert_eq!(v["summary"]["consistent"], true);
    assert!(v["searches"].as_array().unwrap().is_empty());
    for name in ["g2(alpha=0,beta=0)", "g8(alpha=1/4)"] {
        let cert = v["certificates"].as_array().unwrap().iter().find(|c| c["algebra"] == name).unwrap();
        assert_eq!(cert["lower"], 3, "{name}");
        assert_eq!(cert["upper"], 4, "{name}");
        assert_eq!(cert["grade"], "unresolved", "{name}");
    }
    let errata = v["errata"].as_array().unwrap();
    assert!(errata.iter().any(|e| e["location"] == "table1:sl2"));

    // the report carries no timestamp, so reruns are byte-identical
    let a = ado4(&["check-tables", "--skip-search"]);
    let b = ado4(&["check-tables", "--skip-search"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn errata_lists_encodings_and_mismatches() {
    let (c, v) = json(&["errata"]);
    assert_eq!(c, 0);
    let kinds: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds.iter().filter(|k| **k == "encoding").count(), 3);
    assert!(kinds.contains(&"product_mismatch"));
}
