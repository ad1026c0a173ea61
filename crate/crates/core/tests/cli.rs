use std::path::PathBuf;
use std::process::{Command, Output};

use nefcone::json::{parse_cone, parse_report, parse_semigroup, parse_verdict, ReportSummary};
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn nefcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nefcone"))
        .args(args)
        .env_remove("NEFCONE_MAX_BOX")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, Vec<u8>) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = nefcone(&full);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    (
        serde_json::from_slice(&out.stdout).expect("one JSON document"),
        out.stdout,
    )
}

#[test]
fn decide_on_self_product() {
    let exe = data("exe.json");
    let (v, _) = json(&["decide", "--variety", &exe]);
    assert_eq!(v["polyhedral"], Value::Bool(false));
    assert_eq!(v["witness"], "prop3");
    let verdict = parse_verdict(&v).unwrap();
    assert!(!verdict.polyhedral);
}

#[test]
fn nef_of_reference() {
    let (v, _) = json(&[
        "nef",
        "--variety",
        &data("exe.json"),
        "--class",
        &data("id.json"),
    ]);
    assert_eq!(v["nef"], Value::Bool(true));
    let text = nefcone(&[
        "nef",
        "--variety",
        &data("exe.json"),
        "--class",
        &data("id.json"),
    ]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("true"));
}

#[test]
fn family_member_report() {
    let (v, _) = json(&["bm", "--variety", &data("e.json"), "--m", "2"]);
    assert_eq!(v["charpoly"], serde_json::json!([0, -5, 1]));
    match parse_report(&v).unwrap() {
        ReportSummary::Family { m, divergence, .. } => {
            assert_eq!(m, 2);
            assert_eq!(divergence, (-5).into());
        }
        other => panic!("unexpected report {other:?}"),
    }
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        vec!["decide", "--variety", &data("exe.json")],
        vec![
            "nef",
            "--variety",
            &data("exe.json"),
            "--class",
            &data("id.json"),
        ],
        vec!["bm", "--variety", &data("e.json"), "--m", "2"],
        vec![
            "refute-slope",
            "--variety",
            &data("surface.json"),
            "--l1",
            &data("l1.json"),
            "--l2",
            &data("l2.json"),
            "--candidates",
            &data("slope_candidates.json"),
        ],
        vec![
            "transfer",
            "--semigroup",
            &data("orthant.json"),
            "--sublattice",
            &data("even.json"),
        ],
    ] {
        let (_, a) = json(&args);
        let (_, b) = json(&args);
        assert_eq!(a, b);
        let (ta, tb) = (nefcone(&args), nefcone(&args));
        assert_eq!(ta.stdout, tb.stdout);
        assert_eq!(ta.status.code(), tb.status.code());
    }
}

#[test]
fn emitted_documents_reparse() {
    let (v, _) = json(&["hilbert", "--cone", &data("cone.json")]);
    let s = parse_semigroup(&v).unwrap();
    assert_eq!(s.elements().len(), 4);
    let (v, _) = json(&["dual", "--cone", &data("cone_dual_example.json")]);
    let c = parse_cone(&v).unwrap();
    assert_eq!(c.rays(), &[vec![1, 0], vec![1, 2]]);
    let (v, _) = json(&[
        "transfer",
        "--semigroup",
        &data("orthant.json"),
        "--sublattice",
        &data("even.json"),
    ]);
    assert_eq!(
        parse_semigroup(&v).unwrap().elements(),
        &[vec![0, 2], vec![1, 1], vec![2, 0]]
    );
    let (v, _) = json(&[
        "refute-slope",
        "--variety",
        &data("surface.json"),
        "--l1",
        &data("l1.json"),
        "--l2",
        &data("l2.json"),
        "--candidates",
        &data("slope_candidates.json"),
    ]);
    match parse_report(&v).unwrap() {
        ReportSummary::Slope { approx, q, .. } => {
            assert_eq!(approx, (15.into(), 4.into()));
            assert_eq!(q.map(|q| q.to_string()), Some("4".to_string()));
        }
        other => panic!("unexpected report {other:?}"),
    }
    let (v, _) = json(&["decide", "--variety", &data("e1e2.json")]);
    let verdict = parse_verdict(&v).unwrap();
    assert!(verdict.polyhedral);
    let (v, _) = json(&["decide", "--variety", &data("surface.json"), "--witness"]);
    assert!(!parse_verdict(&v).unwrap().polyhedral);
    assert!(parse_report(&v["report"]).is_ok());
}

#[test]
fn exit_codes() {
    let missing = nefcone(&["rank", "--variety", "/nonexistent/x.json"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(!missing.stderr.is_empty());
    let bad_verb = nefcone(&["frobnicate"]);
    assert_eq!(bad_verb.status.code(), Some(1));
    let mismatched = nefcone(&[
        "nef",
        "--variety",
        &data("exe.json"),
        "--class",
        &data("l1.json"),
    ]);
    assert_eq!(mismatched.status.code(), Some(1));
    // B_m needs a rank-one base: a computation error
    let domain = nefcone(&["bm", "--variety", &data("exe.json"), "--m", "2"]);
    assert_eq!(domain.status.code(), Some(2));
    let below = nefcone(&[
        "refute-slope",
        "--variety",
        &data("surface.json"),
        "--l1",
        &data("l1.json"),
        "--l2",
        &data("l2.json"),
        "--candidates",
        &data("bm_candidates.json"),
    ]);
    assert_eq!(below.status.code(), Some(1));
    let not_nef = nefcone(&[
        "nef",
        "--variety",
        &data("exe.json"),
        "--class",
        &data("not_nef.json"),
    ]);
    assert_eq!(not_nef.status.code(), Some(0));
}

#[test]
fn report_goes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.to_string_lossy().into_owned();
    let out = nefcone(&[
        "--json",
        "--out",
        &p,
        "decide",
        "--variety",
        &data("exe.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let (_, direct) = json(&["decide", "--variety", &data("exe.json")]);
    assert_eq!(std::fs::read(&path).unwrap(), direct);
    let bad = nefcone(&[
        "--out",
        "/nonexistent/dir/r.txt",
        "rank",
        "--variety",
        &data("exe.json"),
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn verification_box_from_environment() {
    let run = |val: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_nefcone"));
        c.args(["--json", "hilbert", "--cone", &data("cone.json")]);
        match val {
            Some(v) => c.env("NEFCONE_MAX_BOX", v),
            None => c.env_remove("NEFCONE_MAX_BOX"),
        };
        c.output().unwrap()
    };
    let default: Value = serde_json::from_slice(&run(None).stdout).unwrap();
    assert_eq!(default["verified_box"], 10);
    let wider: Value = serde_json::from_slice(&run(Some("15")).stdout).unwrap();
    assert_eq!(wider["verified_box"], 15);
    assert_eq!(run(Some("abc")).status.code(), Some(1));
    assert_eq!(run(Some("-3")).status.code(), Some(1));
}

#[test]
fn text_mode_prints_checklist() {
    let out = nefcone(&["bm", "--variety", &data("e.json"), "--m", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[x]"));
    assert!(!text.contains("[ ]"));
}

#[test]
fn remaining_verbs_run() {
    for args in [
        vec!["rank", "--variety", &data("exe_cm.json")],
        vec![
            "charpoly",
            "--variety",
            &data("exe.json"),
            "--class",
            &data("ample_2111.json"),
        ],
        vec![
            "ample",
            "--variety",
            &data("exe.json"),
            "--class",
            &data("ample_2111.json"),
        ],
        vec![
            "intersect",
            "--variety",
            &data("exe.json"),
            "--class",
            &data("id.json"),
            "--class",
            &data("ample_2111.json"),
        ],
        vec![
            "slope",
            "--variety",
            &data("surface.json"),
            "--l1",
            &data("l1.json"),
            "--l2",
            &data("l2.json"),
        ],
        vec![
            "refute-bm",
            "--variety",
            &data("e.json"),
            "--candidates",
            &data("bm_candidates.json"),
        ],
        vec!["decide", "--variety", &data("surface.json"), "--witness"],
        vec![
            "decide",
            "--variety",
            &data("exe_cm.json"),
            "--witness",
            "--m",
            "4",
        ],
        vec!["dual", "--cone", &data("cone.json")],
    ] {
        let (v, _) = json(&args);
        assert!(v.is_object(), "{args:?}");
    }
    let (v, _) = json(&[
        "refute-bm",
        "--variety",
        &data("e.json"),
        "--candidates",
        &data("bm_candidates.json"),
    ]);
    assert_eq!(v["c"], 9);
    assert_eq!(v["m"], 5);
    let (v, _) = json(&["rank", "--variety", &data("exe_cm.json")]);
    assert_eq!(v["rank"], 4);
}
