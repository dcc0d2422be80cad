use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tits_cr::{Building, BuildingAutoSet, Caps, Field, FixedComplex, MatGroup};
use tits_cr_cli::report::flag_from_json;
use tits_cr_cli::{parse_scenario, run, RunOptions};

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
}

fn tits_cr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tits-cr"))
        .args(args)
        .env_remove("TITS_CR_CAP_ORDER")
        .env_remove("TITS_CR_CAP_SUBSPACES")
        .output()
        .unwrap()
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = tits_cr(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

fn strip_timings(mut v: Value) -> Value {
    match &mut v {
        Value::Object(m) => {
            m.remove("timings");
        }
        Value::Array(items) => items.iter_mut().for_each(|x| {
            x.as_object_mut().unwrap().remove("timings");
        }),
        _ => {}
    }
    v
}

#[test]
fn unipotent_is_not_cr_and_point_like() {
    let path = scenario("unipotent_gl2_f2.scn");
    let (code, v) = report(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(r["verdict"]["cr"], json!(false));
    assert_eq!(
        r["verdict"]["counterexample"],
        json!([{ "dim": 1, "basis": [[1, 0]] }])
    );
    assert_eq!(r["class"]["tag"], json!("PointLike"));
    assert_eq!(v["ok"], json!(true));
}

#[test]
fn torus_is_cr_with_a_circle() {
    let path = scenario("torus_gl3_f3.scn");
    let (code, v) = report(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(r["verdict"]["cr"], json!(true));
    assert_eq!(
        r["class"],
        json!({ "tag": "SphereBouquetLike", "dim": 1, "count": 1 })
    );
    assert_eq!(r["levi_sphere"]["outcome"], json!("found"));
    assert_eq!(r["stable_flags"], json!(12));
}

#[test]
fn every_example_scenario_passes() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut paths: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path().to_str().unwrap().to_string())
        .filter(|p| p.ends_with(".scn"))
        .collect();
    paths.sort();
    let mut args = vec!["analyze"];
    args.extend(paths.iter().map(String::as_str));
    let (code, v) = report(&args);
    assert_eq!(code, 0, "{v}");
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), paths.len());
    for r in reports {
        assert_eq!(r["ok"], json!(true), "{}", r["id"]);
    }
}

#[test]
fn corpus_over_gl2_f3_has_no_mismatches() {
    let path = scenario("corpus_gl2_f3.scn");
    let (code, v) = report(&["corpus", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["subgroups"], json!(55));
    assert_eq!(v["result"]["mismatches"], json!(0));
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 55);
}

#[test]
fn output_is_deterministic_apart_from_timings() {
    let path = scenario("clifford_gl2_f3.scn");
    let torus = scenario("torus_gl3_f3.scn");
    let args = [
        "analyze",
        path.to_str().unwrap(),
        torus.to_str().unwrap(),
        "--seed",
        "7",
    ];
    let a = tits_cr(&args);
    let b = tits_cr(&args);
    let parse = |o: &Output| strip_timings(serde_json::from_slice(&o.stdout).unwrap());
    assert_eq!(parse(&a), parse(&b));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let path = scenario("singer_gl3_f2.scn");
    let (code, stdout) = report(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let o = tits_cr(&[
        "analyze",
        path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.stdout.is_empty());
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(strip_timings(file), strip_timings(stdout));
}

#[test]
fn witness_flags_revalidate_after_parsing() {
    let text = std::fs::read_to_string(scenario("torus_gl3_f3.scn")).unwrap();
    let s = parse_scenario(&text).unwrap();
    let rep = run(&s, &RunOptions::default());
    let v: Value = serde_json::from_str(&serde_json::to_string(&rep.value).unwrap()).unwrap();
    let caps = Caps::default();
    let f3 = Field::new(3, 1).unwrap();
    let b = Building::build(3, &f3, &caps).unwrap();
    let h = MatGroup::closure(&f3, 3, s.generators.clone(), &caps).unwrap();
    let fc = FixedComplex::new(&b, &BuildingAutoSet::from_group(&h)).unwrap();
    let witnesses = v["result"]["verdict"]["witnesses"].as_array().unwrap();
    assert!(!witnesses.is_empty());
    for pair in witnesses {
        let f = flag_from_json(&f3, 3, &pair[0]).unwrap();
        let g = flag_from_json(&f3, 3, &pair[1]).unwrap();
        assert!(fc.stable().contains(&f) && fc.stable().contains(&g));
        assert!(tits_cr::building::opposite(&f3, &f, &g));
    }
}

#[test]
fn caps_from_flag_env_and_scenario() {
    let path = scenario("torus_gl3_f3.scn");
    let p = path.to_str().unwrap();
    // the oracle on F3^3 scans 28 subspaces
    let (code, v) = report(&["analyze", p, "--cap-subspaces", "5"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("exceeds the cap"));

    let env = Command::new(env!("CARGO_BIN_EXE_tits-cr"))
        .args(["analyze", p])
        .env("TITS_CR_CAP_SUBSPACES", "5")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));

    let flag_wins = Command::new(env!("CARGO_BIN_EXE_tits-cr"))
        .args(["analyze", p, "--cap-subspaces", "100"])
        .env("TITS_CR_CAP_SUBSPACES", "5")
        .output()
        .unwrap();
    assert_eq!(flag_wins.status.code(), Some(0));

    let (code, _) = report(&["analyze", p, "--cap-order", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn parse_errors_exit_with_2_and_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.scn");
    std::fs::write(
        &bad,
        "id = bad\nn = 2\np = 2\nanalysis = cr\ngen = [[1, 1], [1, 1]]\n",
    )
    .unwrap();
    let out = tits_cr(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 5"), "{err}");
}

#[test]
fn missing_file_is_an_error() {
    let out = tits_cr(&["analyze", "/nonexistent/scenario.scn"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_match_the_documented_schema() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    for entry in std::fs::read_dir(dir).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        let rep = run(&parse_scenario(&text).unwrap(), &RunOptions::default());
        let errors: Vec<String> = validator
            .iter_errors(&rep.value)
            .map(|e| e.to_string())
            .collect();
        assert!(errors.is_empty(), "{}: {errors:?}", rep.id);
    }
}
