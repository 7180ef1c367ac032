use std::path::PathBuf;
use std::process::{Command, Output};

use sectpos_cli::{parse_operator, OperatorFile, ReportFile};
use sectpos_core::curvature::{diagonal_ints, product_spheres};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sectpos"));
    c.env_remove("SECTPOS_SEED");
    c
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sectpos-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_fixture(name: &str, file: &OperatorFile) -> PathBuf {
    let path = scratch(name);
    std::fs::write(&path, file.to_json()).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn report(out: &Output) -> ReportFile {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn gen(args: &[&str], name: &str) -> PathBuf {
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = scratch(name);
    std::fs::write(&path, &out.stdout).unwrap();
    path
}

#[test]
fn analyze_diagonal_is_positive() {
    let path = gen(&["diagonal", "1", "2", "3", "4", "5", "6"], "diag.json");
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rep = report(&out);
    let a = rep.analysis.unwrap();
    assert_eq!(serde_json::to_value(a.verdict).unwrap(), "POSITIVE");
    let b = a.bounds.unwrap();
    assert_eq!((b.lower.lower.as_str(), b.upper.upper.as_str()), ("1/1", "6/1"));
    assert!(rep.oracle.is_none());
}

#[test]
fn analyze_negative_entry_exits_one() {
    let path = gen(&["diagonal", "-1", "2", "3", "4", "5", "6"], "neg.json");
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn identity_falls_back_with_oracle() {
    let path = gen(&["constant", "1"], "id.json");
    let out = run(&["analyze", path.to_str().unwrap(), "--restarts", "20"]);
    assert_eq!(out.status.code(), Some(2));
    let rep = report(&out);
    let a = rep.analysis.unwrap();
    assert!(a.q_is_identically_zero);
    assert_eq!(a.certified_verdict, None);
    let o = rep.oracle.unwrap().numeric;
    assert!((o.min_value - 1.0).abs() < 1e-9 && (o.max_value - 1.0).abs() < 1e-9);
    assert!((rep.witness.unwrap().numeric.alpha1 - 1.0).abs() < 1e-9);
}

#[test]
fn perturbation_is_labelled_heuristic() {
    let path = gen(&["constant", "1"], "idp.json");
    let out = run(&["analyze", path.to_str().unwrap(), "--restarts", "5", "--perturb", "1/1000"]);
    assert_eq!(out.status.code(), Some(2));
    let p = report(&out).analysis.unwrap().perturbation.unwrap();
    assert!(p.heuristic);
    assert_eq!(p.epsilon, "1/1000");
    assert!(!p.analysis.q_is_identically_zero);
}

#[test]
fn oracle_and_witness_on_product_spheres() {
    let path = write_fixture("ps.json", &OperatorFile::from_operator(&product_spheres()));
    let out = run(&["oracle", path.to_str().unwrap(), "--restarts", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let o = report(&out).oracle.unwrap().numeric;
    assert!(o.min_value.abs() < 1e-9 && (o.max_value - 1.0).abs() < 1e-9);

    let out = run(&["witness", path.to_str().unwrap()]);
    let w = report(&out).witness.unwrap();
    assert!(w.numeric.y1.abs() < 1e-9 && w.numeric.alpha1.abs() < 1e-9);
    assert!(!w.strongly_positive);
}

#[test]
fn witness_on_identity() {
    let path = gen(&["constant", "1"], "idw.json");
    let w = report(&run(&["witness", path.to_str().unwrap()])).witness.unwrap();
    assert!((w.numeric.alpha1 - 1.0).abs() < 1e-9);
}

#[test]
fn gen_is_deterministic() {
    let a = run(&["gen", "random", "--seed", "7", "--bound", "5"]);
    let b = run(&["gen", "random", "--seed", "7", "--bound", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = bin().args(["gen", "random", "--bound", "5"]).env("SECTPOS_SEED", "7").output().unwrap();
    assert_eq!(a.stdout, c.stdout);
    let r = parse_operator(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    assert!(r.entries().iter().flatten().all(|v| v.numer().to_string().parse::<i64>().unwrap().abs() <= 5));
}

#[test]
fn gen_fixtures_parse_back() {
    let out = run(&["gen", "diagonal", "1", "2", "3", "4", "5", "6"]);
    let r = parse_operator(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(r, diagonal_ints([1, 2, 3, 4, 5, 6]));
    let out = run(&["gen", "constant", "1"]);
    let f: OperatorFile = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(f.matrix[0][0], "1/1");
    assert_eq!(f.matrix[0][1], "0/1");
}

#[test]
fn reports_are_deterministic_minus_timings() {
    let path = gen(&["random", "--seed", "3"], "r3.json");
    let args = ["analyze", path.to_str().unwrap(), "--oracle", "--witness", "--restarts", "20", "--seed", "9"];
    let mut a = report(&run(&args));
    let mut b = report(&run(&args));
    let mut c = report(&bin().args(args).arg("--sequential").output().unwrap());
    for r in [&mut a, &mut b, &mut c] {
        r.timings.clear();
    }
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_json(), c.to_json());
    assert_eq!(a.seed, 9);
    assert_eq!(a.input_sha256.len(), 64);
}

#[test]
fn report_round_trips() {
    let path = gen(&["random", "--seed", "5"], "r5.json");
    let out = run(&["analyze", path.to_str().unwrap(), "--oracle", "--witness", "--restarts", "10"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rep: ReportFile = serde_json::from_str(&text).unwrap();
    assert_eq!(rep.to_json(), text);
}

#[test]
fn input_errors_exit_three() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["analyze", bad.to_str().unwrap()]).status.code(), Some(3));

    let mut f = OperatorFile::from_operator(&diagonal_ints([1, 2, 3, 4, 5, 6]));
    f.matrix[0][1] = "1/2".into();
    let asym = write_fixture("asym.json", &f);
    let out = run(&["analyze", asym.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("symmetric"));

    let mut f = OperatorFile::from_operator(&diagonal_ints([1, 2, 3, 4, 5, 6]));
    f.dim = 5;
    assert_eq!(run(&["analyze", write_fixture("dim.json", &f).to_str().unwrap()]).status.code(), Some(3));

    let mut f = OperatorFile::from_operator(&diagonal_ints([1, 2, 3, 4, 5, 6]));
    f.basis = "e12,e13,e14,e23,e34,e24".into();
    assert_eq!(run(&["analyze", write_fixture("basis.json", &f).to_str().unwrap()]).status.code(), Some(3));

    let mut f = OperatorFile::from_operator(&diagonal_ints([1, 2, 3, 4, 5, 6]));
    f.matrix[2][2] = "1/0".into();
    assert_eq!(run(&["analyze", write_fixture("zero.json", &f).to_str().unwrap()]).status.code(), Some(3));

    assert_eq!(run(&["gen", "torus"]).status.code(), Some(3));
    assert_eq!(run(&["analyze", "/nonexistent/operator.json"]).status.code(), Some(3));
}
