//! End-to-end runs of the `ckh` binary plus the CSV writer.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ck_holmgren::cli::{emit_csv, Table, EXIT_CONFIG, EXIT_PASS, EXIT_TOLERANCE, SEED_ENV};
use ck_holmgren::series::{series_from_json, MonomialSeries, MultiIndex};
use num::{BigInt, BigRational};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn ckh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ckh")).args(args).env_remove(SEED_ENV).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad report ({e}): {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn strip_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time_s");
    v
}

#[test]
fn exit_codes() {
    assert_eq!(ckh(&["zeta", "--s", "3"]).status.code(), Some(EXIT_PASS));
    assert_eq!(ckh(&["zeta", "--s", "0.5"]).status.code(), Some(EXIT_CONFIG));
    assert_eq!(ckh(&["zeta", "--bogus"]).status.code(), Some(EXIT_CONFIG));
    assert_eq!(ckh(&["solve", "--problem", "/nonexistent.json"]).status.code(), Some(EXIT_CONFIG));
    // two primes cannot reach 1e-9
    assert_eq!(ckh(&["zeta", "--s", "3", "--primes", "2", "--tol", "1e-9"]).status.code(), Some(EXIT_TOLERANCE));
    assert_eq!(ckh(&["--help"]).status.code(), Some(0));
}

#[test]
fn report_shape_and_seed() {
    let out = ckh(&["divergence-check", "--dim", "1", "--quadrature"]);
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    let r = report(&out);
    for key in ["op", "inputs", "seed", "rng", "n", "samples", "lhs", "rhs", "residual", "stderr", "pass", "version"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["op"], "divergence-check");
    assert_eq!(r["seed"], 42);
    assert_eq!(r["pass"], true);

    let env = Command::new(env!("CARGO_BIN_EXE_ckh"))
        .args(["zeta", "--s", "3"])
        .env(SEED_ENV, "7")
        .output()
        .unwrap();
    assert_eq!(report(&env)["seed"], 7);
    assert_eq!(report(&ckh(&["--seed", "9", "zeta"]))["seed"], 9);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"s": 4, "primes": 50, "tol": 1e-5}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = report(&ckh(&["--config", c, "zeta"]));
    assert_eq!(from_file["inputs"]["command"]["s"], 4.0);
    assert_eq!(from_file["inputs"]["command"]["primes"], 50);
    let overridden = report(&ckh(&["--config", c, "zeta", "--s", "3"]));
    assert_eq!(overridden["inputs"]["command"]["s"], 3.0);
    assert_eq!(overridden["inputs"]["command"]["primes"], 50);

    std::fs::write(&cfg, r#"{"s": {"nested": 1}}"#).unwrap();
    assert_eq!(ckh(&["--config", c, "zeta"]).status.code(), Some(EXIT_CONFIG));
}

#[test]
fn monte_carlo_runs_are_deterministic() {
    let args = ["divergence-check", "--dim", "2", "--samples", "20000", "--seed", "5"];
    let a = strip_timing(report(&ckh(&args)));
    let b = strip_timing(report(&ckh(&args)));
    assert_eq!(a, b);
    let c = strip_timing(report(&ckh(&["divergence-check", "--dim", "2", "--samples", "20000", "--seed", "6"])));
    assert_ne!(a["lhs"], c["lhs"]);
}

#[test]
fn report_file_and_csv_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.json");
    let csv_path = dir.path().join("z.csv");
    let out = ckh(&["--report", rep.to_str().unwrap(), "--csv", csv_path.to_str().unwrap(), "zeta", "--s", "3"]);
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(r["op"], "zeta");

    let mut rd = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), ["degree", "partial_sum"]);
    let sums: Vec<f64> = rd.records().map(|rec| rec.unwrap()[1].parse().unwrap()).collect();
    assert!(sums.len() > 2);
    assert!(sums.windows(2).all(|w| w[1] >= w[0]));
    assert!((sums.last().unwrap() - r["lhs"].as_f64().unwrap()).abs() < 1e-12);
}

fn read_lines(p: &Path) -> Vec<String> {
    std::fs::read_to_string(p).unwrap().lines().map(str::to_owned).collect()
}

#[test]
fn emit_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.csv");
    let mut t = Table::new(["a", "b"]);
    t.push(vec![1.0, 0.1]);
    t.push(vec![2.0, 1e-300]);
    emit_csv(&t, &p).unwrap();
    let lines = read_lines(&p);
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "a,b");
    let back: Vec<f64> = lines[2].split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(back, [2.0, 1e-300]);

    emit_csv(&Table::new(["only"]), &p).unwrap();
    assert_eq!(read_lines(&p), ["only"]);

    let mut ragged = Table::new(["a", "b"]);
    ragged.push(vec![1.0]);
    assert!(emit_csv(&ragged, &p).is_err());
}

#[test]
fn rational_solve_writes_reciprocal_factorials() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("u.json");
    let out = ckh(&[
        "solve", "--problem", data("exp.json").to_str().unwrap(), "--mode", "rational", "--degree", "6", "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    assert_eq!(report(&out)["residual"], 0.0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let s: MonomialSeries<BigRational> = series_from_json(&v).unwrap();
    let mut fact = BigInt::from(1);
    for k in 0..=6u32 {
        if k > 0 {
            fact *= BigInt::from(k);
        }
        let want = BigRational::new(BigInt::from(1), fact.clone());
        assert_eq!(s.coeff(&MultiIndex::var_pow(0, k)), want, "t^{k}");
    }
}

#[test]
fn every_subcommand_runs() {
    let p = |n: &str| data(n).to_str().unwrap().to_owned();
    let runs: Vec<Vec<String>> = vec![
        vec!["radius".into(), "--problem".into(), p("linear_a1.json")],
        vec!["topology-check".into(), "--trials".into(), "50".into()],
        vec!["weights".into(), "--problem".into(), p("linear_a1.json")],
        vec!["green-check".into(), "--quadrature".into()],
        vec!["holmgren-demo".into(), "--problem".into(), p("zero_data.json"), "--max-moment".into(), "1".into(), "--quadrature".into()],
        vec!["solve".into(), "--problem".into(), p("transport.json"), "--mode".into(), "rational".into()],
        vec!["solve".into(), "--problem".into(), p("x_dx.json")],
    ];
    for args in runs {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = ckh(&a);
        assert_eq!(out.status.code(), Some(EXIT_PASS), "{a:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(report(&out)["pass"], true);
    }
}
