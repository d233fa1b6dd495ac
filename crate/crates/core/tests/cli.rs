use std::path::Path;
use std::process::Command;

use ruinkit::{ClaimDistribution, Method, RiskModel};

const BIN: &str = env!("CARGO_BIN_EXE_ruinkit");
const CONFIGS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/configs");

fn ruinkit(args: &[&str]) -> Command {
    let mut c = Command::new(BIN);
    c.args(args).env_remove("RUINKIT_SEED");
    c
}

fn config(name: &str) -> String {
    format!("{CONFIGS}/{name}.toml")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn approx_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g1.csv");
    let st = ruinkit(&["approx", "--config", &config("gamma1"), "--out", out.to_str().unwrap(), "--format", "csv"])
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let raw = std::fs::read_to_string(&out).unwrap();
    assert!(raw.contains("\r\n"));
    let (header, rows) = read_csv(&out);
    assert_eq!(&header[..5], ["x", "renyi", "devylder", "ramsay", "two_point"]);
    assert_eq!(rows.len(), 11);

    let m = RiskModel::with_loading(1.0, 0.1, 0.0, ClaimDistribution::gamma(0.01, 100.0).unwrap()).unwrap();
    let fits: Vec<_> = [Method::Renyi, Method::DeVylder, Method::RamsayPade12, Method::TwoPointRamsay]
        .iter()
        .map(|f| f.run(&m).unwrap())
        .collect();
    for row in rows {
        let x: f64 = row[0].parse().unwrap();
        for (j, f) in fits.iter().enumerate() {
            let v: f64 = row[j + 1].parse().unwrap();
            assert!((v / f.psi(x) - 1.0).abs() < 1e-8, "x={x} col {j}: {v}");
        }
    }
}

#[test]
fn set_overrides_and_stdout() {
    let o = ruinkit(&["exact", "--config", &config("mixed_exp"), "--set", "grid.count=3", "--set", "grid.max=2"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<_> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(&rows[2][0], "2");
}

#[test]
fn exit_codes() {
    // σ = 0 with perturbed methods is a configuration error
    let o = ruinkit(&["perturbed", "--config", &config("mixed_exp")]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());

    // a method lacking the third moment leaves its column empty
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("two.toml");
    std::fs::write(
        &cfg,
        "methods = [\"renyi\", \"ramsay\"]\n[model]\nlambda = 1.0\ntheta = 0.2\n[claims]\ntype = \"moments\"\nmoments = [1.0, 2.5]\n[grid]\nmin = 0.0\nmax = 5.0\ncount = 6\n",
    )
    .unwrap();
    let out = dir.path().join("o.csv");
    let st = ruinkit(&["approx", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(2));
    let (_, rows) = read_csv(&out);
    assert!(rows.iter().all(|r| !r[1].is_empty() && r[2].is_empty()));

    let o = ruinkit(&["approx", "--config", "/nonexistent.toml"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn seed_comes_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: Option<&str>, extra: &[&str], name: &str| {
        let out = dir.path().join(name);
        let cfg = config("mixed_exp");
        let mut args = vec!["exact", "--config", &cfg];
        args.extend(["--set", "oracle.kind=\"mc\"", "--set", "oracle.n=10000", "--set", "grid.count=4"]);
        args.extend(extra);
        args.extend(["--out", out.to_str().unwrap()]);
        let mut c = ruinkit(&args);
        if let Some(s) = seed {
            c.env("RUINKIT_SEED", s);
        }
        assert_eq!(c.status().unwrap().code(), Some(0));
        std::fs::read_to_string(out).unwrap()
    };
    let a = run(Some("11"), &[], "a.csv");
    let b = run(Some("11"), &[], "b.csv");
    let c = run(Some("12"), &[], "c.csv");
    let d = run(Some("12"), &["--set", "oracle.seed=11"], "d.csv");
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a, d);

    let out = dir.path().join("bad.csv");
    let st = ruinkit(&["exact", "--config", &config("mixed_exp"), "--set", "oracle.kind=\"mc\"", "--out", out.to_str().unwrap()])
        .env("RUINKIT_SEED", "abc")
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&st.stderr).contains("RUINKIT_SEED"));
}

#[test]
fn every_subcommand_runs_on_its_config() {
    for (cmd, cfg) in [
        ("approx", "gamma2"),
        ("perturbed", "mixed_exp_perturbed"),
        ("jt", "uniform"),
        ("moments", "gamma1"),
        ("check", "harris"),
    ] {
        let o = ruinkit(&[cmd, "--config", &config(cfg)]).output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stdout.is_empty());
    }
}
