use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mww_cli::io::read_panel;
use mww_core::harness::MCReport;
use mww_core::lrd::{simulate_arfima, ArfimaSpec, LongRunCov, MemoryParams};
use mww_core::mww::{estimate_panel, EstimationConfig};
use mww_core::wavelet::WaveletSpec;
use serde_json::Value;

fn mww(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mww"))
        .args(args)
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn simulate_to(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut args = vec![
        "simulate", "--d", "0.2,0.3", "--rho", "0.4", "--N", "512", "--seed", "11",
    ];
    args.extend_from_slice(extra);
    args.extend_from_slice(&["--output", s(&path)]);
    let out = mww(&args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    path
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn simulate_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let path = simulate_to(dir.path(), "x.csv", &[]);
    let file = read_panel(&path).unwrap();
    let spec = ArfimaSpec::new(
        MemoryParams::new(vec![0.2, 0.3]).unwrap(),
        LongRunCov::bivariate(0.4).unwrap(),
        512,
        11,
    )
    .with_moment_bound(4);
    assert_eq!(file.panel, simulate_arfima(&spec).unwrap());
    assert_eq!(file.names, ["x1", "x2"]);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# config = {"));
}

#[test]
fn estimate_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let path = simulate_to(dir.path(), "x.csv", &[]);
    let out = mww(&["estimate", "--input", s(&path), "--j1", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("warning"), "{stderr}");
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();

    let panel = read_panel(&path).unwrap().panel;
    let cfg = EstimationConfig::default().with_scales(1, Some(9));
    let est = estimate_panel(&panel, &WaveletSpec::daubechies(4).unwrap(), &cfg).unwrap();
    for l in 0..2 {
        assert_eq!(json["d"][l].as_f64().unwrap(), est.d.0[l]);
        for m in 0..2 {
            assert_eq!(json["omega"][l][m].as_f64().unwrap(), est.omega[(l, m)]);
        }
    }
    assert_eq!(json["config"]["scales"]["j1"], 6);
    assert_eq!(json["config"]["scales"]["requested_j1"], 9);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = simulate_to(dir.path(), "a.csv", &[]);
    let first = std::fs::read(&a).unwrap();
    simulate_to(dir.path(), "a.csv", &[]);
    assert_eq!(first, std::fs::read(&a).unwrap());

    let e1 = mww(&["estimate", "--input", s(&a), "--format", "csv"]);
    let e2 = mww(&["estimate", "--input", s(&a), "--format", "csv"]);
    assert_eq!(e1.stdout, e2.stdout);
    assert!(!e1.stdout.is_empty());

    let scen = write(
        dir.path(),
        "s.cfg",
        "name = \"t\"\nd = [0.2, 0.2]\nrho = 0.4\nN = 256\nreps = 12\nseed = 3\n",
    );
    let p1 = dir.path().join("r1");
    let p2 = dir.path().join("r2");
    assert_eq!(
        mww(&["mc", "--scenario", s(&scen), "--output", s(&p1)])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        mww(&["mc", "--scenario", s(&scen), "--output", s(&p2)])
            .status
            .code(),
        Some(0)
    );
    for ext in ["json", "csv"] {
        let x = std::fs::read(p1.with_extension(ext)).unwrap();
        let y = std::fs::read(p2.with_extension(ext)).unwrap();
        assert_eq!(x, y, "{ext}");
    }
    let report =
        MCReport::from_json(&std::fs::read_to_string(p1.with_extension("json")).unwrap()).unwrap();
    assert_eq!(report.replications, 12);
}

#[test]
fn single_replication_std_column_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let scen = write(dir.path(), "s.cfg", "d = [0.2, 0.2]\nrho = 0.4\nN = 256\n");
    let out = mww(&[
        "mc",
        "--scenario",
        s(&scen),
        "--reps",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let std_col = rdr
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == "std")
        .unwrap();
    let mut rows = 0;
    for rec in rdr.records() {
        assert_eq!(rec.unwrap()[std_col].parse::<f64>().unwrap(), 0.0);
        rows += 1;
    }
    assert_eq!(rows, 6);
}

#[test]
fn auxiliary_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let x = simulate_to(dir.path(), "x.csv", &[]);
    let hist = dir.path().join("h.txt");
    let grid = dir.path().join("g.csv");
    let out = mww(&[
        "estimate",
        "--input",
        s(&x),
        "--histogram",
        s(&hist),
        "--bins",
        "3",
        "--correlation-grid",
        s(&grid),
        "--output",
        s(&dir.path().join("e.json")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let h = std::fs::read_to_string(hist).unwrap();
    assert_eq!(h.lines().filter(|l| !l.starts_with('#')).count(), 4);
    let g = std::fs::read_to_string(grid).unwrap();
    assert!(g.contains("row,col,value\n0,0,1\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let x = simulate_to(dir.path(), "x.csv", &[]);
    let code = |args: &[&str]| mww(args).status.code().unwrap();

    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["estimate"]), 2);
    assert_eq!(
        code(&["estimate", "--input", s(&dir.path().join("missing.csv"))]),
        2
    );
    let empty = write(dir.path(), "empty.csv", "");
    assert_eq!(code(&["estimate", "--input", s(&empty)]), 2);
    let bad = write(dir.path(), "bad.csv", "a,b\n1,2\n3,oops\n");
    let out = mww(&["estimate", "--input", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3, column 2"));
    let gap = write(dir.path(), "gap.csv", "a,b\n1,2\n3,\n");
    assert_eq!(code(&["estimate", "--input", s(&gap)]), 2);
    assert_eq!(code(&["estimate", "--input", s(&x), "--M", "11"]), 2);
    assert_eq!(code(&["estimate", "--input", s(&x), "--j0", "6"]), 3);
    let short = write(dir.path(), "short.csv", "a\n1\n2\n3\n");
    assert_eq!(code(&["estimate", "--input", s(&short)]), 3);

    assert_eq!(
        code(&["simulate", "--d", "0.2,0.2", "--rho", "1.5", "--N", "64"]),
        4
    );
    let om = write(dir.path(), "om.txt", "1, 2\n2, 1\n");
    assert_eq!(
        code(&[
            "simulate",
            "--d",
            "0.2,0.2",
            "--omega-file",
            s(&om),
            "--N",
            "64"
        ]),
        4
    );
    assert_eq!(code(&["simulate", "--d", "4.5", "--N", "64"]), 2);
    assert_eq!(code(&["simulate", "--d", "-0.2", "--N", "64"]), 0);

    let unknown = write(dir.path(), "u.cfg", "d = [0.2]\nN = 256\ncolour = 1\n");
    assert_eq!(code(&["mc", "--scenario", s(&unknown)]), 2);
}
