use std::path::Path;
use std::process::{Command, Output};

fn rearrange(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rearrange"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn sample(dir: &Path, expr: &str, h: &str) -> std::path::PathBuf {
    let f = dir.join("u.rgrid");
    let o = rearrange(&["sample", "--expr", expr, "--h", h, "--output", s(&f)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    f
}

#[test]
fn symmetrize_writes_profile_grid_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let u = sample(dir.path(), "x1 * (1 - x2)", "0.0625");
    let out = dir.path().join("out");
    let o = rearrange(&["symmetrize", "--input", s(&u), "--out", s(&out), "--emit-plots"]);
    assert!(o.status.success());
    for f in ["u_star.rprof", "u_tilde.rgrid", "summary.txt", "u_star.csv"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let summary = std::fs::read_to_string(out.join("summary.txt")).unwrap();
    let get = |k: &str| -> f64 {
        summary
            .lines()
            .find_map(|l| l.strip_prefix(&format!("{k}=")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(get("measure"), 1.0);
    assert!((get("l2") - get("l2_star")).abs() < 1e-12);
}

#[test]
fn verify_writes_a_report_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let u = sample(dir.path(), "cos(pi*x1)", "0.03125");
    let o = rearrange(&["verify", "--input", s(&u), "--thm", "2.1", "--eps", "0.1", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("thm2.1.rreport")).unwrap();
    assert!(text.contains("verdict=holds"), "{text}");
}

#[test]
fn orlicz_local_takes_a_descriptor() {
    let dir = tempfile::tempdir().unwrap();
    let u = sample(dir.path(), "cos(pi*x1)", "0.015625");
    let o = rearrange(&[
        "verify", "--input", s(&u), "--thm", "orlicz-local", "--nfunc", "tag=p-log p=1", "--eps", "0.1", "--out",
        s(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("orlicz.local holds"));
}

#[test]
fn constants_with_case_certify_gamma() {
    let dir = tempfile::tempdir().unwrap();
    let u = sample(dir.path(), "x1", "0.0625");
    let o = rearrange(&["constants", "--input", s(&u), "--case", "ii", "--out", s(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("constants.rconst")).unwrap();
    assert!(text.starts_with("RCONST v1"));
    assert!(text.contains("case=ii"));
}

#[test]
fn counterexample_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = rearrange(&["counterexample", "--n", "2", "--out", s(dir.path())]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("counterexample_n2.csv")).unwrap();
    assert!(csv.lines().count() > 10);
}

#[test]
fn errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.rgrid");
    let o = rearrange(&["verify", "--input", s(&missing), "--thm", "1.1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("does not exist"));

    let u = sample(dir.path(), "x1", "0.0625");
    let o = rearrange(&["verify", "--input", s(&u), "--thm", "9.9", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    let o = rearrange(&["verify", "--input", s(&u), "--thm", "2.1", "--eps", "1.5", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn thread_count_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_rearrange"))
        .args(["counterexample", "--n", "1"])
        .env("REARRANGE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
