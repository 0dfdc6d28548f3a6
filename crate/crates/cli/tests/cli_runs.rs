use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dwell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dwell")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn out_arg(dir: &Path) -> String {
    dir.to_string_lossy().into_owned()
}

#[test]
fn eigen_subcommand_writes_table_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = dwell(&["eigen", "--out", &out_arg(dir.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("eigen.csv")).unwrap();
    let first = csv.lines().nth(1).unwrap();
    assert!(first.starts_with("0,even,-4.83109"), "{first}");

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    let entry = &manifest["files"][0];
    assert_eq!(entry["name"], "eigen.csv");
    use sha2::Digest;
    assert_eq!(entry["sha256"], hex::encode(sha2::Sha256::digest(csv.as_bytes())));
    assert_eq!(manifest["config"]["v0_eV"], 0.5);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "v0_eV = 0.5\nv1_eV = 0.6\n").unwrap();
    let o = dwell(&["eigen", "--config", &out_arg(&bad), "--out", &out_arg(dir.path())]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("v1_eV"));

    fs::write(&bad, "n_times = [\n").unwrap();
    let o = dwell(&["eigen", "--config", &out_arg(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let o = dwell(&["measures", "--times", "4", "--out", &out_arg(dir.path())]);
    assert_eq!(code(&o), 2);
    let o = dwell(&["eigen", "--system", "triple"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn identical_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let o = dwell(&["run", "--times", "21", "--grid", "257", "--scaled", "--out", &out_arg(dir.path())]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["eigen.csv", "densities_position.csv", "densities_momentum.csv", "measures.csv", "fit.csv"] {
        let x = fs::read(a.path().join(name)).unwrap();
        assert_eq!(x, fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    let header = fs::read_to_string(a.path().join("densities_momentum.csv")).unwrap();
    assert_eq!(header.lines().next().unwrap(), "t_over_T,k_per_m,n_m,n_times_1e11");
    let measures = fs::read_to_string(a.path().join("measures.csv")).unwrap();
    assert_eq!(measures.lines().count(), 22);
}

#[test]
fn compare_rejects_mismatched_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let other = dir.path().join("other.toml");
    fs::write(&other, "system = \"iswp\"\nn_times = 12\n").unwrap();
    let cfg = dir.path().join("a.toml");
    fs::write(&cfg, "n_times = 9\n").unwrap();
    let o = dwell(&["compare", "--config", &out_arg(&cfg), "--against", &out_arg(&other), "--out", &out_arg(dir.path())]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("incompatible sampling"));
}
