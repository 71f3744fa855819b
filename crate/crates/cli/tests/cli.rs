use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hv(root: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hv"))
        .args(args)
        .env("HV_OUTPUT_ROOT", root)
        .env_remove("RUST_LOG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn catalog_lists_ten_problems() {
    let dir = tempfile::tempdir().unwrap();
    let o = hv(dir.path(), &["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 10);
    assert!(stdout(&o).contains("euler-collision-wall"));

    let o = hv(dir.path(), &["catalog", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 10);
    assert_eq!(v[5]["id"], "sod");
}

#[test]
fn run_writes_manifest_under_output_root() {
    let dir = tempfile::tempdir().unwrap();
    let o = hv(dir.path(), &["run", "--problem", "adv-cauchy", "--n", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let man = dir.path().join("adv-cauchy/manifest.json");
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(man).unwrap()).unwrap();
    assert_eq!(v["grid"][0], 20);
    assert_eq!(v["scheme"], "hv");
    for f in v["files"].as_array().unwrap() {
        assert!(dir.path().join("adv-cauchy").join(f.as_str().unwrap()).exists(), "{f}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "problem = \"sod\"\nn = 40\nscheme = \"muscl\"\n").unwrap();
    let out = dir.path().join("here");
    let o = hv(
        dir.path(),
        &[
            "run",
            cfg.to_str().unwrap(),
            "--n",
            "20",
            "--output-dir",
            out.to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!((v["grid"][0].as_u64(), v["scheme"].as_str()), (Some(20), Some("muscl")));
}

#[test]
fn study_prints_orders() {
    let dir = tempfile::tempdir().unwrap();
    let o = hv(
        dir.path(),
        &[
            "study",
            "--problem",
            "adv-cauchy",
            "--no-viscosity",
            "--grids",
            "10,20,40",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("adv-cauchy/convergence.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(stdout(&o).starts_with("n,h,steps,status"));
}

#[test]
fn analyze_writes_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let o = hv(dir.path(), &["analyze", "--kind", "roots", "--samples", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let roots = fs::read_to_string(dir.path().join("analysis/char_roots.csv")).unwrap();
    assert_eq!(roots.lines().count(), 51);
    let o = hv(dir.path(), &["analyze", "--kind", "spectrum", "--sizes", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_dir(dir.path().join("analysis")).unwrap().count() >= 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Configuration errors.
    assert_eq!(hv(dir.path(), &["run", "--problem", "nope"]).status.code(), Some(2));
    assert_eq!(
        hv(dir.path(), &["run", "--problem", "sod", "--alpha-cfl", "0.9"])
            .status
            .code(),
        Some(2)
    );
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "problem = \"sod\"\nwibble = 3\n").unwrap();
    let o = hv(dir.path(), &["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(
        hv(dir.path(), &["study", "--problem", "adv-cauchy", "--grids", "10"])
            .status
            .code(),
        Some(2)
    );
    // Unreadable config and unwritable output.
    let missing = dir.path().join("missing.toml");
    assert_eq!(
        hv(dir.path(), &["run", missing.to_str().unwrap()]).status.code(),
        Some(4)
    );
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let inside = blocker.join("sub");
    let o = hv(
        dir.path(),
        &[
            "run",
            "--problem",
            "adv-cauchy",
            "--n",
            "8",
            "--output-dir",
            inside.to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(4));
    // Numerical failure: the step budget runs out before t_end.
    let o = hv(
        dir.path(),
        &["run", "--problem", "sod", "--n", "40", "--max-steps", "3"],
    );
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}
