//! End-to-end runs of the binary: golden reports, exit codes, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn dgcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgcalc")).current_dir(root()).env_remove("DGCALC_SEED").args(args).output().expect("binary runs")
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("poly_h", &["problems/polynomial.toml", "H", "A", "--window", "-6:0"]),
    ("poly_perfect", &["problems/polynomial.toml", "perfect", "barA"]),
    ("poly_gf2_perfect", &["problems/polynomial_gf2.toml", "perfect", "barA", "--format", "json"]),
    ("poly_dualizing", &["problems/polynomial.toml", "dualizing", "R", "--window", "-8:8"]),
    ("koszul_check", &["problems/koszul.toml", "check"]),
    ("koszul_dualizing", &["problems/koszul.toml", "dualizing", "R", "--window", "-4:4", "--format", "json"]),
    ("koszul_gorenstein", &["problems/koszul.toml", "gorenstein", "--window", "-4:4"]),
    ("koszul_cm", &["problems/koszul.toml", "cm", "barB", "--against", "R", "--window", "-3:3"]),
    ("koszul_resolve", &["problems/koszul.toml", "resolve", "k", "--cutoff", "-4"]),
    ("split3_cech", &["problems/split3.toml", "cech", "A", "--cover", "1 + -1*e3, e2 + e3", "--window", "-1:1"]),
    ("split3_components", &["problems/split3.toml", "components", "--window", "-2:0"]),
    ("split2_tilting", &["problems/split2.toml", "tilting", "P", "--window", "-4:4", "--cutoff", "-6"]),
    ("dual_numbers_perfect", &["problems/dual_numbers.toml", "perfect", "k", "--cutoff", "-11"]),
    ("exterior_rigidity", &["problems/exterior.toml", "rigidity", "R", "--window", "-1:3", "--seed", "7", "--budget", "8", "--format", "json"]),
];

#[test]
fn golden_reports() {
    let update = std::env::var_os("DGCALC_UPDATE_GOLDEN").is_some();
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (name, args) in GOLDEN {
        let out = dgcalc(args);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let got = String::from_utf8(out.stdout).unwrap();
        let path = dir.join(format!("{name}.txt"));
        if update {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
        assert_eq!(got, want, "{name} differs from its golden report");
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["problems/koszul.toml", "rigidity", "R", "--window", "-1:3", "--seed", "3", "--budget", "4", "--format", "json"];
    assert_eq!(dgcalc(&args).stdout, dgcalc(&args).stdout);
}

#[test]
fn seed_falls_back_to_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_dgcalc"))
        .current_dir(root())
        .env("DGCALC_SEED", "41")
        .args(["problems/exterior.toml", "rigidity", "R", "--window", "-1:3", "--budget", "2"])
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("seed: 41\n"));
}

fn write_temp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dgcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn exit_codes() {
    let bad_syntax = write_temp("syntax.toml", "field = \"Q\"\n[ring\n");
    assert_eq!(dgcalc(&[bad_syntax.to_str().unwrap(), "check"]).status.code(), Some(1));
    let bad_degree = write_temp("degree.toml", "field = \"Q\"\n[ring]\ngenerators = [{ name = \"e\", degree = -1, d = \"0\" }, { name = \"s\", degree = -2, d = \"e\" }]\n");
    assert_eq!(dgcalc(&[bad_degree.to_str().unwrap(), "check"]).status.code(), Some(0));
    let wrong = write_temp("wrong.toml", "field = \"Q\"\n[ring]\ngenerators = [{ name = \"e\", degree = -1 }, { name = \"s\", degree = -3, d = \"e\" }]\n");
    let out = dgcalc(&[wrong.to_str().unwrap(), "check"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("d(s)"));
    assert_eq!(dgcalc(&["problems/polynomial.toml", "H", "nothing"]).status.code(), Some(1));
    assert_eq!(dgcalc(&["problems/split3.toml", "cech", "A", "--cover", "1 + -1*e2 + -1*e3"]).status.code(), Some(2));
    assert_eq!(dgcalc(&["problems/polynomial.toml", "bogus"]).status.code(), Some(1));
    assert_eq!(dgcalc(&["problems/missing.toml", "check"]).status.code(), Some(1));
}

#[test]
fn ring_only_file_runs_ring_commands() {
    let out = dgcalc(&["problems/exterior.toml", "components", "--window", "-2:0", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "1 component(s)");
}
