use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fuzzy-coulomb"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn verify_passes_on_a_clean_identity_file() {
    let f = fixture("identities_ok.txt");
    let o = run(&["verify", "--identities", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert_eq!(stdout(&o).matches("PASS symbolic").count(), 3);
    assert_eq!(stdout(&o).matches("PASS numeric").count(), 3);
}

#[test]
fn corrupted_sign_exits_one_and_names_the_identity() {
    let f = fixture("identities_sign_error.txt");
    let o = run(&["verify", "--identities", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stdout(&o).contains("FAIL symbolic angular_momentum_algebra"),
        "{}",
        stdout(&o)
    );
    assert!(stderr(&o).contains("angular_momentum_algebra"));
}

#[test]
fn injected_numeric_fault_exits_one() {
    let o = run(&[
        "verify",
        "--only",
        "zeta_algebra,lrl_dual_construction",
        "--inject-fault",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL numeric  zeta_algebra"));
    assert!(stdout(&o).contains("FAIL numeric  lrl_dual_construction"));
}

#[test]
fn only_selects_one_identity() {
    let o = run(&["verify", "--only", "wprime_algebra"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 2, "{out}");
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(run(&["verify", "--only", "no_such_identity"]).status.code(), Some(2));
    let f = fixture("identities_unparsable.txt");
    let o = run(&["verify", "--identities", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    assert_eq!(run(&["spectrum", "--lambda", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--q", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["scatter", "--energies", "250"]).status.code(), Some(2));
    assert_eq!(
        run(&["spectrum", "--config", "/nonexistent/run.cfg"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn spectrum_csv_has_the_documented_columns() {
    let o = run(&[
        "spectrum", "--n", "2", "--jmax", "1", "--lambda", "0.5", "--nmax", "auto",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("# units: hbar = m = 1"));
    assert_eq!(
        lines.next(),
        Some("lambda,q,n,j,E_closed_form,E_diagonalized,abs_error,Omega_n,nmax_used,tail,note")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    for r in rows {
        let err: f64 = r[6].parse().unwrap();
        assert!(err < 1e-6, "{r:?}");
    }
}

#[test]
fn branch_two_table_sits_above_the_band_edge() {
    let o = run(&[
        "spectrum", "--branch", "II", "--q", "-1", "--lambda", "0.5", "--nmax", "auto", "--n", "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for line in stdout(&o).lines().skip(2) {
        let e: f64 = line.split(',').nth(5).unwrap().parse().unwrap();
        assert!(e > 8.0, "{line}");
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let f = fixture("run.cfg");
    let o = run(&["spectrum", "--config", f.to_str().unwrap(), "--n", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["units"], "hbar = m = 1");
    assert_eq!(v["lambda"], 0.5);
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
}

#[test]
fn free_scattering_is_trivial() {
    let o = run(&["scatter", "--q", "0", "--points", "7", "--jmax", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(2).collect();
    assert_eq!(rows.len(), 28);
    for r in rows {
        let f: Vec<&str> = r.split(',').collect();
        assert_eq!(f[2], "1.0", "{r}");
        assert_eq!(f[3], "0.0", "{r}");
        assert_eq!(f[5], "1.0", "{r}");
    }
}

#[test]
fn mirrored_energies_scatter_identically() {
    let o = run(&["scatter", "--lambda", "0.5", "--energies", "1.5,6.5", "--jmax", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<Vec<f64>> = out
        .lines()
        .skip(2)
        .map(|l| l.split(',').take(6).map(|x| x.parse().unwrap()).collect())
        .collect();
    for pair in rows.chunks(2) {
        assert!((pair[0][2] - pair[1][2]).abs() < 1e-12);
        assert!((pair[0][3] - pair[1][3]).abs() < 1e-12);
        assert!(pair[0][5] > 1.0);
    }
}

#[test]
fn casimir_control_row_fails() {
    let o = run(&["casimir", "--lambda", "0.5", "--control", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0]["state"], "eigenstate");
    assert_eq!(rows[0]["pass"], true);
    assert_eq!(rows[1]["state"], "control");
    assert_eq!(rows[1]["pass"], false);
    assert!(rows[1]["casimir2"].as_f64().unwrap() > 1.0);
}

#[test]
fn reports_are_written_to_the_output_directory() {
    let dir = std::env::temp_dir().join(format!("fuzzy-coulomb-cli-{}", std::process::id()));
    let o = run(&["verify", "--only", "zeta_algebra", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for name in ["symbolic_report.json", "numeric_report.json"] {
        let text = std::fs::read_to_string(dir.join(name)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v[0]["identity_name"], "zeta_algebra");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_is_reproducible() {
    let a = run(&["spectrum", "--n", "2"]);
    let b = bin()
        .args(["spectrum", "--n", "2"])
        .env("FUZZY_COULOMB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let bad = bin()
        .args(["spectrum"])
        .env("FUZZY_COULOMB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
