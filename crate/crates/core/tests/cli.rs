use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fourier-interp")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn basis_table_is_deterministic_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let o = bin(&["basis-table", "--max-n", "3", "--x-grid", "0:2:0.25", "--out", path(p)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,x,a,a_hat,err_a,err_ahat"));
    assert_eq!(lines.count(), 4 * 9);
}

#[test]
fn json_basis_table_parses() {
    let o = bin(&["basis-table", "--max-n", "2", "--x-grid", "0:1:0.5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["max_n"], 2);
    assert_eq!(v["x_grid"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bin(&["basis-table", "--x-grid", "0:1:0"]).status.code(), Some(2));
    assert_eq!(bin(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(bin(&["reconstruct", "--fixture", "nope", "--x", "0.5"]).status.code(), Some(2));
    assert_eq!(bin(&["lattice-density", "--lattice-file", "/nonexistent/lattice.txt"]).status.code(), Some(2));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# comment\nmax_n = 1\nx_grid = 0:1:0.5\nformat = json\n").unwrap();
    let o = bin(&["basis-table", "--config", path(&cfg)]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["max_n"], 1);
    let o = bin(&["basis-table", "--config", path(&cfg), "--format", "csv", "--max-n", "2"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("n,x,"));
    assert_eq!(text.lines().count(), 1 + 3 * 3);
    std::fs::write(&cfg, "bogus_key = 1\n").unwrap();
    assert_eq!(bin(&["basis-table", "--config", path(&cfg)]).status.code(), Some(2));
}

#[test]
fn verify_suites_report_pass() {
    for suite in ["theta", "kernels", "poisson", "classical"] {
        let o = bin(&["verify", suite, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["pass"], true);
    }
}

#[test]
fn lp_check_exit_codes() {
    assert_eq!(bin(&["lp-check", "--fixture", "triangle"]).status.code(), Some(0));
    let o = bin(&["lp-check", "--fixture", "gaussian", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("condition"));
}

#[test]
fn lattice_density_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("hex.txt");
    std::fs::write(&f, "2\n1 0\n0.5 0.8660254037844386\n").unwrap();
    let o = bin(&["lattice-density", "--lattice-file", path(&f), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let d = v["density"].as_f64().unwrap();
    assert!((d.sqrt() - 0.95231281).abs() < 1e-7, "{v}");
}

#[test]
fn reconstruct_and_poisson_and_classical_run() {
    let o = bin(&["reconstruct", "--fixture", "gaussian", "--x", "0,0.8"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(bin(&["poisson", "--fixture", "hex", "--dilation", "1.7"]).status.code(), Some(0));
    let o = bin(&["classical"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).lines().count() > 10);
}
