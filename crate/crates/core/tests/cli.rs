//! End-to-end runs of the `gup-optomech` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_gup-optomech");

const MU_COLUMN: &str = r#"
[deformation]
model = "mu"
strength = 1.0

[physical]
m_kg = 1e-11
omega_m_rad_s = 628318.5307179586
finesse = 1e5
lambda_l_m = 1.064e-6
n_p = 1e8
n_r = 1.0
nbar = 10.0
eta = 1.0
t_k = 0.05
q = 1e7
"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv(o: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(o);
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn field(header: &[String], row: &[String], name: &str) -> f64 {
    let i = header.iter().position(|h| h == name).unwrap();
    row[i].parse().unwrap()
}

fn with_config(path: &Path, args: &[&str]) -> Output {
    let mut all = vec!["--config", path.to_str().unwrap()];
    all.extend_from_slice(args);
    run(&all)
}

#[test]
fn table2_is_deterministic_across_workers() {
    let a = run(&["table2", "--jobs", "1"]);
    let b = run(&["table2", "--jobs", "4"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let (header, rows) = csv(&a);
    for name in ["model", "finesse", "m_kg", "omega_m_2pi_hz", "lambda_l_m", "n_p", "n_r", "delta_phi_rad", "delta_strength"] {
        assert!(header.iter().any(|h| h == name), "missing {name}");
    }
    assert_eq!(rows.len(), 3);
    // scientific notation with at least ten significant digits
    let m = &rows[0][header.iter().position(|h| h == "m_kg").unwrap()];
    assert!(m.contains('e') && m.split('e').next().unwrap().len() >= 11, "{m}");
}

#[test]
fn theta_for_mu_column() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "mu.toml", MU_COLUMN);
    let o = with_config(&cfg, &["theta"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (h, rows) = csv(&o);
    let t = field(&h, &rows[0], "theta_abs_rad");
    assert!(t > 0.5e-4 && t < 2e-4, "{t}");
}

#[test]
fn theta_regime_violation_names_inequality() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "bad.toml", &MU_COLUMN.replace("finesse = 1e5", "finesse = 1e9"));
    let o = with_config(&cfg, &["theta"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("λ < 1"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn json_output_to_file() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "mu.toml", MU_COLUMN);
    let out = dir.path().join("theta.json");
    let o = with_config(&cfg, &["theta", "--format", "json", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v[0]["model"], "mu");
}

#[test]
fn oracle_undeformed_and_linearity() {
    let dir = TempDir::new().unwrap();
    let undeformed = write(
        &dir,
        "o.toml",
        "[oracle]\nalpha = 2.0\nlambda = 0.3\nopt_dim = 32\nmech_dim = 32\n",
    );
    let o = with_config(&undeformed, &["oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (h, rows) = csv(&o);
    let last = rows.last().unwrap();
    assert!(field(&h, last, "rel_error") < 1e-8);
    assert_eq!(last[h.iter().position(|x| x == "pass").unwrap()], "true");

    let beta = write(
        &dir,
        "b.toml",
        "[deformation]\nmodel = \"beta\"\n[oracle]\nalpha = 3.0\nlambda = 0.2\nopt_dim = 48\nmech_dim = 32\nstrength = 1e-3\n",
    );
    let o = with_config(&beta, &["oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (h, rows) = csv(&o);
    let row = rows.iter().find(|r| r[0] == "strength_exponent").unwrap();
    assert!((field(&h, row, "value") - 1.0).abs() < 0.02);
}

#[test]
fn oracle_under_resolved_cutoff() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "o.toml",
        "[oracle]\nalpha = 1.0\nnbar = 2.0\nlambda = 0.3\nopt_dim = 16\nmech_dim = 4\n",
    );
    assert_eq!(with_config(&cfg, &["oracle"]).status.code(), Some(4));
}

#[test]
fn empty_sweep_emits_header() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "s.toml",
        &format!("{MU_COLUMN}\n[sweep]\nparameter = \"n_p\"\ngrid = []\n"),
    );
    let o = with_config(&cfg, &["sweep"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "n_p,lambda,theta_re_rad,theta_im_rad,theta_abs_rad,delta_strength\n");
}

#[test]
fn figure1_minimum() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "f.toml",
        "[figure1]\nbeta0 = [1.0]\n[figure1.range]\nmin = 0.1\nmax = 10.0\npoints = 21\n",
    );
    let o = with_config(&cfg, &["figure1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (h, rows) = csv(&o);
    assert_eq!(rows.len(), 21);
    let mid = &rows[10];
    assert!((field(&h, mid, "dp_over_mp_c") - 1.0).abs() < 1e-12);
    assert!((field(&h, mid, "dx_min_over_lp") - 1.0).abs() < 1e-12);
}

#[test]
fn noise_budget_is_seed_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "n.toml",
        &format!("{MU_COLUMN}\n[noise]\nmonte_carlo_samples = 2048\n").replace("eta = 1.0", "eta = 0.9"),
    );
    let a = with_config(&cfg, &["noise-budget", "--seed", "7", "--jobs", "1"]);
    let b = with_config(&cfg, &["noise-budget", "--seed", "7", "--jobs", "3"]);
    let c = with_config(&cfg, &["noise-budget", "--seed", "8"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert!(stdout(&a).contains("0.729 (~0.7)"));
}

#[test]
fn config_errors() {
    let dir = TempDir::new().unwrap();
    let typo = write(&dir, "typo.toml", "[deformation]\nmodel = \"beta\"\nstrenght = 1.0\n");
    assert_eq!(with_config(&typo, &["theta"]).status.code(), Some(2));
    let consts = write(
        &dir,
        "c.toml",
        "[constants]\nhbar = 1.0\nc = 1.0\nk_b = 1.0\nplanck_mass = 1.0\nplanck_length = 1.0\n",
    );
    assert_eq!(with_config(&consts, &["figure1"]).status.code(), Some(2));
    assert_eq!(with_config(&consts, &["figure1", "--unsafe-constants"]).status.code(), Some(0));
    assert_eq!(run(&["theta"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn io_errors() {
    let missing = run(&["--config", "/nonexistent/run.toml", "table2"]);
    assert_eq!(missing.status.code(), Some(5));
    let unwritable = run(&["table2", "--output", "/nonexistent/dir/out.csv"]);
    assert_eq!(unwritable.status.code(), Some(5));
}
