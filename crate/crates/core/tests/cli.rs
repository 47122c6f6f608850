use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segmap")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("segmap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

#[test]
fn equilibria_census() {
    let o = run(&["--k1", "1.4", "--k2", "1.1", "equilibria"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "family,x1,x2,real,region,stability,eig1,eig2");
    assert_eq!(lines[1..].iter().filter(|l| l.contains(",real,")).count(), 6);
    assert!(s.contains("0.36270166537925"), "{s}");
}

#[test]
fn invalid_params_exit_1() {
    let o = run(&["--k1", "2", "equilibria"]);
    assert_eq!(o.status.code(), Some(1));
    let e = String::from_utf8_lossy(&o.stderr);
    assert!(e.starts_with("error: ") && e.contains("k1 <= n1"), "{e}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["restriction", "--tag", "zz"]).status.code(), Some(2));
    // malformed range reaches our own parser
    let o = run(&["sweep1d", "--vary", "k1", "--fixed", "1.37", "--range", "0.8"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn diagonal_two_cycle() {
    let o = run(&["--k1", "1.2", "--k2", "1.2", "restriction", "--tag", "diag", "--cycles"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.lines().any(|l| l.starts_with("2,true,FR,1.2 ")), "{s}");
}

#[test]
fn thresholds_output() {
    let s = stdout(&run(&["thresholds"]));
    assert!(s.contains("1.125"), "{s}");
    assert!(s.contains("1.38638"), "{s}");
}

#[test]
fn config_file_matches_flags() {
    let cfg = tmp("run.cfg");
    std::fs::write(&cfg, "# fig instance\nk1 = 1.4\nk2 = 1.1\n").unwrap();
    let a = run(&["--config", cfg.to_str().unwrap(), "equilibria"]);
    let b = run(&["--k1", "1.4", "--k2", "1.1", "equilibria"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    std::fs::write(&cfg, "k1 = 1.4\nnonsense\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "equilibria"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn orbit_csv_round_trips() {
    let o = run(&["--k1", "1.2", "--k2", "1.2", "orbit", "--x1", "1.2", "--x2", "1.2", "--steps", "3"]);
    let s = stdout(&o);
    let rows: Vec<Vec<f64>> = s
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[2][1], 1.2);
    assert!((rows[1][1] - 0.912).abs() < 1e-12);
}

#[test]
fn sweep2d_writes_ppm() {
    let out = tmp("grid.ppm");
    let o = run(&["--resolution", "8", "--out", out.to_str().unwrap(), "sweep2d", "--k1-range", "0,1.5", "--k2-range", "0,1.5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let b = std::fs::read(&out).unwrap();
    assert!(b.starts_with(b"P6\n8 8\n255\n"));
    assert_eq!(b.len(), 11 + 8 * 8 * 3);
}

#[test]
fn sweep2d_needs_out() {
    let o = run(&["--resolution", "4", "sweep2d", "--k1-range", "0,1.5", "--k2-range", "0,1.5"]);
    assert_ne!(o.status.code(), Some(0));
}
