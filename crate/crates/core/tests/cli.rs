use std::path::Path;
use std::process::{Command, Output};

use cliffgrav::report;

fn cliffgrav(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cliffgrav")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn lists() {
    let o = cliffgrav(&["list-scenarios"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for name in ["minkowski", "lorentz_rotated", "rindler", "flrw_flat", "schwarzschild", "perturbed_flat"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
    let o = cliffgrav(&["list-identities"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), cliffgrav::suite::IDENTITIES.len());
}

#[test]
fn minkowski_passes_with_json_on_stdout() {
    let o = cliffgrav(&["verify", "--scenario", "minkowski", "--n-points", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.summary.fail_count, 0);
    assert_eq!(r.environment.scenario.points.len(), 2);
}

#[test]
fn tight_tolerance_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = cliffgrav(&[
        "verify",
        "--scenario",
        "schwarzschild",
        "--n-points",
        "1",
        "--tol",
        "cartan.first_structure=1e-30",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    let row = csv.lines().find(|l| l.starts_with("cartan.first_structure,")).unwrap();
    assert!(row.starts_with("cartan.first_structure,fail,1,"), "{row}");
}

#[test]
fn configuration_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["verify", "--fd-order", "3"],
        &["verify", "--fd-step", "1e-9"],
        &["verify", "--n-points", "0"],
        &["verify", "--n-points", "65"],
        &["verify", "--tol", "no.such.id=1e-3"],
        &["verify", "--tol", "cartan.first_structure=-1"],
        &["verify", "--param", "rapidity"],
        &["verify", "--mass", "-1"],
        &["verify", "--format", "xml"],
        &["verify", "--points", "a.csv", "--n-points", "3"],
        &["verify", "--points", "/nonexistent/points.csv"],
        &["verify", "--config", "/nonexistent/run.conf"],
        &["verify", "--scenario", "minkowski", "--param", "bogus=1"],
        &["frobnicate"],
    ];
    for args in cases {
        let o = cliffgrav(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn scenario_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.csv");
    std::fs::write(&pts, "x0,x1,x2,x3\n0,2.5,1.5,0\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["verify", "--scenario", "kerr"],
        vec!["verify", "--scenario", "schwarzschild", "--param", "mass=-1"],
        vec!["verify", "--scenario", "perturbed_flat", "--param", "epsilon=0.2"],
        vec!["verify", "--scenario", "schwarzschild", "--points", pts.to_str().unwrap()],
    ];
    for args in &cases {
        let o = cliffgrav(args);
        assert_eq!(code(&o), 3, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write(dir.path(), "pts.csv", "x0,x1,x2,x3\n2.0,0,0,0\n1.8,0.1,0.2,-0.3\n");
    let out = dir.path().join("report.json");
    let conf = write(
        dir.path(),
        "run.conf",
        &format!(
            "# FLRW run\nscenario = flrw_flat\nparam.p = 1\npoints = {pts}\nfd_step = 2e-3\nformat = text\nout = {}\n",
            out.display()
        ),
    );
    let o = cliffgrav(&["verify", "--config", &conf, "--format", "json", "--fd-order", "2", "--fd-step", "1e-3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r.environment.scenario.name, "flrw_flat");
    assert_eq!(r.environment.scenario.points, vec![[2.0, 0.0, 0.0, 0.0], [1.8, 0.1, 0.2, -0.3]]);
    assert_eq!(r.environment.fd_order, 2);
    assert_eq!(r.environment.fd_step, 1e-3);

    let bad = write(dir.path(), "bad.conf", "scenario = flrw_flat\nflavour = strange\n");
    assert_eq!(code(&cliffgrav(&["verify", "--config", &bad])), 2);
}

#[test]
fn text_and_csv_formats() {
    let o = cliffgrav(&["verify", "--scenario", "rindler", "--n-points", "1", "--format", "text"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("scenario: rindler\n"));
    assert!(text.contains("SKIPPED scenario.pullback_wiring"));
    let o = cliffgrav(&["verify", "--scenario", "rindler", "--n-points", "1", "--format", "csv"]);
    assert!(stdout(&o).starts_with("identity_id,status,points_evaluated,max_residual,tolerance,kind,reason\n"));
}
