// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

fn wstate(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wstate"))
        .args(args)
        .current_dir(dir)
        .env_remove("WSTATE_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn simulate_rate_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.cfg"), "preset = fig2\nsamples = 10\n").unwrap();
    let o = wstate(
        &[
            "simulate", "--config", "run.cfg", "--method", "rate", "--output", "t.csv",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let line = stdout(&o);
    assert!(
        line.contains("method=rate") && line.contains("final_fidelity=0.91"),
        "{line}"
    );
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert!(csv.starts_with("# method=rate purity="));
    assert_eq!(csv.lines().count(), 2 + 11);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "initial = haar:11\nt_end = 600\nmethod = effective_master\ndt = 0.05\n",
    )
    .unwrap();
    for out in ["a.csv", "b.csv"] {
        let o = wstate(
            &["simulate", "--config", "run.cfg", "--output", out],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(0), "{o:?}");
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn both_writes_two_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.cfg"), "t_end = 20\nsamples = 2\n").unwrap();
    let o = wstate(
        &[
            "simulate", "--config", "run.cfg", "--method", "both", "--output", "t.csv",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert!(dir.path().join("t_rate.csv").exists());
    let full = std::fs::read_to_string(dir.path().join("t_full_time_dependent.csv")).unwrap();
    assert!(full.starts_with("# method=full_time_dependent purity=Tr(rho^2)"));
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("zero.cfg"), "t_end = 0\n").unwrap();
    std::fs::write(p.join("strong.cfg"), "omega = 0.6\n").unwrap();
    std::fs::write(p.join("typo.cfg"), "omgea = 0.6\n").unwrap();
    let code = |args: &[&str]| wstate(args, p).status.code();
    assert_eq!(
        code(&["simulate", "--config", "zero.cfg", "--output", "x.csv"]),
        Some(2)
    );
    assert_eq!(
        code(&["simulate", "--config", "typo.cfg", "--output", "x.csv"]),
        Some(2)
    );
    assert_eq!(
        code(&["simulate", "--config", "missing.cfg", "--output", "x.csv"]),
        Some(2)
    );
    assert_eq!(
        code(&[
            "simulate",
            "--config",
            "strong.cfg",
            "--output",
            "x.csv",
            "--strict"
        ]),
        Some(3)
    );
    // Without --strict the run proceeds; the unit-step rate integrator then refuses the stiff generator.
    let o = wstate(
        &["simulate", "--config", "strong.cfg", "--output", "x.csv"],
        p,
    );
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning: weak-field"));
    assert!(!p.join("zero.csv").exists());
}

#[test]
fn rates_with_closed_form_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = wstate(
        &["rates", "--output", "mu.csv", "--compare-closed-form"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert!(stdout(&o).contains("mismatches=0"), "{}", stdout(&o));
    let mu = std::fs::read_to_string(dir.path().join("mu.csv")).unwrap();
    assert_eq!(
        mu.lines().next(),
        Some("from,000,s11,s12,s13,s21,s22,s23,111")
    );
    let report = std::fs::read_to_string(dir.path().join("mu_closed_form.csv")).unwrap();
    assert!(report
        .lines()
        .any(|l| l.starts_with("target,000,s13,") && l.ends_with(",match")));
}

#[test]
fn sweep_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let o = wstate(
        &[
            "sweep",
            "--axis",
            "cooperativity",
            "--from",
            "20",
            "--to",
            "200",
            "--points",
            "4",
            "--output",
            "s.csv",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    let o = wstate(&["fit", "--input", "s.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert!(stdout(&o).starts_with("a="), "{}", stdout(&o));
}

#[test]
fn sweep_is_independent_of_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let run = |workers: &str, out: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_wstate"))
            .args([
                "sweep",
                "--axis",
                "gamma_over_kappa",
                "--values",
                "0.5,1.5,1.0,2.5",
                "--output",
                out,
            ])
            .current_dir(dir.path())
            .env("WSTATE_WORKERS", workers)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{o:?}");
        std::fs::read(dir.path().join(out)).unwrap()
    };
    assert_eq!(run("1", "one.csv"), run("3", "three.csv"));
    let o = Command::new(env!("CARGO_BIN_EXE_wstate"))
        .args([
            "sweep",
            "--axis",
            "cooperativity",
            "--values",
            "10,20",
            "--output",
            "x.csv",
        ])
        .current_dir(dir.path())
        .env("WSTATE_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fit_rejects_two_points_and_bad_sweeps() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(
        wstate(
            &[
                "sweep",
                "--axis",
                "cooperativity",
                "--values",
                "30,60",
                "--output",
                "two.csv"
            ],
            p
        )
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        wstate(&["fit", "--input", "two.csv"], p).status.code(),
        Some(2)
    );
    assert_eq!(
        wstate(
            &[
                "sweep",
                "--axis",
                "omega_over_g",
                "--values",
                "0.01,0.02,0.03",
                "--output",
                "om.csv"
            ],
            p
        )
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        wstate(&["fit", "--input", "om.csv"], p).status.code(),
        Some(2)
    );
    assert_eq!(
        wstate(
            &["sweep", "--axis", "sideways", "--values", "1,2", "--output", "x.csv"],
            p
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        wstate(
            &[
                "sweep",
                "--axis",
                "cooperativity",
                "--from",
                "5",
                "--to",
                "1",
                "--points",
                "3",
                "--output",
                "x.csv"
            ],
            p
        )
        .status
        .code(),
        Some(2)
    );
}
