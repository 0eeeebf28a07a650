use std::fs;
use std::path::Path;
use std::process::Command;

use viral_nsfd::config::{parse_config, RunConfig};
use viral_nsfd::output::{read_lyapunov_csv, read_tornado_csv, read_trajectory_csv, VERDICTS};
use viral_nsfd::run::{run_compare_diffusion, run_sensitivity, run_simulate};
use viral_nsfd::ConfigError;

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_viral-nsfd"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn verdicts_in(summary: &str) -> Vec<&'static str> {
    VERDICTS.iter().copied().filter(|v| summary.contains(v)).collect()
}

#[test]
fn emitted_csvs_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::scenario_b();
    cfg.horizon = 30.0;
    cfg.snapshot_every = 7.0;
    let outcome = run_simulate(&cfg, dir.path()).unwrap();
    assert_eq!(outcome.exit_code, 0);

    let traj = outcome.trajectory.unwrap();
    let rows = read_trajectory_csv(&fs::read_to_string(dir.path().join("trajectory.csv")).unwrap()).unwrap();
    let n_nodes = cfg.grid.n_nodes();
    assert_eq!(rows.len(), traj.snapshots.len() * n_nodes);
    for (k, row) in rows.iter().enumerate() {
        let st = &traj.snapshots[k / n_nodes];
        let n = k % n_nodes;
        assert_eq!(row.time.to_bits(), st.t.to_bits());
        assert_eq!(row.x.to_bits(), cfg.grid.node(n).to_bits());
        assert_eq!(
            [row.s, row.i, row.v].map(f64::to_bits),
            [st.s[n], st.i[n], st.v[n]].map(f64::to_bits)
        );
    }

    let series = outcome.lyapunov.unwrap();
    let lyap = read_lyapunov_csv(&fs::read_to_string(dir.path().join("lyapunov.csv")).unwrap()).unwrap();
    assert_eq!(lyap.len(), 31);
    for (row, (t, v)) in lyap.iter().zip(series.times.iter().zip(&series.values)) {
        assert_eq!((row.time.to_bits(), row.value.to_bits()), (t.to_bits(), v.to_bits()));
    }
    for name in ["S.svg", "I.svg", "V.svg", "summary.txt"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
}

#[test]
fn summary_names_exactly_one_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::scenario_a();
    cfg.horizon = 20.0;
    run_simulate(&cfg, dir.path()).unwrap();
    let text = fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert_eq!(verdicts_in(&text), ["NotConverged"]);
    assert!(text.contains("R0 = 0.210000"));
}

#[test]
fn failed_run_still_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::scenario_b();
    cfg.scheme = viral_nsfd::Scheme::ExplicitSfd;
    let outcome = run_simulate(&cfg, dir.path()).unwrap();
    assert_eq!(outcome.exit_code, 2);
    let text = fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert_eq!(verdicts_in(&text), ["NotConverged"]);
    assert!(text.contains("positivity: violated, first offending step 1"));
    assert!(text.contains("status: failed"));
}

#[test]
fn tornado_csv_is_deterministic_and_sorted() {
    let cfg = RunConfig::scenario_b();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_sensitivity(&cfg, a.path()).unwrap();
    run_sensitivity(&cfg, b.path()).unwrap();
    let bytes = |d: &Path| fs::read(d.join("tornado.csv")).unwrap();
    assert_eq!(bytes(a.path()), bytes(b.path()));
    let rows = read_tornado_csv(&String::from_utf8(bytes(a.path())).unwrap()).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.windows(2).all(|w| w[0].abs_prcc >= w[1].abs_prcc));
    assert!(fs::read_to_string(a.path().join("tornado.svg"))
        .unwrap()
        .contains("stroke-dasharray"));
}

#[test]
fn identical_diffusion_gives_zero_discrepancy() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::scenario_b();
    cfg.horizon = 50.0;
    let cmp = run_compare_diffusion(&cfg, 3.0, 3.0, dir.path()).unwrap();
    assert_eq!(cmp.max_discrepancy, 0.0);
    assert!(dir.path().join("compare-diffusion.csv").exists());
}

#[test]
fn config_errors_name_line_or_key() {
    assert!(matches!(parse_config(""), Err(ConfigError::Validation { .. })));
    let preset_a = RunConfig::scenario_a();
    assert_eq!(preset_a.beta1, 5e-12);
    assert_eq!(preset_a.grid.dx(), 0.5);
    match parse_config("preset = scenario-a\ndt = -1\n") {
        Err(ConfigError::Validation { key, .. }) => assert_eq!(key, "dt"),
        other => panic!("{other:?}"),
    }
    match parse_config("preset = scenario-a\n# fine\nbogus = 1\n") {
        Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();

    let (code, stdout, _) = cli(&["r0", "--preset", "scenario-b"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("R0 = 12.600000"));

    let (code, stdout, _) = cli(&["equilibria", "--preset", "scenario-a"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("E0: S = 1.0000000000e8"));

    let (code, _, stderr) = cli(&["simulate", "--preset", "scenario-a", "--set", "dt=-1", "--out", out]);
    assert_eq!(code, 1);
    assert!(stderr.contains("`dt`"));

    let (code, _, _) = cli(&[
        "sensitivity",
        "--preset",
        "scenario-b",
        "--set",
        "sensitivity.samples=5",
        "--out",
        out,
    ]);
    assert_eq!(code, 1);

    let (code, _, _) = cli(&[
        "simulate",
        "--preset",
        "scenario-b",
        "--set",
        "scheme=sfd",
        "--out",
        out,
    ]);
    assert_eq!(code, 2);
    assert!(Path::new(out).join("summary.txt").exists());

    let (code, stdout, _) = cli(&[
        "compare-sfd",
        "--preset",
        "scenario-b",
        "--set",
        "horizon=40",
        "--out",
        out,
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("sfd: verdict NotConverged"));

    let (code, _, _) = cli(&[
        "compare-diffusion",
        "--preset",
        "scenario-b",
        "--set",
        "horizon=20",
        "--out",
        out,
    ]);
    assert_eq!(code, 0);

    let (code, _, _) = cli(&["simulate", "--preset", "scenario-b", "--set", "horizon=5", "--out", out]);
    assert_eq!(code, 0);

    let (code, _, _) = cli(&[
        "sensitivity",
        "--preset",
        "scenario-b",
        "--set",
        "sensitivity.samples=50",
        "--out",
        out,
    ]);
    assert_eq!(code, 0);

    let conf = dir.path().join("run.conf");
    fs::write(&conf, "preset = scenario-a\nhorizon = 3\nunknown_key = 2\n").unwrap();
    let (code, _, stderr) = cli(&["simulate", "--config", conf.to_str().unwrap(), "--out", out]);
    assert_eq!(code, 1);
    assert!(stderr.contains("line 3"));
}
