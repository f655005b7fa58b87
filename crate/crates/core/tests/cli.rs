use std::path::Path;
use std::process::{Command, Output};

use greencut::RunConfig;

fn greencut(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_greencut"));
    cmd.args(args);
    match threads {
        Some(n) => cmd.env("GREENCUT_THREADS", n),
        None => cmd.env_remove("GREENCUT_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = greencut(args, None);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8(bytes.to_vec()).unwrap()
}

#[test]
fn survival_writes_the_series_csv() {
    let out = ok(&["survival", "--model", "flat", "--delta0", "0.02", "--eps", "-0.4", "--tmax-tau", "20"]);
    let csv = text(&out.stdout);
    assert!(csv.starts_with("t,re_g,im_g,p\n"));
    assert_eq!(csv.lines().count(), 601);
    assert!(!csv.contains('\r'));
    assert!(text(&out.stderr).contains("tau = 7.957747"));
}

#[test]
fn strong_coupling_summary_flags_missing_regime() {
    let out = ok(&["survival", "--model", "flat", "--delta0", "0.2", "--eps", "-0.4"]);
    assert!(text(&out.stderr).contains("FGR regime absent"));
}

#[test]
fn intermediate_coupling_reports_window() {
    let out = ok(&["survival", "--model", "flat", "--delta0", "0.1", "--eps", "-0.4"]);
    let summary = text(&out.stderr);
    let line = summary.lines().find(|l| l.starts_with("FGR-valid window")).expect(&summary);
    let t: f64 = line.split("t = ").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    assert!(t > 2.0 && t < 5.0, "{line}");
}

#[test]
fn identical_configs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let p = path.to_str().unwrap();
        let out = greencut(
            &[
                "compare",
                "--model",
                "semicircle",
                "--delta0",
                "0.3",
                "--eps",
                "0.1",
                "--methods",
                "cut,oracle,fgr",
                "--oracle-n",
                "300",
                "-o",
                p,
            ],
            Some(threads),
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "4");
    let c = run("c.csv", "4");
    assert_eq!(a, b);
    assert_eq!(b, c);
}

#[test]
fn bad_thread_count_is_rejected() {
    let out =
        greencut(&["sigma", "--model", "flat", "--delta0", "0.2", "--w-re", "0.1", "--w-im", "0.1"], Some("many"));
    assert!(!out.status.success());
    assert!(text(&out.stderr).contains("GREENCUT_THREADS"));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# weak coupling\nmodel = semicircle\ndelta0 = 0.05\neps = 0.2\npoints = 11\n").unwrap();
    let c = cfg.to_str().unwrap();
    let out = ok(&["survival", "--config", c, "--points", "21"]);
    let summary = text(&out.stderr);
    assert!(summary.contains("Semicircle, delta0 = 0.05, eps = 0.2"), "{summary}");
    assert_eq!(text(&out.stdout).lines().count(), 22);
}

#[test]
fn config_text_round_trip_is_a_fixed_point() {
    let src = "model = power-edge\ndelta0 = 0.3\nband_bottom = -0.5\nband_top = 2\nbeta_bottom = 0.25\nbeta_top = 1.5\n\
               methods = cut,resonance\ntmax_abs = 40\nabs_tol = 1e-9\nsweep = 0.1:1.5:15\nwindow = 5:30\nside = above\n";
    let a = RunConfig::from_text(src).unwrap();
    let text = a.to_text();
    let b = RunConfig::from_text(&text).unwrap();
    assert_eq!(a, b);
    assert_eq!(text, b.to_text());
    assert!(RunConfig::from_text("no_such_key = 1").is_err());
}

#[test]
fn pole_report_notes_the_degenerate_quadratic() {
    let out = ok(&["poles", "--model", "semicircle", "--delta0", "0.5", "--eps", "0.3"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let notes = report["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().contains("infinity")));
    assert!(report["thresholds"]["quoted_threshold"].as_f64().is_some());
}

#[test]
fn flat_band_report_has_two_standard_sheet_poles() {
    for eps in ["-0.4", "0.0", "0.7"] {
        let out = ok(&["poles", "--model", "flat", "--delta0", "0.2", "--eps", eps]);
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let sheet0 = report["poles"].as_array().unwrap().iter().filter(|p| p["sheet"] == 0).count();
        assert_eq!(sheet0, 2, "eps {eps}");
    }
}

#[test]
fn sweep_emits_a_trajectory_array() {
    let out = ok(&["poles", "--model", "semicircle", "--eps", "-0.4", "--sweep", "0.1:1.5:15"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let traj = report["trajectory"].as_array().unwrap();
    assert_eq!(traj.len(), 15);
    assert!(traj.iter().all(|p| p["poles"].is_array()));
}

#[test]
fn remaining_subcommands_run() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("delta.csv");
    let mut rows = String::from("E,delta\n");
    for i in 0..=20 {
        let e = -1.0 + i as f64 / 10.0;
        rows.push_str(&format!("{e},{}\n", 0.1 * (1.0 - e * e).sqrt()));
    }
    std::fs::write(&table, rows).unwrap();
    let t = table.to_str().unwrap();

    let sigma = ok(&[
        "sigma", "--model", "flat", "--delta0", "0.2", "--w-re", "0.3", "--w-im", "-0.2", "--sheet", "1", "--format",
        "json",
    ]);
    assert!(serde_json::from_slice::<serde_json::Value>(&sigma.stdout).unwrap()["sigma_im"].is_number());

    let spectral = ok(&["spectral", "--model", "tabulated", "--table", t, "--eps", "0.1", "--points", "50"]);
    assert!(text(&spectral.stdout).starts_with("E,A\n"));

    let oracle = ok(&[
        "oracle",
        "--model",
        "semicircle",
        "--delta0",
        "1.2",
        "--eps",
        "0",
        "--oracle-n",
        "500",
        "--tmax-abs",
        "50",
    ]);
    assert!(text(&oracle.stderr).contains("bound state"));

    let tail = ok(&["tail", "--model", "semicircle", "--delta0", "0.1", "--eps", "0", "--window", "200:1000"]);
    assert!(text(&tail.stderr).contains("alpha"));

    let json = dir.path().join("s.json");
    let j = json.to_str().unwrap();
    ok(&[
        "survival",
        "--model",
        "tabulated",
        "--table",
        t,
        "--eps",
        "0.1",
        "--format",
        "json",
        "-o",
        j,
        "--tmax-abs",
        "10",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(Path::new(j)).unwrap()).unwrap();
    assert_eq!(doc["t"].as_array().unwrap().len(), 600);
}

#[test]
fn errors_exit_nonzero() {
    let out = greencut(&["survival", "--model", "flat", "--delta0", "-1"], None);
    assert!(!out.status.success());
    let out = greencut(&["poles", "--model", "tabulated"], None);
    assert!(!out.status.success());
    let out = greencut(&["sigma", "--model", "flat", "--delta0", "0.2", "--w-re", "1.0", "--w-im", "0"], None);
    assert!(!out.status.success());
}
