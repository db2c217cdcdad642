use std::path::Path;
use std::process::{Command, Output};

use pmdyn::dissipator::rates;
use pmdyn_cli::config::parse_config;
use pmdyn_cli::presets;

fn pmdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmdyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Data rows as numbers; the trailing flag column is returned separately.
fn rows(csv: &str) -> Vec<(Vec<f64>, String)> {
    csv.lines()
        .skip(1)
        .map(|l| {
            let mut cells: Vec<&str> = l.split(',').collect();
            let flag = cells.pop().unwrap().to_string();
            (cells.iter().map(|c| c.parse().unwrap()).collect(), flag)
        })
        .collect()
}

fn fig1_text() -> &'static str {
    presets::find("fig1-3").unwrap().config
}

#[test]
fn evolve_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "fig1.cfg", fig1_text());
    let args = ["evolve", "--config", &cfg, "--set", "t_points=41"];
    let a = stdout(&pmdyn(&args));
    let b = stdout(&pmdyn(&args));
    assert_eq!(a, b);
    assert!(a.starts_with("t,concurrence,discord_A,discord_B,mutual_info,purity,min_eigenvalue,trace_error,flag\n"));
    assert!(!a.contains('\r'));
    assert_eq!(a.lines().count(), 42);

    let out = dir.path().join("out.csv");
    let o = pmdyn(&[
        "evolve",
        "--config",
        &cfg,
        "--set",
        "t_points=41",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(out).unwrap(), a);
}

#[test]
fn bell_row_at_zero() {
    let csv = stdout(&pmdyn(&["evolve", "--preset", "fig1-3", "--set", "t_values=0"]));
    let line = csv.lines().nth(1).unwrap();
    let (vals, flag) = &rows(&csv)[0];
    assert!(line.starts_with("0,1,"), "{line}");
    assert_eq!(vals[1], 1.0);
    assert!(flag.is_empty());
}

#[test]
fn missing_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = fig1_text().replace("T1 = 1.25\n", "");
    let cfg = write_config(dir.path(), "bad.cfg", &text);
    let o = pmdyn(&["evolve", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`T1`"));
}

#[test]
fn bad_anisotropy_is_a_physics_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "chi.cfg", &fig1_text().replace("chi = 0.9", "chi = 1.5"));
    let o = pmdyn(&["evolve", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("anisotropy chi = 1.5"));
}

#[test]
fn unknown_preset_and_missing_file() {
    assert_eq!(pmdyn(&["preset", "show", "fig9"]).status.code(), Some(2));
    assert_eq!(
        pmdyn(&["evolve", "--config", "/nonexistent/x.cfg"]).status.code(),
        Some(2)
    );
    assert_eq!(pmdyn(&["evolve"]).status.code(), Some(2));
}

#[test]
fn presets_round_trip() {
    let list = stdout(&pmdyn(&["preset", "list"]));
    for p in &presets::PRESETS {
        assert!(list.contains(p.name));
        let shown = stdout(&pmdyn(&["preset", "show", p.name]));
        assert_eq!(shown, p.config);
    }
}

#[test]
fn long_time_row_matches_asymptotic() {
    let s = parse_config(fig1_text(), &[]).unwrap();
    let r = rates(&s.system, &s.baths).unwrap();
    let t = 50.0 / r.x1().min(r.y2());
    let t_arg = format!("t_values={t}");
    let ev = rows(&stdout(&pmdyn(&["evolve", "--preset", "fig1-3", "--set", &t_arg])));
    let asym = rows(&stdout(&pmdyn(&[
        "asymptotic",
        "--preset",
        "fig1-3",
        "--axis",
        "b",
        "--from",
        "1",
        "--to",
        "1",
        "--points",
        "1",
    ])));
    let (e, a) = (&ev[0].0, &asym[0].0);
    for (ei, ai) in [(1, 1), (2, 2), (3, 3)] {
        assert!((e[ei] - a[ai]).abs() < 1e-4, "column {ei}: {} vs {}", e[ei], a[ai]);
    }
}

#[test]
fn hot_limit_has_no_correlations() {
    let csv = stdout(&pmdyn(&[
        "asymptotic",
        "--preset",
        "fig7",
        "--axis",
        "T",
        "--from",
        "100",
        "--to",
        "100",
        "--points",
        "1",
    ]));
    let (v, _) = &rows(&csv)[0];
    assert!(v[1..].iter().all(|x| x.abs() < 0.01), "{v:?}");
}

#[test]
fn entanglement_dies_before_discord() {
    let csv = stdout(&pmdyn(&[
        "asymptotic",
        "--preset",
        "fig7",
        "--axis",
        "T",
        "--from",
        "0.1",
        "--to",
        "6",
        "--points",
        "60",
    ]));
    let data = rows(&csv);
    let cr = data
        .iter()
        .position(|(v, _)| v[1] == 0.0)
        .expect("entanglement vanishes in range");
    assert!(cr > 0);
    assert!(data[cr..].iter().all(|(v, _)| v[1] == 0.0));
    assert!(data.iter().all(|(v, _)| v[2] > 0.0 && v[3] > 0.0));
}

#[test]
fn homogeneous_field_gives_symmetric_discord() {
    let csv = stdout(&pmdyn(&[
        "asymptotic",
        "--preset",
        "fig7",
        "--set",
        "b=0",
        "--axis",
        "T",
        "--from",
        "0.2",
        "--to",
        "3",
        "--points",
        "8",
    ]));
    for (v, _) in rows(&csv) {
        assert!((v[2] - v[3]).abs() < 1e-6 && v[4].abs() < 1e-6);
    }
}

#[test]
fn sweep_rows_follow_axis_order() {
    let csv = stdout(&pmdyn(&[
        "asymptotic",
        "--preset",
        "fig8-direct",
        "--axis",
        "dT",
        "--from",
        "1",
        "--to",
        "-1",
        "--points",
        "5",
    ]));
    assert!(csv.starts_with("dT,"));
    let axis: Vec<f64> = rows(&csv).iter().map(|(v, _)| v[0]).collect();
    assert_eq!(axis, [1.0, 0.5, 0.0, -0.5, -1.0]);
    let flags: Vec<String> = rows(&csv).into_iter().map(|(_, f)| f).collect();
    assert_eq!(flags[..2], ["", ""]);
    assert!(flags[2..].iter().all(|f| f == "outside direct geometry"));
}

#[test]
fn invalid_sweep_points_are_flagged() {
    let csv = stdout(&pmdyn(&[
        "asymptotic",
        "--preset",
        "fig7",
        "--axis",
        "T",
        "--from",
        "-1",
        "--to",
        "1",
        "--points",
        "3",
    ]));
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[1].starts_with("-1,nan,nan,nan,nan,") && lines[1].contains("error: parameter `T1`"));
    assert!(lines[2].starts_with("0,nan,"));
    assert!(!lines[3].contains("nan"));
}

#[test]
fn validate_passes_on_figure_preset() {
    let o = pmdyn(&["validate", "--preset", "fig4-6-bell", "--set", "t_values=0,1,5,20,100"]);
    let text = stdout(&o);
    assert!(!text.contains("FAIL"));
    for el in ["p21", "p24", "p42"] {
        assert!(text.contains(&format!("appendix {el}")), "{text}");
    }
}

#[test]
fn validate_reports_outside_mode_without_failing() {
    let o = pmdyn(&[
        "validate",
        "--preset",
        "fig4-6-bell",
        "--mode",
        "outside",
        "--set",
        "t_values=0,2,10",
    ]);
    let text = stdout(&o);
    assert!(text.contains("info   full state vs master-equation oracle (HamiltonianOutside)"));
}

#[test]
fn crippled_optimizer_fails_validation() {
    let o = pmdyn(&[
        "validate",
        "--preset",
        "fig4-6-bell",
        "--set",
        "t_values=0,1",
        "--set",
        "optimizer_grid_theta=1",
        "--set",
        "optimizer_grid_phi=1",
        "--set",
        "optimizer_iterations=0",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL   optimizer vs grid discord"));
}

#[test]
fn steady_concurrence_grows_with_dm_below_critical() {
    let s = parse_config(fig1_text(), &[]).unwrap();
    let r = rates(&s.system, &s.baths).unwrap();
    let t_arg = format!("t_values={}", 50.0 / r.x1().min(r.y2()));
    let c: Vec<f64> = ["D=1.2", "D=1.4", "D=1.6"]
        .iter()
        .map(|d| {
            rows(&stdout(&pmdyn(&[
                "evolve", "--preset", "fig1-3", "--set", d, "--set", &t_arg,
            ])))[0]
                .0[1]
        })
        .collect();
    assert!(c[0] < c[1] && c[1] < c[2], "{c:?}");
}
