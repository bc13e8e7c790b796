use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use jumpbot_cli::config::{from_toml, to_toml, RunConfig};

const BASELINE: &str = include_str!("../configs/baseline.toml");

fn jumpbot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jumpbot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn evaluate_built_in_and_shipped_baseline_agree() {
    let a = jumpbot(&["evaluate"]);
    let shipped = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/baseline.toml");
    let b = jumpbot(&["evaluate", "--config", shipped]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("11.250 µJ"));
}

#[test]
fn doubled_stiffness_halves_stored_energy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "k5.toml",
        &BASELINE.replace("\"2.5 N/m\"", "\"5 N/m\""),
    );
    let o = jumpbot(&["evaluate", "--config", &cfg]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("5.625 µJ"), "{}", stdout(&o));
    assert!(stdout(&o).contains("1.500 mm"));
}

#[test]
fn malformed_configs_exit_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cases = [
        BASELINE.replace("\"7.5 mN\"", "\"7.5 mm\""),
        BASELINE.replace("[release]", "[release]\ncolour = 1"),
        BASELINE.replace("turns = 384", "turns = -3"),
        BASELINE.replace("\"2.5 N/m\"", "\"0 N/m\""),
        "[spring\n".to_string(),
    ];
    for (i, text) in cases.iter().enumerate() {
        let cfg = write(dir.path(), &format!("bad{i}.toml"), text);
        let o = jumpbot(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "case {i}");
        assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
        assert!(!out.exists(), "case {i} wrote output");
    }
}

#[test]
fn simulate_csvs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let o = jumpbot(&["simulate", "--out", d.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).starts_with("released after 86 strokes"));
    }
    for f in ["wind.csv", "flight.csv"] {
        let x = fs::read(a.join(f)).unwrap();
        assert_eq!(x, fs::read(b.join(f)).unwrap(), "{f}");
        assert!(!x.contains(&b'\r'));
    }
    let wind = fs::read_to_string(a.join("wind.csv")).unwrap();
    assert!(wind.starts_with("cycle,time_s,deflection_m,tension_N\n"));
    assert_eq!(wind.lines().count(), 1 + 86);
    let flight = fs::read_to_string(a.join("flight.csv")).unwrap();
    assert!(flight.starts_with("time_s,height_m,velocity_mps\n0,0,"));
}

#[test]
fn stall_is_a_successful_simulation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "low.toml",
        &BASELINE.replace("\"0.8 V\"", "\"0.7 V\""),
    );
    let o = jumpbot(&[
        "simulate",
        "--config",
        &cfg,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("stall"), "{}", stdout(&o));
    let flight = fs::read_to_string(dir.path().join("flight.csv")).unwrap();
    assert_eq!(flight, "time_s,height_m,velocity_mps\n");
}

#[test]
fn amplitude_sweep_flips_between_0_7_and_0_75() {
    let o = jumpbot(&[
        "sweep",
        "--var",
        "drive.amplitude:0.5V:1.0V",
        "--points",
        "11",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 11);
    for r in &rows {
        let v: f64 = r[0].parse().unwrap();
        let feasible = r[3] == "true";
        assert_eq!(feasible, v > 0.72, "{r:?}");
    }
}

#[test]
fn one_point_sweep_matches_evaluate() {
    let o = jumpbot(&["sweep", "--var", "drive.amplitude:0.8:0.8", "--points", "1"]);
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let apex: f64 = row[1].parse().unwrap();
    let rate: f64 = row[2].parse().unwrap();
    let eval = stdout(&jumpbot(&["evaluate"]));
    assert!(eval.contains(&format!("{:>12.3} mm", apex * 1e3)), "{eval}");
    assert!(eval.contains(&format!("{rate:>12.3} /min")));
}

#[test]
fn sweep_unknown_field_lists_fields() {
    let o = jumpbot(&["sweep", "--var", "spring.colour:1:2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("actuator.moment_arm_length") && err.contains("drive.frequency"));
}

#[test]
fn optimize_writes_reloadable_best_design() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = jumpbot(&[
        "optimize",
        "--var",
        "actuator.moment_arm_length:4mm:16mm",
        "--seed",
        "3",
        "--out",
        d,
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let best = fs::read_to_string(dir.path().join("best_design.toml")).unwrap();
    let cfg = from_toml(&best).unwrap();
    assert_eq!(cfg.design.actuator.moment_arm_length, 16e-3);
    assert_eq!(to_toml(&cfg), best);
    let history = fs::read_to_string(dir.path().join("history.csv")).unwrap();
    assert!(history.starts_with("actuator.moment_arm_length,objective,feasible,violation\n"));

    let again = tempfile::tempdir().unwrap();
    let d2 = again.path().to_str().unwrap();
    jumpbot(&[
        "optimize",
        "--var",
        "actuator.moment_arm_length:4mm:16mm",
        "--seed",
        "3",
        "--out",
        d2,
    ]);
    assert_eq!(
        best,
        fs::read_to_string(again.path().join("best_design.toml")).unwrap()
    );
    assert_eq!(
        history,
        fs::read_to_string(again.path().join("history.csv")).unwrap()
    );
}

#[test]
fn optimize_section_in_config_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "{BASELINE}\n[optimize]\nobjective = \"jump_rate\"\nmax_evaluations = 200\n\n\
         [[optimize.variables]]\nfield = \"ratchet.shaft_radius\"\nlower = \"0.5 mm\"\nupper = \"1.5 mm\"\n"
    );
    let cfg = write(dir.path(), "opt.toml", &text);
    let o = jumpbot(&[
        "optimize",
        "--config",
        &cfg,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("ratchet.shaft_radius"));
}

#[test]
fn optimize_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(jumpbot(&["optimize", "--out", d]).status.code(), Some(2));
    let o = jumpbot(&["optimize", "--var", "drive.amplitude:0.1:0.5", "--out", d]);
    assert_eq!(o.status.code(), Some(3));
    let low = write(
        dir.path(),
        "low.toml",
        &BASELINE.replace("\"0.8 V\"", "\"0.5 V\""),
    );
    let o = jumpbot(&[
        "optimize",
        "--config",
        &low,
        "--var",
        "actuator.moment_arm_length:4mm:16mm",
        "--out",
        d,
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn config_round_trip_is_identity() {
    let c = from_toml(BASELINE).unwrap();
    assert_eq!(c, RunConfig::baseline());
    let text = to_toml(&c);
    let again = from_toml(&text).unwrap();
    assert_eq!(again, c);
    assert_eq!(to_toml(&again), text);
}
