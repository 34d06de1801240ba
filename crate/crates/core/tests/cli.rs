use std::process::Command;

fn filament() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_filament"));
    c.env("FILAMENT_THREADS", "1");
    c
}

#[test]
fn energy_passes_and_writes_series() {
    let dir = tempfile::tempdir().unwrap();
    let st = filament()
        .args([
            "energy",
            "--n",
            "128",
            "--eps-exp",
            "4,5,6,7,8,9,10",
            "--out",
        ])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(st.success());
    let csv = std::fs::read_to_string(dir.path().join("energy.csv")).unwrap();
    assert!(csv.starts_with("epsilon,value,fit\n"));
    assert_eq!(csv.lines().count(), 8);

    let out = filament()
        .args(["export", "--series", "energy", "--report"])
        .arg(dir.path().join("report.json"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), csv);

    let out = filament()
        .args(["export", "--series", "nope", "--report"])
        .arg(dir.path().join("report.json"))
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("available: energy"));
}

#[test]
fn invalid_epsilon_is_a_usage_error() {
    let out = filament()
        .args(["energy", "--eps-exp", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("run.epsilons[0]"));
}

#[test]
fn randomized_suite_requires_seed() {
    let out = filament().args(["flatnorm"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));
}

#[test]
fn empty_verify_selection_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[curve]\nbuiltin = { kind = \"unit-circle\" }\n\n[run]\nsuites = []\n",
    )
    .unwrap();
    let st = filament()
        .arg("verify")
        .arg("--config")
        .arg(&cfg)
        .status()
        .unwrap();
    assert!(st.success());
}

#[test]
fn evolve_writes_states_and_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("c.csv");
    filament_core::BuiltinCurve::Trefoil
        .build(128)
        .unwrap()
        .save(&curve)
        .unwrap();
    let out = dir.path().join("run");
    let h: f64 = 1.0 / 128.0;
    let st = filament()
        .args(["evolve", "--n", "128", "--output-every", "5", "--dt"])
        .arg((0.25 * h * h).to_string())
        .arg("--T")
        .arg((20.0 * 0.25 * h * h).to_string())
        .arg("--curve")
        .arg(&curve)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
    let inv = std::fs::read_to_string(out.join("invariants.csv")).unwrap();
    let mut lines = inv.lines();
    assert_eq!(
        lines.next(),
        Some("t,length,max_speed_defect,e_gamma_self,impulse_x,impulse_y,impulse_z")
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    for r in &rows {
        assert!((r[1] - 1.0).abs() < 1e-8);
        assert!(r[3].abs() < 1e-9);
    }
    assert!(out.join("curve_00004.csv").exists());

    let st = filament()
        .args([
            "evolve", "--curve", "trefoil", "--dt", "1", "--T", "1", "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(!st.success());
}

#[test]
fn field_batch_evaluates_probes_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let probes = dir.path().join("p.csv");
    std::fs::write(&probes, "x,y,z\n0,0,0\n0,0,0.5\n").unwrap();
    let out = filament()
        .args(["field", "--n", "128", "--epsilon", "0.01", "--points"])
        .arg(&probes)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert!((rows[0][5] - std::f64::consts::PI).abs() < 1e-10);
    assert_eq!(rows[1][2], 0.5);
    assert!(rows[1][5] > 0.0 && rows[1][5] < rows[0][5]);
}

#[test]
fn flatnorm_pair_emits_bracket_json() {
    let out = filament()
        .args([
            "flatnorm",
            "--a",
            "unit-circle",
            "--b",
            "circle:0.2",
            "--n",
            "128",
            "--grid",
            "0",
            "--seed",
            "5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let (lo, up) = (v["lower"].as_f64().unwrap(), v["upper"].as_f64().unwrap());
    assert!(0.0 < lo && lo <= up);
    assert!(v["breakdown"]["ruled_surface"].is_number());
}
