use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use filament_ffi::*;

#[test]
fn curve_field_lifecycle() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(
            filament_curve_builtin(FilamentCurveKind::UnitCircle, 0.0, 0.0, 128, &mut c),
            FilamentStatus::Ok
        );
        let mut n = 0;
        let mut len = 0.0;
        assert_eq!(filament_curve_len(c, &mut n), FilamentStatus::Ok);
        assert_eq!(filament_curve_length(c, &mut len), FilamentStatus::Ok);
        assert_eq!(n, 128);
        assert!((len - 1.0).abs() < 1e-12);

        let mut f = ptr::null_mut();
        assert_eq!(filament_field_new(c, 0.05, &mut f), FilamentStatus::Ok);
        // The field holds its own reference to the curve.
        filament_curve_free(c);
        let mut v = [0.0; 3];
        assert_eq!(
            filament_field_velocity(f, [0.0, 0.0, 0.0].as_ptr(), v.as_mut_ptr()),
            FilamentStatus::Ok
        );
        // At the centre of a unit-length ring: Γ/(2R) = π along the axis.
        assert!((v[2].abs() - std::f64::consts::PI).abs() < 1e-6, "{v:?}");
        let mut e = 0.0;
        assert_eq!(filament_field_energy(f, &mut e), FilamentStatus::Ok);
        assert!(e > 0.0);
        filament_field_free(f);
    }
}

#[test]
fn trajectory_states() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(
            filament_curve_builtin(FilamentCurveKind::Trefoil, 0.0, 0.0, 64, &mut c),
            FilamentStatus::Ok
        );
        let h = 1.0 / 64.0;
        let mut t = ptr::null_mut();
        assert_eq!(
            filament_evolve(c, 0.25 * h * h, 4.0 * 0.25 * h * h, &mut t),
            FilamentStatus::Ok
        );
        let mut n = 0;
        filament_trajectory_len(t, &mut n);
        assert_eq!(n, 5);
        let mut s = ptr::null_mut();
        let mut time = 0.0;
        assert_eq!(
            filament_trajectory_state(t, 4, &mut time, &mut s),
            FilamentStatus::Ok
        );
        assert!(time > 0.0);
        let mut p = [0.0; 3];
        assert_eq!(
            filament_curve_sample(s, 0, p.as_mut_ptr()),
            FilamentStatus::Ok
        );
        assert_eq!(
            filament_trajectory_state(t, 5, &mut time, &mut s),
            FilamentStatus::InvalidArgument
        );
        filament_curve_free(s);
        filament_trajectory_free(t);

        let mut big = ptr::null_mut();
        assert_eq!(
            filament_evolve(c, 1.0, 1.0, &mut big),
            FilamentStatus::StepTooLarge
        );
        let msg = CStr::from_ptr(filament_last_error()).to_str().unwrap();
        assert!(msg.contains("stability bound"), "{msg}");
        filament_curve_free(c);
    }
}

#[test]
fn verify_over_the_abi() {
    let cfg = CString::new(r#"{"curve": {"builtin": {"kind": "unit-circle"}}, "run": {"n": 128, "epsilon_exponents": [4, 5, 6], "suites": ["energy"]}}"#).unwrap();
    let bad = CString::new(r#"{"curve": {}, "run": {"epsilons": [0.6]}}"#).unwrap();
    unsafe {
        let mut out = ptr::null_mut();
        let mut passed = -1;
        assert_eq!(
            filament_verify_json(cfg.as_ptr(), &mut out, &mut passed),
            FilamentStatus::Ok
        );
        let report = CStr::from_ptr(out).to_str().unwrap().to_owned();
        filament_string_free(out);
        assert!(report.contains("energy_log_slope"));
        assert!(passed == 0 || passed == 1);
        assert_eq!(
            filament_verify_json(bad.as_ptr(), &mut out, &mut passed),
            FilamentStatus::Config
        );
        assert_eq!(
            filament_verify_json(ptr::null(), &mut out, &mut passed),
            FilamentStatus::NullPointer
        );
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/filament.h");
    assert!(header.exists());
    let src = std::env::temp_dir().join("filament_header_check.c");
    std::fs::write(&src, "#include \"filament.h\"\nint main(void) { FilamentCurve *c = 0; return filament_curve_free(c), 0; }\n").unwrap();
    match Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .status()
    {
        Ok(s) => assert!(s.success()),
        Err(_) => eprintln!("no C compiler; header syntax not checked"),
    }
}
