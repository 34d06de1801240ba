//! C ABI over `filament-core`.
//!
//! Objects are opaque handles created by `*_new`/constructor calls and
//! released with the matching `*_free`. Every fallible call returns a
//! [`FilamentStatus`]; on failure the thread-local message from
//! [`filament_last_error`] describes the cause. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::sync::Arc;

use filament_core::bcf::{evolve, EvolveOptions, FlowTrajectory};
use filament_core::biot_savart::FilamentField as CoreField;
use filament_core::functionals::kinetic_energy_l2;
use filament_core::harness::{self, ExperimentConfig};
use filament_core::{BuiltinCurve, ClosedCurve, Error, Vec3};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilamentStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DegenerateCurve = 3,
    PolygonMode = 4,
    OutsideTube = 5,
    StepTooLarge = 6,
    Parse = 7,
    Io = 8,
    Config = 9,
    Internal = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilamentCurveKind {
    UnitCircle = 0,
    /// `p1` = radius.
    Circle = 1,
    /// `p1`, `p2` = semi-axes.
    Ellipse = 2,
    Trefoil = 3,
    /// `p1` = amplitude, `p2` = mode.
    PerturbedCircle = 4,
}

/// Opaque closed curve.
pub struct FilamentCurve(Arc<ClosedCurve>);

/// Opaque mollified Biot–Savart field.
pub struct FilamentField(CoreField);

/// Opaque flow trajectory.
pub struct FilamentTrajectory(FlowTrajectory);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FilamentStatus {
    match e {
        Error::DegenerateCurve(_) => FilamentStatus::DegenerateCurve,
        Error::InvalidArgument { .. }
        | Error::NotDivergenceFree(_)
        | Error::UnknownSeries { .. } => FilamentStatus::InvalidArgument,
        Error::OutsideTube { .. } => FilamentStatus::OutsideTube,
        Error::PolygonMode => FilamentStatus::PolygonMode,
        Error::StepTooLarge { .. } => FilamentStatus::StepTooLarge,
        Error::Parse(_) => FilamentStatus::Parse,
        Error::Io(_) => FilamentStatus::Io,
        Error::Config(_) => FilamentStatus::Config,
    }
}

enum Fail {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FilamentStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FilamentStatus::Ok,
        Ok(Err(Fail::Null(name))) => {
            set_error(format!("null pointer: `{name}`"));
            FilamentStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            FilamentStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(name))
}

unsafe fn out<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(name))
}

unsafe fn read_vec3(p: *const f64, name: &'static str) -> Result<Vec3, Fail> {
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    let s = std::slice::from_raw_parts(p, 3);
    Ok(Vec3::new(s[0], s[1], s[2]))
}

unsafe fn write_vec3(p: *mut f64, v: &Vec3, name: &'static str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    std::slice::from_raw_parts_mut(p, 3).copy_from_slice(v.as_slice());
    Ok(())
}

unsafe fn read_str<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail::Core(Error::Parse(format!("`{name}` is not UTF-8: {e}"))))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn filament_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a built-in curve with `n` samples.
///
/// # Safety
/// `out_curve` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn filament_curve_builtin(
    kind: FilamentCurveKind,
    p1: f64,
    p2: f64,
    n: usize,
    out_curve: *mut *mut FilamentCurve,
) -> FilamentStatus {
    guard(|| {
        let slot = out(out_curve, "out_curve")?;
        let b = match kind {
            FilamentCurveKind::UnitCircle => BuiltinCurve::UnitCircle,
            FilamentCurveKind::Circle => BuiltinCurve::Circle { radius: p1 },
            FilamentCurveKind::Ellipse => BuiltinCurve::Ellipse { a: p1, b: p2 },
            FilamentCurveKind::Trefoil => BuiltinCurve::Trefoil,
            FilamentCurveKind::PerturbedCircle => {
                if !(p2 >= 0.0 && p2.fract() == 0.0) {
                    return Err(Error::InvalidArgument {
                        name: "p2",
                        reason: "mode must be a whole number".into(),
                    }
                    .into());
                }
                BuiltinCurve::PerturbedCircle {
                    amplitude: p1,
                    mode: p2 as u32,
                }
            }
        };
        *slot = boxed(FilamentCurve(Arc::new(b.build(n)?)));
        Ok(())
    })
}

/// Builds a curve from `count` closed-curve points given as packed xyz
/// triples, resampled to `n` arclength-uniform samples.
///
/// # Safety
/// `xyz` must point to `3 * count` doubles; `out_curve` must be writable.
#[no_mangle]
pub unsafe extern "C" fn filament_curve_from_points(
    xyz: *const f64,
    count: usize,
    n: usize,
    out_curve: *mut *mut FilamentCurve,
) -> FilamentStatus {
    guard(|| {
        let slot = out(out_curve, "out_curve")?;
        if xyz.is_null() {
            return Err(Fail::Null("xyz"));
        }
        let pts: Vec<Vec3> = std::slice::from_raw_parts(xyz, 3 * count)
            .chunks_exact(3)
            .map(|c| Vec3::new(c[0], c[1], c[2]))
            .collect();
        *slot = boxed(FilamentCurve(Arc::new(ClosedCurve::resample_arclength(
            &pts, n,
        )?)));
        Ok(())
    })
}

/// Loads a `.csv` or `.json` curve file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out_curve` must be writable.
#[no_mangle]
pub unsafe extern "C" fn filament_curve_load(
    path: *const c_char,
    out_curve: *mut *mut FilamentCurve,
) -> FilamentStatus {
    guard(|| {
        let slot = out(out_curve, "out_curve")?;
        let p = read_str(path, "path")?;
        *slot = boxed(FilamentCurve(Arc::new(ClosedCurve::load(Path::new(p))?)));
        Ok(())
    })
}

/// # Safety
/// `curve` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn filament_curve_free(curve: *mut FilamentCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Number of samples.
///
/// # Safety
/// `curve` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn filament_curve_len(
    curve: *const FilamentCurve,
    out_n: *mut usize,
) -> FilamentStatus {
    guard(|| {
        *out(out_n, "out_n")? = deref(curve, "curve")?.0.n();
        Ok(())
    })
}

/// Total length.
///
/// # Safety
/// `curve` must be a live handle; `out_length` writable.
#[no_mangle]
pub unsafe extern "C" fn filament_curve_length(
    curve: *const FilamentCurve,
    out_length: *mut f64,
) -> FilamentStatus {
    guard(|| {
        *out(out_length, "out_length")? = deref(curve, "curve")?.0.length();
        Ok(())
    })
}

/// Sample `i` as xyz.
///
/// # Safety
/// `curve` must be a live handle; `out_xyz` must hold 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn filament_curve_sample(
    curve: *const FilamentCurve,
    i: usize,
    out_xyz: *mut f64,
) -> FilamentStatus {
    guard(|| {
        let c = &deref(curve, "curve")?.0;
        if i >= c.n() {
            return Err(Error::InvalidArgument {
                name: "i",
                reason: format!("index {i} out of range {}", c.n()),
            }
            .into());
        }
        write_vec3(out_xyz, &c.samples()[i], "out_xyz")
    })
}

/// Weak L^{1,∞} norm of the curvature majorant and the smallest security
/// radius.
///
/// # Safety
/// `curve` must be a live handle; both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn filament_curve_geometry(
    curve: *const FilamentCurve,
    out_weak_norm: *mut f64,
    out_min_radius: *mut f64,
) -> FilamentStatus {
    guard(|| {
        let c = &deref(curve, "curve")?.0;
        *out(out_weak_norm, "out_weak_norm")? = c.weak_norm();
        *out(out_min_radius, "out_min_radius")? = c.min_security_radius();
        Ok(())
    })
}

/// Mollified field of `curve` at scale `epsilon`. The field keeps its own
/// reference to the curve.
///
/// # Safety
/// `curve` must be a live handle; `out_field` writable.
#[no_mangle]
pub unsafe extern "C" fn filament_field_new(
    curve: *const FilamentCurve,
    epsilon: f64,
    out_field: *mut *mut FilamentField,
) -> FilamentStatus {
    guard(|| {
        let slot = out(out_field, "out_field")?;
        let c = deref(curve, "curve")?.0.clone();
        *slot = boxed(FilamentField(CoreField::new(c, epsilon)?));
        Ok(())
    })
}

/// # Safety
/// `field` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn filament_field_free(field: *mut FilamentField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Velocity at `x`.
///
/// # Safety
/// `field` must be a live handle; `x` and `out_v` must hold 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn filament_field_velocity(
    field: *const FilamentField,
    x: *const f64,
    out_v: *mut f64,
) -> FilamentStatus {
    guard(|| {
        let f = &deref(field, "field")?.0;
        let v = f.velocity(&read_vec3(x, "x")?);
        write_vec3(out_v, &v, "out_v")
    })
}

/// ∫|v^ε|² over space.
///
/// # Safety
/// `field` must be a live handle; `out_energy` writable.
#[no_mangle]
pub unsafe extern "C" fn filament_field_energy(
    field: *const FilamentField,
    out_energy: *mut f64,
) -> FilamentStatus {
    guard(|| {
        *out(out_energy, "out_energy")? = kinetic_energy_l2(&deref(field, "field")?.0);
        Ok(())
    })
}

/// Integrates the binormal flow to `t_final` with step `dt`, storing every
/// state.
///
/// # Safety
/// `curve` must be a live handle; `out_traj` writable.
#[no_mangle]
pub unsafe extern "C" fn filament_evolve(
    curve: *const FilamentCurve,
    dt: f64,
    t_final: f64,
    out_traj: *mut *mut FilamentTrajectory,
) -> FilamentStatus {
    guard(|| {
        let slot = out(out_traj, "out_traj")?;
        let c = &deref(curve, "curve")?.0;
        *slot = boxed(FilamentTrajectory(evolve(
            c,
            &EvolveOptions::new(dt, t_final),
        )?));
        Ok(())
    })
}

/// # Safety
/// `traj` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn filament_trajectory_free(traj: *mut FilamentTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Number of stored states.
///
/// # Safety
/// `traj` must be a live handle; `out_n` writable.
#[no_mangle]
pub unsafe extern "C" fn filament_trajectory_len(
    traj: *const FilamentTrajectory,
    out_n: *mut usize,
) -> FilamentStatus {
    guard(|| {
        *out(out_n, "out_n")? = deref(traj, "traj")?.0.len();
        Ok(())
    })
}

/// State `k` as a new curve handle (free it separately) and its time.
///
/// # Safety
/// `traj` must be a live handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn filament_trajectory_state(
    traj: *const FilamentTrajectory,
    k: usize,
    out_t: *mut f64,
    out_curve: *mut *mut FilamentCurve,
) -> FilamentStatus {
    guard(|| {
        let t = &deref(traj, "traj")?.0;
        if k >= t.len() {
            return Err(Error::InvalidArgument {
                name: "k",
                reason: format!("state {k} out of range {}", t.len()),
            }
            .into());
        }
        *out(out_t, "out_t")? = t.times[k];
        *out(out_curve, "out_curve")? = boxed(FilamentCurve(t.states[k].clone()));
        Ok(())
    })
}

/// Runs the verification harness on a JSON configuration and returns the
/// JSON report. `out_passed` receives 1 iff every record passed.
///
/// # Safety
/// `config_json` must be NUL-terminated; outputs writable. Release the
/// report with [`filament_string_free`].
#[no_mangle]
pub unsafe extern "C" fn filament_verify_json(
    config_json: *const c_char,
    out_report: *mut *mut c_char,
    out_passed: *mut i32,
) -> FilamentStatus {
    guard(|| {
        let cfg = ExperimentConfig::from_json(read_str(config_json, "config_json")?)?;
        let report = harness::run(&cfg)?;
        let text = CString::new(report.to_json()).map_err(|e| Error::Parse(e.to_string()))?;
        *out(out_passed, "out_passed")? = i32::from(report.passed());
        *out(out_report, "out_report")? = text.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn filament_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
