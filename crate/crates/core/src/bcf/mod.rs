//! Binormal curvature flow ∂_tγ = γ'×γ'', the moment identity along the
//! flow, and the stability machinery built on a flow trajectory.

mod distance;
mod stability;

use std::sync::Arc;

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{bracket_bcf, moment_curve, TestField};
use crate::geometry::{spectral, ClosedCurve};
use crate::numeric::pairwise_sum;
use crate::Vec3;

pub use distance::{curve_distance, CurveDistance};
pub use stability::{RpropProbe, StabilityField};

/// γ'×γ'' at every sample.
pub fn bcf_rhs(curve: &ClosedCurve) -> Result<Vec<Vec3>> {
    if curve.is_polygon() {
        return Err(Error::PolygonMode);
    }
    Ok(curve
        .tangents()
        .iter()
        .zip(curve.second_derivatives())
        .map(|(a, b)| a.cross(b))
        .collect())
}

fn rhs_raw(samples: &[Vec3], period: f64) -> Vec<Vec3> {
    let c = spectral::forward(samples);
    let d1 = spectral::derivative(&c, period, 1);
    let d2 = spectral::derivative(&c, period, 2);
    d1.par_iter()
        .zip(d2.par_iter())
        .map(|(a, b)| a.cross(b))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    pub dt: f64,
    pub t_final: f64,
    pub renorm_every: usize,
    /// Store a state every this many steps (the final state is always kept).
    pub output_every: usize,
    pub stability_c: f64,
}

impl EvolveOptions {
    pub fn new(dt: f64, t_final: f64) -> Self {
        EvolveOptions {
            dt,
            t_final,
            renorm_every: 10,
            output_every: 1,
            stability_c: 0.25,
        }
    }

    /// Largest admissible step for a curve of spacing `h`.
    pub fn max_dt(&self, h: f64) -> f64 {
        self.stability_c * h * h
    }
}

/// Diagnostics attached to each stored state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub t: f64,
    pub length: f64,
    /// max ||γ'| − 1| of the raw samples at this time.
    pub speed_defect: f64,
    /// ½∮γ×γ' ds, conserved by the flow.
    pub impulse: [f64; 3],
}

#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Arc<ClosedCurve>>,
    pub log: Vec<InvariantRecord>,
    /// Step size actually used (t_final divided into whole steps).
    pub dt: f64,
    /// Largest speed defect seen immediately before a renormalization.
    pub max_prerenorm_defect: f64,
    pub renormalizations: usize,
    /// Set when the run stopped early on a non-finite state.
    pub aborted: bool,
}

impl FlowTrajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn length_drift(&self) -> f64 {
        let l0 = self.log[0].length;
        self.log
            .iter()
            .map(|r| (r.length - l0).abs())
            .fold(0.0, f64::max)
    }
}

fn invariants(t: f64, samples: &[Vec3], period: f64) -> InvariantRecord {
    let c = spectral::forward(samples);
    let d1 = spectral::derivative(&c, period, 1);
    let h = period / samples.len() as f64;
    let speed: Vec<f64> = d1.iter().map(|v| v.norm()).collect();
    let length = pairwise_sum(&speed) * h;
    let speed_defect = speed.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let mut impulse = [0.0; 3];
    for (k, out) in impulse.iter_mut().enumerate() {
        let v: Vec<f64> = samples
            .iter()
            .zip(&d1)
            .map(|(p, t)| p.cross(t)[k])
            .collect();
        *out = 0.5 * pairwise_sum(&v) * h;
    }
    InvariantRecord {
        t,
        length,
        speed_defect,
        impulse,
    }
}

/// Explicit RK4 integration of the binormal flow with periodic arclength
/// renormalization.
pub fn evolve(curve: &ClosedCurve, opts: &EvolveOptions) -> Result<FlowTrajectory> {
    if curve.is_polygon() {
        return Err(Error::PolygonMode);
    }
    if !(opts.t_final >= 0.0 && opts.t_final.is_finite()) {
        return Err(Error::arg("t_final", "must be finite and non-negative"));
    }
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(Error::arg("dt", "must be positive"));
    }
    if !(opts.stability_c > 0.0) {
        return Err(Error::arg("stability_c", "must be positive"));
    }
    let bound = opts.max_dt(curve.spacing());
    if opts.dt > bound {
        return Err(Error::StepTooLarge { dt: opts.dt, bound });
    }
    let renorm_every = opts.renorm_every.max(1);
    let output_every = opts.output_every.max(1);
    let steps = (opts.t_final / opts.dt).ceil() as usize;
    let dt = if steps > 0 {
        opts.t_final / steps as f64
    } else {
        opts.dt
    };
    let n = curve.n();
    let orientation = curve.orientation();

    let mut period = curve.length();
    let mut x: Vec<Vec3> = curve.samples().to_vec();
    let mut traj = FlowTrajectory {
        times: vec![0.0],
        states: vec![Arc::new(curve.clone())],
        log: vec![invariants(0.0, &x, period)],
        dt,
        max_prerenorm_defect: 0.0,
        renormalizations: 0,
        aborted: false,
    };

    let axpy = |a: &[Vec3], k: &[Vec3], s: f64| -> Vec<Vec3> {
        a.iter().zip(k).map(|(p, v)| p + v * s).collect()
    };
    for step in 1..=steps {
        let k1 = rhs_raw(&x, period);
        let k2 = rhs_raw(&axpy(&x, &k1, 0.5 * dt), period);
        let k3 = rhs_raw(&axpy(&x, &k2, 0.5 * dt), period);
        let k4 = rhs_raw(&axpy(&x, &k3, dt), period);
        for i in 0..n {
            x[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
        }
        let t = step as f64 * dt;
        if x.iter().any(|p| !p.iter().all(|v| v.is_finite())) {
            warn!("non-finite state at t = {t:.6e}; aborting");
            traj.aborted = true;
            break;
        }
        let renorm = step % renorm_every == 0;
        if renorm {
            let rec = invariants(t, &x, period);
            traj.max_prerenorm_defect = traj.max_prerenorm_defect.max(rec.speed_defect);
            let c = ClosedCurve::resample_arclength(&x, n)?;
            debug!(
                "renormalized at t = {t:.6e}, defect {:.3e}",
                rec.speed_defect
            );
            period = c.length();
            x = c.samples().to_vec();
            traj.renormalizations += 1;
        }
        if step % output_every == 0 || step == steps {
            traj.times.push(t);
            traj.log.push(invariants(t, &x, period));
            let state = ClosedCurve::from_arclength_samples(x.clone(), period)?
                .with_orientation(orientation);
            traj.states.push(Arc::new(state));
        }
    }
    Ok(traj)
}

/// Both sides of d/dt ∮φ·τ = ∮∇(∇×φ):(I − τ⊗τ) at state `k`, the left by
/// central differences over states k ± stride.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// |lhs − rhs|/(|rhs| + 1e−12).
    pub relative: f64,
}

pub fn l2_identity_residual(
    traj: &FlowTrajectory,
    phi: &TestField,
    k: usize,
    stride: usize,
) -> Result<IdentityResidual> {
    let stride = stride.max(1);
    if k < stride || k + stride >= traj.len() {
        return Err(Error::arg(
            "k",
            format!("state {k} is not interior for stride {stride}"),
        ));
    }
    let (a, b) = (&traj.states[k - stride], &traj.states[k + stride]);
    let lhs = (moment_curve(b, phi) - moment_curve(a, phi))
        / (traj.times[k + stride] - traj.times[k - stride]);
    let rhs = bracket_bcf(&traj.states[k], phi);
    Ok(IdentityResidual {
        t: traj.times[k],
        lhs,
        rhs,
        relative: (lhs - rhs).abs() / (rhs.abs() + 1e-12),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BuiltinCurve;
    use std::f64::consts::PI;

    #[test]
    fn circle_rhs_is_binormal_over_radius() {
        let r = 0.3;
        let c = BuiltinCurve::Circle { radius: r }.build(128).unwrap();
        for v in bcf_rhs(&c).unwrap() {
            assert!((v - Vec3::new(0.0, 0.0, 1.0 / r)).norm() < 1e-10);
        }
        for v in bcf_rhs(&c.reversed()).unwrap() {
            assert!((v + Vec3::new(0.0, 0.0, 1.0 / r)).norm() < 1e-10);
        }
    }

    #[test]
    fn rhs_is_normal() {
        let c = BuiltinCurve::Trefoil.build(256).unwrap();
        let rhs = bcf_rhs(&c).unwrap();
        for (v, t) in rhs.iter().zip(c.tangents()) {
            assert!(v.dot(t).abs() < 1e-10 * v.norm().max(1.0));
        }
    }

    #[test]
    fn polygon_is_rejected() {
        let oct: Vec<Vec3> = (0..8)
            .map(|k| {
                let a = k as f64 * PI / 4.0;
                Vec3::new(a.cos(), a.sin(), 0.0)
            })
            .collect();
        let p = ClosedCurve::polygon(&oct, 64).unwrap();
        assert_eq!(bcf_rhs(&p), Err(Error::PolygonMode));
        assert!(matches!(
            evolve(&p, &EvolveOptions::new(1e-6, 1e-5)),
            Err(Error::PolygonMode)
        ));
    }

    #[test]
    fn oversized_step_is_rejected() {
        let c = BuiltinCurve::UnitCircle.build(64).unwrap();
        let h = c.spacing();
        let r = evolve(&c, &EvolveOptions::new(0.3 * h * h, 1e-3));
        assert!(matches!(r, Err(Error::StepTooLarge { .. })));
    }

    #[test]
    fn circle_translates_rigidly() {
        let r = 1.0 / (2.0 * PI);
        let c = BuiltinCurve::Circle { radius: r }.build(128).unwrap();
        let h = c.spacing();
        let t_final = 0.1 * r * r;
        let traj = evolve(&c, &EvolveOptions::new(0.25 * h * h, t_final)).unwrap();
        let last = traj.states.last().unwrap();
        let shift = Vec3::new(0.0, 0.0, t_final / r);
        for (p, q) in last.samples().iter().zip(c.samples()) {
            assert!((p - q - shift).norm() < 1e-9);
        }
        assert!(traj.length_drift() < 1e-10);
        assert!(traj.max_prerenorm_defect < 1e-10);
    }

    #[test]
    fn trefoil_conserves_length_and_impulse() {
        let c = BuiltinCurve::Trefoil.build(128).unwrap();
        let h = c.spacing();
        let mut o = EvolveOptions::new(0.25 * h * h, 2e-4);
        o.output_every = 20;
        let traj = evolve(&c, &o).unwrap();
        assert!(!traj.aborted);
        assert!(traj.length_drift() < 1e-8, "drift {}", traj.length_drift());
        let p0 = traj.log[0].impulse;
        let p1 = traj.log.last().unwrap().impulse;
        for k in 0..3 {
            assert!((p0[k] - p1[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn reversed_flow_returns_to_start() {
        let c = BuiltinCurve::Trefoil.build(128).unwrap();
        let h = c.spacing();
        let mut o = EvolveOptions::new(0.25 * h * h, 1e-4);
        o.output_every = 1000;
        let fwd = evolve(&c, &o).unwrap();
        let back = evolve(&fwd.states.last().unwrap().reversed(), &o).unwrap();
        let end = back.states.last().unwrap().reversed();
        let err = end
            .samples()
            .iter()
            .zip(c.samples())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-6 * c.length(), "round trip error {err}");
    }

    #[test]
    fn moment_identity_along_circle() {
        let c = BuiltinCurve::UnitCircle.build(128).unwrap();
        let h = c.spacing();
        let mut o = EvolveOptions::new(0.25 * h * h, 40.0 * 0.25 * h * h);
        o.renorm_every = 10;
        let traj = evolve(&c, &o).unwrap();
        let phi = TestField::plateau(c.samples()[5], 0.08, Vec3::new(0.4, -0.7, 0.2));
        let r = l2_identity_residual(&traj, &phi, 20, 2).unwrap();
        assert!(r.rhs.abs() > 1e-3);
        assert!(r.relative < 1e-4, "{r:?}");
    }

    #[test]
    fn gradient_field_has_trivial_identity() {
        let c = BuiltinCurve::Trefoil.build(256).unwrap();
        let h = c.spacing();
        let traj = evolve(&c, &EvolveOptions::new(0.25 * h * h, 10.0 * 0.25 * h * h)).unwrap();
        let phi = TestField::Gradient {
            bump: crate::functionals::Bump::new(c.samples()[3], 0.2),
            amplitude: 1.0,
        };
        let r = l2_identity_residual(&traj, &phi, 5, 1).unwrap();
        assert!(r.lhs.abs() < 1e-9 && r.rhs.abs() < 1e-9, "{r:?}");
    }
}
