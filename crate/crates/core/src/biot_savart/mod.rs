//! The mollified Biot–Savart field v^ε = ∇×(−Δ)⁻¹(ρ^ε∗μ_Γ) of a closed
//! filament and its vector potential Φ^ε = G∗ρ^ε∗μ_Γ.

mod kernel;
pub(crate) mod quadrature;

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::ClosedCurve;
use crate::Vec3;

pub use kernel::{EtaProfile, Mollifier, ETA_KNOTS};
use quadrature::{integrate, sphere_crossings, LineSetup};

/// Evaluator bundle for one filament at one mollification scale.
#[derive(Debug, Clone)]
pub struct FilamentField {
    curve: Arc<ClosedCurve>,
    mollifier: Mollifier,
    eta: Arc<EtaProfile>,
    circulation: f64,
}

impl FilamentField {
    pub fn new(curve: impl Into<Arc<ClosedCurve>>, epsilon: f64) -> Result<Self> {
        let mollifier = Mollifier::new(epsilon)?;
        Ok(FilamentField {
            curve: curve.into(),
            mollifier,
            eta: Arc::new(EtaProfile::new(mollifier)),
            circulation: 1.0,
        })
    }

    pub fn with_circulation(mut self, c: f64) -> Self {
        self.circulation = c;
        self
    }

    pub fn curve(&self) -> &ClosedCurve {
        &self.curve
    }

    pub fn curve_arc(&self) -> &Arc<ClosedCurve> {
        &self.curve
    }

    pub fn epsilon(&self) -> f64 {
        self.mollifier.epsilon()
    }

    pub fn mollifier(&self) -> Mollifier {
        self.mollifier
    }

    pub fn circulation(&self) -> f64 {
        self.circulation
    }

    pub fn eta_profile(&self) -> &EtaProfile {
        &self.eta
    }

    /// (η^ε∗G)(r).
    pub fn eta_g(&self, r: f64) -> f64 {
        self.eta.value(r)
    }

    fn setup_kinks(&self, x: &Vec3, s0: f64, d: f64, radius: f64) -> ([f64; 2], usize) {
        let mut k = [0.0; 2];
        let mut n = 0;
        if d < radius {
            for u in sphere_crossings(&self.curve, x, s0, d, radius)
                .into_iter()
                .flatten()
            {
                k[n] = u;
                n += 1;
            }
        }
        (k, n)
    }

    /// v^ε(x).
    pub fn velocity(&self, x: &Vec3) -> Vec3 {
        let tp = self.curve.tube_project(x);
        self.velocity_with_foot(x, tp.s, tp.dist)
    }

    /// v^ε(x) given the nearest-point parameter `s0` and distance `d`.
    pub fn velocity_with_foot(&self, x: &Vec3, s0: f64, d: f64) -> Vec3 {
        let eps = self.epsilon();
        let core = eps.max(d);
        let (kinks, nk) = self.setup_kinks(x, s0, d, eps);
        let setup = LineSetup {
            curve: &self.curve,
            target: *x,
            s0,
            core,
            kinks: &kinks[..nk],
            scale: 1.0 / (2.0 * std::f64::consts::PI * core),
        };
        let m = self.mollifier;
        let v = integrate(&setup, &mut |s: f64| {
            let (p, t) = self.curve.point_tangent(s);
            let k = m.kernel(&(x - p)).cross(&t);
            [k.x, k.y, k.z]
        });
        Vec3::new(v[0], v[1], v[2]) * self.circulation
    }

    /// Φ^ε(x).
    pub fn vector_potential(&self, x: &Vec3) -> Vec3 {
        let tp = self.curve.tube_project(x);
        let eps = self.epsilon();
        let core = eps.max(tp.dist);
        let (kinks, nk) = self.setup_kinks(x, tp.s, tp.dist, eps);
        let setup = LineSetup {
            curve: &self.curve,
            target: *x,
            s0: tp.s,
            core,
            kinks: &kinks[..nk],
            scale: 1.0,
        };
        let m = self.mollifier;
        let v = integrate(&setup, &mut |s: f64| {
            let (p, t) = self.curve.point_tangent(s);
            let g = m.potential((x - p).norm());
            [g * t.x, g * t.y, g * t.z]
        });
        Vec3::new(v[0], v[1], v[2]) * self.circulation
    }

    /// Batched velocities, deterministic in input order.
    pub fn velocities(&self, xs: &[Vec3]) -> Vec<Vec3> {
        xs.par_iter().map(|x| self.velocity(x)).collect()
    }

    /// Inner line integral ∮ (η^ε∗G)(γ(s)−γ(t)) γ'(s)·γ'(t) dt at fixed s.
    pub(crate) fn energy_density(&self, s: f64) -> f64 {
        let eps = self.epsilon();
        let (x, t0) = self.curve.point_tangent(s);
        let (kinks, nk) = self.setup_kinks(&x, s, 0.0, 2.0 * eps);
        let setup = LineSetup {
            curve: &self.curve,
            target: x,
            s0: s,
            core: eps,
            kinks: &kinks[..nk],
            scale: self.eta.value(0.0) * eps,
        };
        let v = integrate(&setup, &mut |u: f64| {
            let (p, t) = self.curve.point_tangent(u);
            [self.eta.value((x - p).norm()) * t0.dot(&t)]
        });
        v[0] * self.circulation * self.circulation
    }
}

/// Superposition of several filament fields.
#[derive(Debug, Clone, Default)]
pub struct FilamentBundle {
    pub fields: Vec<FilamentField>,
}

impl FilamentBundle {
    pub fn new(fields: Vec<FilamentField>) -> Self {
        FilamentBundle { fields }
    }

    pub fn velocity(&self, x: &Vec3) -> Vec3 {
        self.fields
            .iter()
            .fold(Vec3::zeros(), |a, f| a + f.velocity(x))
    }

    pub fn vector_potential(&self, x: &Vec3) -> Vec3 {
        self.fields
            .iter()
            .fold(Vec3::zeros(), |a, f| a + f.vector_potential(x))
    }
}

/// Parses `x,y,z` probe rows; a non-numeric first line is taken as a header.
pub fn parse_probes(text: &str) -> Result<Vec<Vec3>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|t| t.trim().parse::<f64>()).collect();
        match vals {
            Ok(v) if v.len() == 3 => out.push(Vec3::new(v[0], v[1], v[2])),
            Err(_) if out.is_empty() && i == 0 => continue,
            _ => {
                return Err(Error::Parse(format!(
                    "probe line {}: expected x,y,z, got `{line}`",
                    i + 1
                )))
            }
        }
    }
    Ok(out)
}

/// Velocities at the probes as CSV `x,y,z,vx,vy,vz`, in input order.
pub fn velocity_csv(field: &FilamentField, probes: &[Vec3]) -> String {
    let vs: Vec<Vec3> = probes.par_iter().map(|x| field.velocity(x)).collect();
    let mut s = String::from("x,y,z,vx,vy,vz\n");
    for (x, v) in probes.iter().zip(&vs) {
        s.push_str(&format!(
            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
            x.x, x.y, x.z, v.x, v.y, v.z
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BuiltinCurve;
    use std::f64::consts::PI;

    #[test]
    fn circle_center_value() {
        let r = 0.4;
        let c = BuiltinCurve::Circle { radius: r }.build(256).unwrap();
        let f = FilamentField::new(c, 0.01).unwrap();
        let v = f.velocity(&Vec3::zeros());
        assert!((v - Vec3::new(0.0, 0.0, 1.0 / (2.0 * r))).norm() < 1e-12);
    }

    #[test]
    fn velocity_is_curl_of_potential() {
        let c = BuiltinCurve::Trefoil.build(256).unwrap();
        let f = FilamentField::new(c, 0.01).unwrap();
        for x in [Vec3::new(0.05, 0.02, 0.1), Vec3::new(-0.1, 0.12, -0.03)] {
            let h = 1e-4;
            let d = |i: usize| {
                let mut e = Vec3::zeros();
                e[i] = h;
                (f.vector_potential(&(x + e)) - f.vector_potential(&(x - e))) / (2.0 * h)
            };
            let (dx, dy, dz) = (d(0), d(1), d(2));
            let curl = Vec3::new(dy.z - dz.y, dz.x - dx.z, dx.y - dy.x);
            let v = f.velocity(&x);
            assert!((curl - v).norm() < 1e-5 * v.norm(), "{curl} vs {v}");
        }
    }

    #[test]
    fn mean_value_property_outside_core() {
        let c = Arc::new(BuiltinCurve::Ellipse { a: 0.3, b: 0.2 }.build(256).unwrap());
        let f1 = FilamentField::new(c.clone(), 0.004).unwrap();
        let f2 = FilamentField::new(c.clone(), 0.008).unwrap();
        let x = c.point(0.2) + Vec3::new(0.0, 0.0, 0.02);
        let (a, b) = (f1.velocity(&x), f2.velocity(&x));
        assert!((a - b).norm() < 1e-9 * a.norm());
    }

    #[test]
    fn bounded_inside_core() {
        let eps = 0.01;
        let c = BuiltinCurve::UnitCircle.build(256).unwrap();
        let f = FilamentField::new(c, eps).unwrap();
        let x = f.curve().samples()[7];
        let v = f.velocity(&x);
        assert!(v.norm() < 1.0 / (4.0 * PI * eps * eps) * 2.0 * eps);
        assert!(v.norm().is_finite());
    }

    #[test]
    fn probe_batch_round_trip() {
        let c = BuiltinCurve::UnitCircle.build(128).unwrap();
        let f = FilamentField::new(c, 0.01).unwrap();
        let probes = parse_probes("x,y,z\n0,0,0\n0.1, 0.2, 0.3\n").unwrap();
        assert_eq!(probes.len(), 2);
        let csv = velocity_csv(&f, &probes);
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows.len(), 3);
        let v: Vec<f64> = rows[1].split(',').map(|t| t.parse().unwrap()).collect();
        assert!((v[5] - PI).abs() < 1e-10);
        assert!(parse_probes("1,2\n").is_err());
    }
}
