//! Nearest-point projection onto the curve and the tube-coordinate
//! gradient ∇ζ.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ClosedCurve;
use crate::error::{Error, Result};
use crate::numeric::golden_min;
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubePoint {
    pub s: f64,
    pub dist: f64,
    pub inside: bool,
}

impl ClosedCurve {
    /// Index of the nearest sample; the lowest index wins ties.
    fn nearest_sample(&self, x: &Vec3) -> usize {
        let mut best = 0;
        let mut bd = f64::INFINITY;
        for (i, p) in self.samples().iter().enumerate() {
            let d = (p - x).norm_squared();
            if d < bd {
                bd = d;
                best = i;
            }
        }
        best
    }

    fn refine_smooth(&self, x: &Vec3, i0: usize) -> (f64, f64) {
        let h = self.spacing();
        let s0 = self.param(i0);
        let (a, b) = (s0 - h, s0 + h);
        let mut t = s0;
        let mut converged = false;
        for _ in 0..30 {
            let (p, d1) = self.point_tangent(t);
            let d2 = self.second(t);
            let r = p - x;
            let g = r.dot(&d1);
            let gp = d1.norm_squared() + r.dot(&d2);
            if gp <= 0.0 {
                break;
            }
            let step = g / gp;
            let tn = t - step;
            if tn < a || tn > b {
                break;
            }
            t = tn;
            if step.abs() < 1e-15 * self.length() {
                converged = true;
                break;
            }
        }
        if !converged {
            let (tm, _) = golden_min(a, b, 1e-13 * self.length(), |u| {
                (self.point(u) - x).norm_squared()
            });
            t = tm;
        }
        let s = t.rem_euclid(self.length());
        (s, (self.point(s) - x).norm())
    }

    fn project_polygon(&self, x: &Vec3) -> (f64, f64) {
        let (verts, cum) = self.polygon_vertices().expect("polygon");
        let nv = verts.len();
        let mut best = (0.0, f64::INFINITY);
        for k in 0..nv {
            let a = verts[k];
            let d = verts[(k + 1) % nv] - a;
            let len = cum[k + 1] - cum[k];
            let u = ((x - a).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
            let dist = (a + d * u - x).norm();
            if dist < best.1 {
                best = ((cum[k] + u * len).rem_euclid(self.length()), dist);
            }
        }
        best
    }

    /// Global nearest point on the curve; `inside` marks the quarter
    /// security-radius tube where the minimizer is unique.
    pub fn tube_project(&self, x: &Vec3) -> TubePoint {
        let (s, dist) = if self.is_polygon() {
            self.project_polygon(x)
        } else {
            let i0 = self.nearest_sample(x);
            self.refine_smooth(x, i0)
        };
        let inside = dist < 0.25 * self.security_radius_at(s);
        TubePoint { s, dist, inside }
    }

    /// ∇ζ(x) = γ'(ζ)/(1 − (x − γ(ζ))·γ''(ζ)).
    pub fn grad_zeta(&self, x: &Vec3) -> Result<Vec3> {
        if self.is_polygon() {
            return Err(Error::PolygonMode);
        }
        let tp = self.tube_project(x);
        if !tp.inside {
            return Err(Error::OutsideTube {
                dist: tp.dist,
                radius: 0.25 * self.security_radius_at(tp.s),
            });
        }
        let g = self.point(tp.s);
        let den = 1.0 - (x - g).dot(&self.second(tp.s));
        Ok(self.tangent(tp.s) / den)
    }

    /// h·#{i : |γ(s_i) − x| < r}.
    pub fn ball_hit_length(&self, x: &Vec3, r: f64) -> f64 {
        let r2 = r * r;
        let count = self
            .samples()
            .iter()
            .filter(|p| (*p - x).norm_squared() < r2)
            .count();
        count as f64 * self.spacing()
    }

    /// Distance from `x` to the sampled curve refined to the continuum.
    pub fn distance(&self, x: &Vec3) -> f64 {
        self.tube_project(x).dist
    }
}

/// Monte-Carlo estimate of |{x : dist(x, Γ) < r}| by uniform sampling of
/// the bounding box grown by r.
pub fn tube_volume_mc(curve: &ClosedCurve, r: f64, samples: usize, rng: &mut impl Rng) -> f64 {
    let (lo, hi) = curve.bbox();
    let lo = lo - Vec3::repeat(r);
    let hi = hi + Vec3::repeat(r);
    let ext = hi - lo;
    let vol = ext.x * ext.y * ext.z;
    let mut hits = 0usize;
    for _ in 0..samples {
        let x = Vec3::new(
            lo.x + ext.x * rng.gen::<f64>(),
            lo.y + ext.y * rng.gen::<f64>(),
            lo.z + ext.z * rng.gen::<f64>(),
        );
        let near = curve
            .samples()
            .iter()
            .any(|p| (p - x).norm_squared() < r * r);
        if near || curve.distance(&x) < r {
            hits += 1;
        }
    }
    vol * hits as f64 / samples as f64
}
