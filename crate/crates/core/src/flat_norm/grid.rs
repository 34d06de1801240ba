//! Periodic staggered grid: potentials on edges, vorticity on faces.
//!
//! Component `c` of an edge field at index (i, j, k) lives on the edge from
//! node (i, j, k) in direction e_c; component `c` of a face field lives on
//! the face through node (i, j, k) with normal e_c. All differences are
//! forward differences, so in Fourier space grad, curl and div have the
//! symbols d, [d]× and d·, with d_c = (e^{iθ_c} − 1)/h.

use std::f64::consts::{E, FRAC_1_PI, PI, SQRT_2};

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ClosedCurve;
use crate::numeric::pairwise_sum;
use crate::Vec3;

use super::Fft3;

/// Cubic periodic grid of n³ cells with spacing h and lower corner `origin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub h: f64,
    pub origin: Vec3,
}

impl GridSpec {
    /// Grid of n³ cells covering the box [center − half, center + half]³.
    /// The origin is shifted by an irrational fraction of h so that sampled
    /// curves do not pass through grid edges.
    pub fn centered(center: Vec3, half: f64, n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::arg("n", "grid needs at least 4 cells per side"));
        }
        if !(half > 0.0) {
            return Err(Error::arg("half", "box half-width must be positive"));
        }
        let h = 2.0 * half / n as f64;
        let jitter = Vec3::new(FRAC_1_PI, 0.1 * E, 0.1 * SQRT_2) * h;
        Ok(GridSpec {
            n,
            h,
            origin: center - Vec3::repeat(half) + jitter,
        })
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    pub fn node(&self, i: usize, j: usize, k: usize) -> Vec3 {
        self.origin + Vec3::new(i as f64, j as f64, k as f64) * self.h
    }

    /// Centre of face `c` through node (i, j, k).
    pub fn face_center(&self, c: usize, i: usize, j: usize, k: usize) -> Vec3 {
        let mut p = self.node(i, j, k) + Vec3::repeat(0.5 * self.h);
        p[c] -= 0.5 * self.h;
        p
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(3)
    }

    fn symbol(&self) -> Vec<Complex64> {
        (0..self.n)
            .map(|m| {
                let th = 2.0 * PI * m as f64 / self.n as f64;
                (Complex64::new(th.cos(), th.sin()) - 1.0) / self.h
            })
            .collect()
    }
}

/// Three component arrays on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaggeredField {
    pub spec: GridSpec,
    pub comps: [Vec<f64>; 3],
}

impl StaggeredField {
    pub fn zeros(spec: GridSpec) -> Self {
        let z = vec![0.0; spec.len()];
        StaggeredField {
            spec,
            comps: [z.clone(), z.clone(), z],
        }
    }

    /// h³ Σ_nodes |(φ_x, φ_y, φ_z)|, grouping the three edges leaving each
    /// node.
    pub fn mass(&self) -> f64 {
        let [a, b, c] = &self.comps;
        let v: Vec<f64> = (0..self.spec.len())
            .into_par_iter()
            .map(|i| (a[i] * a[i] + b[i] * b[i] + c[i] * c[i]).sqrt())
            .collect();
        pairwise_sum(&v) * self.spec.cell_volume()
    }

    pub fn node_norms(&self) -> Vec<f64> {
        let [a, b, c] = &self.comps;
        (0..self.spec.len())
            .map(|i| (a[i] * a[i] + b[i] * b[i] + c[i] * c[i]).sqrt())
            .collect()
    }

    fn shift(&self, comp: usize, axis: usize, i: usize, j: usize, k: usize) -> f64 {
        let n = self.spec.n;
        let mut idx = [i, j, k];
        idx[axis] = (idx[axis] + 1) % n;
        self.comps[comp][self.spec.index(idx[0], idx[1], idx[2])]
    }

    /// Discrete curl of an edge field, as a face field.
    pub fn curl(&self) -> StaggeredField {
        let s = self.spec;
        let n = s.n;
        let mut out = StaggeredField::zeros(s);
        for (c, comp) in out.comps.iter_mut().enumerate() {
            let (a, b) = ((c + 1) % 3, (c + 2) % 3);
            comp.par_iter_mut().enumerate().for_each(|(idx, o)| {
                let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
                let here_b = self.comps[b][idx];
                let here_a = self.comps[a][idx];
                *o =
                    (self.shift(b, a, i, j, k) - here_b - self.shift(a, b, i, j, k) + here_a) / s.h;
            });
        }
        out
    }

    /// Discrete divergence of a face field, at cell centres.
    pub fn divergence(&self) -> Vec<f64> {
        let s = self.spec;
        let n = s.n;
        (0..s.len())
            .into_par_iter()
            .map(|idx| {
                let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
                (0..3)
                    .map(|c| self.shift(c, c, i, j, k) - self.comps[c][idx])
                    .sum::<f64>()
                    / s.h
            })
            .collect()
    }

    /// `passes` applications of the separable [1, 2, 1]/4 filter to every
    /// component. The filter commutes with the difference operators, so
    /// divergence-free fields stay divergence-free.
    pub fn smoothed(&self, passes: usize) -> StaggeredField {
        let s = self.spec;
        let n = s.n;
        let mut out = self.clone();
        for _ in 0..passes {
            for axis in 0..3 {
                for comp in out.comps.iter_mut() {
                    let src = comp.clone();
                    comp.par_iter_mut().enumerate().for_each(|(idx, o)| {
                        let mut ijk = [idx / (n * n), (idx / n) % n, idx % n];
                        let m = ijk[axis];
                        ijk[axis] = (m + 1) % n;
                        let up = src[s.index(ijk[0], ijk[1], ijk[2])];
                        ijk[axis] = (m + n - 1) % n;
                        let dn = src[s.index(ijk[0], ijk[1], ijk[2])];
                        *o = 0.25 * (up + dn) + 0.5 * src[idx];
                    });
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |a, x| a.max(x.abs()))
    }

    /// ∫ ξ·dω for a face field: h³ Σ ξ_c(face centre)·ω_c.
    pub fn pair(&self, xi: impl Fn(&Vec3) -> Vec3 + Sync) -> f64 {
        let s = self.spec;
        let n = s.n;
        let v: Vec<f64> = (0..s.len())
            .into_par_iter()
            .map(|idx| {
                let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
                (0..3)
                    .filter(|&c| self.comps[c][idx] != 0.0)
                    .map(|c| xi(&s.face_center(c, i, j, k))[c] * self.comps[c][idx])
                    .sum()
            })
            .collect();
        pairwise_sum(&v) * s.cell_volume()
    }

    /// Face field of the current `weight·μ_Γ`: signed crossings of the
    /// sampled polygon through each face, divided by h². Exactly
    /// divergence-free for a closed polygon.
    pub fn rasterize(spec: GridSpec, curves: &[(&ClosedCurve, f64)], refine: usize) -> Self {
        let mut out = StaggeredField::zeros(spec);
        let n = spec.n as i64;
        let wrap = |m: i64| m.rem_euclid(n) as usize;
        for (curve, weight) in curves {
            let m = curve.n() * refine.max(1);
            let pts: Vec<Vec3> = (0..m)
                .map(|i| (curve.point(i as f64 * curve.length() / m as f64) - spec.origin) / spec.h)
                .collect();
            for a in 0..m {
                let p = pts[a];
                let q = pts[(a + 1) % m];
                for c in 0..3 {
                    let (lo, hi) = (p[c].min(q[c]), p[c].max(q[c]));
                    let sign = if q[c] > p[c] { 1.0 } else { -1.0 };
                    let mut plane = lo.floor() as i64 + 1;
                    while (plane as f64) <= hi {
                        let t = (plane as f64 - p[c]) / (q[c] - p[c]);
                        if t > 0.0 && t <= 1.0 {
                            let x = p + (q - p) * t;
                            let mut idx = [0usize; 3];
                            for d in 0..3 {
                                idx[d] = if d == c {
                                    wrap(plane)
                                } else {
                                    wrap(x[d].floor() as i64)
                                };
                            }
                            out.comps[c][spec.index(idx[0], idx[1], idx[2])] += sign * weight;
                        }
                        plane += 1;
                    }
                }
            }
        }
        let inv = 1.0 / (spec.h * spec.h);
        for comp in &mut out.comps {
            for x in comp.iter_mut() {
                *x *= inv;
            }
        }
        out
    }
}

/// Projection onto the affine set {φ : curl φ = ω} of edge fields, diagonal
/// in Fourier space.
pub(crate) struct CurlProjector {
    spec: GridSpec,
    fft: Fft3,
    omega_hat: [Vec<Complex64>; 3],
    sym: Vec<Complex64>,
}

impl CurlProjector {
    pub fn new(omega: &StaggeredField) -> Self {
        let spec = omega.spec;
        let fft = Fft3::new(spec.n);
        let omega_hat = std::array::from_fn(|c| fft.forward_real(&omega.comps[c]));
        CurlProjector {
            spec,
            fft,
            omega_hat,
            sym: spec.symbol(),
        }
    }

    fn d(&self, idx: usize) -> [Complex64; 3] {
        let n = self.spec.n;
        [
            self.sym[idx / (n * n)],
            self.sym[(idx / n) % n],
            self.sym[idx % n],
        ]
    }

    /// φ ← φ + (d̄ × r)/|d|², r = curl φ − ω in Fourier space.
    pub fn project(&self, phi: &StaggeredField) -> StaggeredField {
        let mut hat: [Vec<Complex64>; 3] =
            std::array::from_fn(|c| self.fft.forward_real(&phi.comps[c]));
        let len = self.spec.len();
        let updates: Vec<[Complex64; 3]> = (0..len)
            .into_par_iter()
            .map(|idx| {
                let d = self.d(idx);
                let dn: f64 = d.iter().map(|z| z.norm_sqr()).sum();
                if dn == 0.0 {
                    return [Complex64::new(0.0, 0.0); 3];
                }
                let p = [hat[0][idx], hat[1][idx], hat[2][idx]];
                let cross = |a: [Complex64; 3], b: [Complex64; 3]| {
                    [
                        a[1] * b[2] - a[2] * b[1],
                        a[2] * b[0] - a[0] * b[2],
                        a[0] * b[1] - a[1] * b[0],
                    ]
                };
                let curl = cross(d, p);
                let r = [
                    curl[0] - self.omega_hat[0][idx],
                    curl[1] - self.omega_hat[1][idx],
                    curl[2] - self.omega_hat[2][idx],
                ];
                let dc = [d[0].conj(), d[1].conj(), d[2].conj()];
                let u = cross(dc, r);
                [u[0] / dn, u[1] / dn, u[2] / dn]
            })
            .collect();
        for (c, h) in hat.iter_mut().enumerate() {
            for (x, u) in h.iter_mut().zip(&updates) {
                *x += u[c];
            }
        }
        StaggeredField {
            spec: self.spec,
            comps: std::array::from_fn(|c| self.fft.inverse_real(&hat[c])),
        }
    }
}
