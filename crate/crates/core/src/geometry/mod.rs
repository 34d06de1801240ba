//! Closed curves sampled uniformly in arclength, their derivative tables and
//! the curve-intrinsic quantities: security radius, κ*, weak-L^{1,∞} norm,
//! tube projection.

mod builtin;
mod io;
mod radius;
pub mod spectral;
mod tube;

use std::sync::{Arc, OnceLock};

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::wrap_centered;
use crate::{Mat3, Vec3};

pub use builtin::BuiltinCurve;
pub use io::CurveFile;
pub use radius::{weak_l1inf, GeometryProfile};
pub use tube::{tube_volume_mc, TubePoint};

/// Upsampling factor of the fine evaluation tables.
const FINE_FACTOR: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Orientation {
    #[default]
    Forward,
    Reversed,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Forward => Orientation::Reversed,
            Orientation::Reversed => Orientation::Forward,
        }
    }
}

#[derive(Debug, Clone)]
struct Polygon {
    vertices: Vec<Vec3>,
    /// Arclength position of each vertex, plus L at the end.
    cum: Vec<f64>,
    /// Per-sample corner flag.
    corner: Vec<bool>,
}

impl Polygon {
    fn segment_at(&self, s: f64) -> usize {
        let nv = self.vertices.len();
        match self.cum.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(k) => k.min(nv - 1),
            Err(k) => k.saturating_sub(1).min(nv - 1),
        }
    }

    fn direction(&self, k: usize) -> Vec3 {
        let nv = self.vertices.len();
        (self.vertices[(k + 1) % nv] - self.vertices[k]).normalize()
    }

    fn point(&self, s: f64) -> Vec3 {
        let k = self.segment_at(s);
        self.vertices[k] + self.direction(k) * (s - self.cum[k])
    }
}

#[derive(Debug, Clone)]
enum Shape {
    Smooth { coeffs: Arc<[Vec<Complex64>; 3]> },
    Polygon(Arc<Polygon>),
}

/// Values of γ and its first four derivatives on a grid `FINE_FACTOR` times
/// finer than the samples; off-grid evaluation is quintic Hermite on these.
#[derive(Debug, Clone)]
struct FineTable {
    h: f64,
    d: [Vec<Vec3>; 5],
}

/// Closed curve sampled at N points uniformly spaced in arclength.
#[derive(Debug, Clone)]
pub struct ClosedCurve {
    samples: Vec<Vec3>,
    length: f64,
    d1: Vec<Vec3>,
    d2: Vec<Vec3>,
    d3: Vec<Vec3>,
    orientation: Orientation,
    shape: Shape,
    fine: OnceLock<Arc<FineTable>>,
    profile: OnceLock<Arc<GeometryProfile>>,
}

fn validate_points(points: &[Vec3]) -> Result<f64> {
    if points.iter().any(|p| !p.iter().all(|x| x.is_finite())) {
        return Err(Error::DegenerateCurve("non-finite coordinate".into()));
    }
    let mut distinct = 0;
    let mut total = 0.0;
    for i in 0..points.len() {
        let c = (points[(i + 1) % points.len()] - points[i]).norm();
        if c > 0.0 {
            distinct += 1;
        }
        total += c;
    }
    if distinct < 8 {
        return Err(Error::DegenerateCurve(format!(
            "need at least 8 distinct points, got {distinct}"
        )));
    }
    if total <= 0.0 || !total.is_finite() {
        return Err(Error::DegenerateCurve("polyline has zero length".into()));
    }
    Ok(total)
}

/// Points at `m` equally spaced positions along a closed polyline.
fn polyline_resample(points: &[Vec3], m: usize) -> Vec<Vec3> {
    let n = points.len();
    let mut cum = Vec::with_capacity(n + 1);
    cum.push(0.0);
    for i in 0..n {
        let c = (points[(i + 1) % n] - points[i]).norm();
        cum.push(cum[i] + c);
    }
    let total = cum[n];
    let mut out = Vec::with_capacity(m);
    let mut k = 0;
    for j in 0..m {
        let s = total * j as f64 / m as f64;
        while k + 1 < n && cum[k + 1] <= s {
            k += 1;
        }
        let seg = cum[k + 1] - cum[k];
        let u = if seg > 0.0 { (s - cum[k]) / seg } else { 0.0 };
        out.push(points[k] + (points[(k + 1) % n] - points[k]) * u);
    }
    out
}

#[inline]
fn quintic(f0: Vec3, f1: Vec3, d0: Vec3, d1: Vec3, s0: Vec3, s1: Vec3, u: f64) -> Vec3 {
    let u2 = u * u;
    let u3 = u2 * u;
    let u4 = u3 * u;
    let u5 = u4 * u;
    let h0 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
    let h1 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
    let h2 = 0.5 * (u2 - 3.0 * u3 + 3.0 * u4 - u5);
    let h3 = 0.5 * (u3 - 2.0 * u4 + u5);
    let h4 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
    let h5 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;
    f0 * h0 + d0 * h1 + s0 * h2 + s1 * h3 + d1 * h4 + f1 * h5
}

impl ClosedCurve {
    /// Builds a smooth curve from samples already uniform in arclength.
    pub(crate) fn from_arclength_samples(samples: Vec<Vec3>, length: f64) -> Result<Self> {
        let n = samples.len();
        if n < 8 {
            return Err(Error::DegenerateCurve(format!(
                "need at least 8 samples, got {n}"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::DegenerateCurve(format!("invalid length {length}")));
        }
        let coeffs = spectral::forward(&samples);
        let d1 = spectral::derivative(&coeffs, length, 1);
        let d2 = spectral::derivative(&coeffs, length, 2);
        let d3 = spectral::derivative(&coeffs, length, 3);
        Ok(ClosedCurve {
            samples,
            length,
            d1,
            d2,
            d3,
            orientation: Orientation::Forward,
            shape: Shape::Smooth {
                coeffs: Arc::new(coeffs),
            },
            fine: OnceLock::new(),
            profile: OnceLock::new(),
        })
    }

    /// Samples assumed uniform in arclength; the length is recovered from
    /// the spectral speed.
    pub fn from_uniform_samples(samples: Vec<Vec3>) -> Result<Self> {
        validate_points(&samples)?;
        let coeffs = spectral::forward(&samples);
        let dt = spectral::derivative(&coeffs, 1.0, 1);
        let speed: Vec<f64> = dt.iter().map(|v| v.norm()).collect();
        let length = crate::numeric::pairwise_sum(&speed) / speed.len() as f64;
        Self::from_arclength_samples(samples, length)
    }

    /// Resamples an ordered closed point list at `n` points uniform in
    /// arclength of its smooth periodic interpolant.
    pub fn resample_arclength(points: &[Vec3], n: usize) -> Result<Self> {
        validate_points(points)?;
        if n < 8 {
            return Err(Error::arg("n", "at least 8 samples required"));
        }
        let m = points.len();
        let chords: Vec<f64> = (0..m)
            .map(|i| (points[(i + 1) % m] - points[i]).norm())
            .collect();
        let cmin = chords.iter().cloned().fold(f64::INFINITY, f64::min);
        let cmax = chords.iter().cloned().fold(0.0, f64::max);
        let base = if cmin > 0.0 && cmax / cmin <= 1.05 {
            points.to_vec()
        } else {
            polyline_resample(points, (4 * m).max(2 * n))
        };
        let (samples, length) = spectral::arclength_resample(&base, n);
        Self::from_arclength_samples(samples, length)
    }

    /// Smooth curve from a parametrization t ∈ [0, 1) ↦ R³.
    pub fn from_parametric(f: impl Fn(f64) -> Vec3, n: usize) -> Result<Self> {
        let m = (4 * n).max(2048);
        let pts: Vec<Vec3> = (0..m).map(|i| f(i as f64 / m as f64)).collect();
        validate_points(&pts)?;
        let (samples, length) = spectral::arclength_resample(&pts, n);
        Self::from_arclength_samples(samples, length)
    }

    /// Piecewise-linear curve through `vertices`, sampled at `n` points
    /// uniform in arclength. The polyline length is preserved exactly and
    /// samples landing on a vertex with a turning angle are flagged as
    /// corners.
    pub fn polygon(vertices: &[Vec3], n: usize) -> Result<Self> {
        let length = validate_points(vertices)?;
        if n < 8 {
            return Err(Error::arg("n", "at least 8 samples required"));
        }
        let verts: Vec<Vec3> = {
            let mut v = Vec::with_capacity(vertices.len());
            for (i, p) in vertices.iter().enumerate() {
                if (vertices[(i + 1) % vertices.len()] - p).norm() > 0.0 {
                    v.push(*p);
                }
            }
            v
        };
        let nv = verts.len();
        let mut cum = Vec::with_capacity(nv + 1);
        cum.push(0.0);
        for i in 0..nv {
            cum.push(cum[i] + (verts[(i + 1) % nv] - verts[i]).norm());
        }
        let poly = Polygon {
            vertices: verts,
            cum,
            corner: vec![false; n],
        };
        let h = length / n as f64;
        let mut samples = Vec::with_capacity(n);
        let mut d1 = Vec::with_capacity(n);
        let mut corner = vec![false; n];
        for (i, flag) in corner.iter_mut().enumerate() {
            let s = i as f64 * h;
            samples.push(poly.point(s));
            let k = poly.segment_at(s);
            d1.push(poly.direction(k));
            let at_vertex =
                (s - poly.cum[k]).abs() <= 1e-9 * h || (poly.cum[k + 1] - s).abs() <= 1e-9 * h;
            if at_vertex {
                let v = if (s - poly.cum[k]).abs() <= 1e-9 * h {
                    k
                } else {
                    (k + 1) % nv
                };
                let before = poly.direction((v + nv - 1) % nv);
                let after = poly.direction(v);
                *flag = (after - before).norm() > 1e-12;
            }
        }
        let poly = Polygon { corner, ..poly };
        Ok(ClosedCurve {
            samples,
            length,
            d1,
            d2: vec![Vec3::zeros(); n],
            d3: vec![Vec3::zeros(); n],
            orientation: Orientation::Forward,
            shape: Shape::Polygon(Arc::new(poly)),
            fine: OnceLock::new(),
            profile: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Sample spacing h = L/N.
    pub fn spacing(&self) -> f64 {
        self.length / self.samples.len() as f64
    }

    pub fn param(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    pub fn samples(&self) -> &[Vec3] {
        &self.samples
    }

    pub fn tangents(&self) -> &[Vec3] {
        &self.d1
    }

    pub fn second_derivatives(&self) -> &[Vec3] {
        &self.d2
    }

    pub fn third_derivatives(&self) -> &[Vec3] {
        &self.d3
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_polygon(&self) -> bool {
        matches!(self.shape, Shape::Polygon(_))
    }

    /// True when sample `i` sits on a polygon corner.
    pub fn is_corner(&self, i: usize) -> bool {
        match &self.shape {
            Shape::Polygon(p) => p.corner[i],
            Shape::Smooth { .. } => false,
        }
    }

    pub(crate) fn polygon_vertices(&self) -> Option<(&[Vec3], &[f64])> {
        match &self.shape {
            Shape::Polygon(p) => Some((&p.vertices, &p.cum)),
            Shape::Smooth { .. } => None,
        }
    }

    pub fn centroid(&self) -> Vec3 {
        self.samples.iter().fold(Vec3::zeros(), |a, p| a + p) / self.n() as f64
    }

    fn fine(&self) -> &FineTable {
        self.fine.get_or_init(|| {
            let coeffs = match &self.shape {
                Shape::Smooth { coeffs } => coeffs,
                Shape::Polygon(_) => unreachable!("fine tables exist only for smooth curves"),
            };
            let m = FINE_FACTOR * self.n();
            let d = [0, 1, 2, 3, 4].map(|k| spectral::upsample(coeffs, self.length, m, k));
            Arc::new(FineTable {
                h: self.length / m as f64,
                d,
            })
        })
    }

    #[inline]
    fn locate(&self, s: f64) -> (usize, usize, f64, &FineTable) {
        let ft = self.fine();
        let m = ft.d[0].len();
        let t = s.rem_euclid(self.length) / ft.h;
        let j = (t.floor() as usize).min(m - 1);
        (j, (j + 1) % m, t - j as f64, ft)
    }

    #[inline]
    fn hermite(&self, s: f64, order: usize) -> Vec3 {
        let (j, k, u, ft) = self.locate(s);
        let h = ft.h;
        let (a, b, c) = (&ft.d[order], &ft.d[order + 1], &ft.d[order + 2]);
        quintic(
            a[j],
            a[k],
            b[j] * h,
            b[k] * h,
            c[j] * h * h,
            c[k] * h * h,
            u,
        )
    }

    /// γ(s) at an arbitrary parameter.
    pub fn point(&self, s: f64) -> Vec3 {
        match &self.shape {
            Shape::Polygon(p) => p.point(s.rem_euclid(self.length)),
            Shape::Smooth { .. } => self.hermite(s, 0),
        }
    }

    /// γ'(s) at an arbitrary parameter.
    pub fn tangent(&self, s: f64) -> Vec3 {
        match &self.shape {
            Shape::Polygon(p) => p.direction(p.segment_at(s.rem_euclid(self.length))),
            Shape::Smooth { .. } => self.hermite(s, 1),
        }
    }

    /// γ''(s); zero on polygon segments.
    pub fn second(&self, s: f64) -> Vec3 {
        match &self.shape {
            Shape::Polygon(_) => Vec3::zeros(),
            Shape::Smooth { .. } => self.hermite(s, 2),
        }
    }

    /// γ'''(s); cubic Hermite on the fine tables.
    pub fn third(&self, s: f64) -> Vec3 {
        match &self.shape {
            Shape::Polygon(_) => Vec3::zeros(),
            Shape::Smooth { .. } => {
                let (j, k, u, ft) = self.locate(s);
                let h = ft.h;
                let (a, b) = (&ft.d[3], &ft.d[4]);
                let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
                let h10 = u * (1.0 - u) * (1.0 - u);
                let h01 = u * u * (3.0 - 2.0 * u);
                let h11 = u * u * (u - 1.0);
                a[j] * h00 + b[j] * (h10 * h) + a[k] * h01 + b[k] * (h11 * h)
            }
        }
    }

    /// Point and tangent together (the hot path of the line quadratures).
    #[inline]
    pub fn point_tangent(&self, s: f64) -> (Vec3, Vec3) {
        match &self.shape {
            Shape::Polygon(_) => (self.point(s), self.tangent(s)),
            Shape::Smooth { .. } => {
                let (j, k, u, ft) = self.locate(s);
                let h = ft.h;
                let d = &ft.d;
                let p = quintic(
                    d[0][j],
                    d[0][k],
                    d[1][j] * h,
                    d[1][k] * h,
                    d[2][j] * h * h,
                    d[2][k] * h * h,
                    u,
                );
                let t = quintic(
                    d[1][j],
                    d[1][k],
                    d[2][j] * h,
                    d[2][k] * h,
                    d[3][j] * h * h,
                    d[3][k] * h * h,
                    u,
                );
                (p, t)
            }
        }
    }

    /// Same geometry traversed backwards; sample 0 is kept.
    pub fn reversed(&self) -> Self {
        let n = self.n();
        let idx = |i: usize| (n - i) % n;
        let mut out = match &self.shape {
            Shape::Polygon(p) => {
                let mut verts = vec![p.vertices[0]];
                verts.extend(p.vertices[1..].iter().rev());
                ClosedCurve::polygon(&verts, n).expect("reversal of a valid polygon")
            }
            Shape::Smooth { .. } => {
                let samples = (0..n).map(|i| self.samples[idx(i)]).collect();
                ClosedCurve::from_arclength_samples(samples, self.length)
                    .expect("reversal of a valid curve")
            }
        };
        out.orientation = self.orientation.flipped();
        out
    }

    pub(crate) fn with_orientation(mut self, o: Orientation) -> Self {
        self.orientation = o;
        self
    }

    /// Points and tangents of the spectral interpolant on the refined grid,
    /// with its spacing. Polygons return their samples.
    pub(crate) fn fine_points(&self) -> (&[Vec3], &[Vec3], f64) {
        match &self.shape {
            Shape::Polygon(_) => (&self.samples, &self.d1, self.spacing()),
            Shape::Smooth { .. } => {
                let ft = self.fine();
                (&ft.d[0], &ft.d[1], ft.h)
            }
        }
    }

    /// Rigid translation by `z`.
    pub fn translated(&self, z: Vec3) -> Self {
        let mut c = self.clone();
        for p in &mut c.samples {
            *p += z;
        }
        c.fine = OnceLock::new();
        c.profile = self.profile.clone();
        match &mut c.shape {
            Shape::Smooth { coeffs } => {
                let mut k = (**coeffs).clone();
                for d in 0..3 {
                    k[d][0] += Complex64::new(z[d], 0.0);
                }
                *coeffs = Arc::new(k);
            }
            Shape::Polygon(p) => {
                let mut q = (**p).clone();
                for v in &mut q.vertices {
                    *v += z;
                }
                *p = Arc::new(q);
            }
        }
        c
    }

    /// Image under x ↦ α·x.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::arg("alpha", "scale factor must be positive"));
        }
        match &self.shape {
            Shape::Smooth { .. } => {
                let samples = self.samples.iter().map(|p| p * alpha).collect();
                ClosedCurve::from_arclength_samples(samples, self.length * alpha)
            }
            Shape::Polygon(p) => {
                let v: Vec<Vec3> = p.vertices.iter().map(|q| q * alpha).collect();
                ClosedCurve::polygon(&v, self.n())
            }
        }
    }

    /// Image under an orthogonal map (rotation or reflection) about the
    /// origin.
    pub fn transformed(&self, q: &Mat3) -> Result<Self> {
        match &self.shape {
            Shape::Smooth { .. } => {
                let samples = self.samples.iter().map(|p| q * p).collect();
                ClosedCurve::from_arclength_samples(samples, self.length)
            }
            Shape::Polygon(p) => {
                let v: Vec<Vec3> = p.vertices.iter().map(|x| q * x).collect();
                ClosedCurve::polygon(&v, self.n())
            }
        }
    }

    /// Same curve with parametrization s ↦ s + σ (smooth curves only).
    pub fn shifted(&self, sigma: f64) -> Result<Self> {
        let coeffs = match &self.shape {
            Shape::Smooth { coeffs } => coeffs,
            Shape::Polygon(_) => return Err(Error::PolygonMode),
        };
        let samples = (0..self.n())
            .map(|i| spectral::eval_point(coeffs, self.length, self.param(i) + sigma).0)
            .collect();
        ClosedCurve::from_arclength_samples(samples, self.length)
    }

    /// Uniform arclength resampling at a new resolution (smooth curves).
    pub fn resampled(&self, n: usize) -> Result<Self> {
        if self.is_polygon() {
            let (v, _) = self.polygon_vertices().expect("polygon");
            return ClosedCurve::polygon(v, n);
        }
        ClosedCurve::resample_arclength(&self.samples, n)
    }

    /// Wrapped parameter difference in (−L/2, L/2].
    pub fn param_diff(&self, a: f64, b: f64) -> f64 {
        wrap_centered(a - b, self.length)
    }

    /// Largest deviation of |γ'| from 1 over the samples.
    pub fn speed_defect(&self) -> f64 {
        self.d1
            .iter()
            .map(|t| (t.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Length of the sampled polygon through the samples.
    pub fn chord_length(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|i| (self.samples[(i + 1) % n] - self.samples[i]).norm())
            .sum()
    }

    /// Radius of the smallest origin-free bounding ball about the centroid.
    pub fn extent(&self) -> f64 {
        let c = self.centroid();
        self.samples
            .iter()
            .map(|p| (p - c).norm())
            .fold(0.0, f64::max)
    }

    /// Axis-aligned bounding box.
    pub fn bbox(&self) -> (Vec3, Vec3) {
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        for p in &self.samples {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_circle(n: usize) -> ClosedCurve {
        BuiltinCurve::Circle {
            radius: 1.0 / (2.0 * PI),
        }
        .build(n)
        .unwrap()
    }

    #[test]
    fn circle_curvature_and_orthogonality() {
        let c = unit_circle(512);
        assert!((c.length() - 1.0).abs() < 1e-13);
        for (t, k) in c.tangents().iter().zip(c.second_derivatives()) {
            assert!((k.norm() - 2.0 * PI).abs() < 1e-8);
            assert!(t.dot(k).abs() < 1e-10);
            assert!((t.norm() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn trefoil_tangent_matches_sixth_order_differences() {
        let c = BuiltinCurve::Trefoil.build(512).unwrap();
        let h = c.spacing();
        let n = c.n();
        let p = c.samples();
        let w = [
            -1.0 / 60.0,
            3.0 / 20.0,
            -3.0 / 4.0,
            0.0,
            3.0 / 4.0,
            -3.0 / 20.0,
            1.0 / 60.0,
        ];
        for i in 0..n {
            let mut fd = Vec3::zeros();
            for (k, wk) in w.iter().enumerate() {
                fd += p[(i + n + k - 3) % n] * *wk;
            }
            fd /= h;
            assert!((fd - c.tangents()[i]).norm() < 1e-7, "i={i}");
        }
    }

    #[test]
    fn off_grid_evaluation_matches_samples_and_is_smooth() {
        let c = BuiltinCurve::Ellipse { a: 0.3, b: 0.2 }.build(256).unwrap();
        for i in 0..c.n() {
            assert!((c.point(c.param(i)) - c.samples()[i]).norm() < 1e-13);
            assert!((c.tangent(c.param(i)) - c.tangents()[i]).norm() < 1e-11);
        }
        let s = 0.123456;
        let e = 1e-5;
        let fd = (c.point(s + e) - c.point(s - e)) / (2.0 * e);
        assert!((fd - c.tangent(s)).norm() < 1e-8);
        let fd2 = (c.tangent(s + e) - c.tangent(s - e)) / (2.0 * e);
        assert!((fd2 - c.second(s)).norm() < 1e-6 * c.second(s).norm().max(1.0));
    }

    #[test]
    fn polygon_preserves_polyline_length() {
        let m = 256;
        let verts: Vec<Vec3> = (0..m)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / m as f64;
                Vec3::new(t.cos(), t.sin(), 0.0)
            })
            .collect();
        let c = ClosedCurve::polygon(&verts, 512).unwrap();
        let exact = 2.0 * m as f64 * (PI / m as f64).sin();
        assert!((c.length() - exact).abs() < 1e-12);
        assert!(c.is_corner(0) && c.is_corner(2) && !c.is_corner(1));
    }

    #[test]
    fn uniform_input_is_a_fixed_point() {
        let n = 128;
        let pts: Vec<Vec3> = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                Vec3::new(t.cos(), t.sin(), 0.0)
            })
            .collect();
        let c = ClosedCurve::resample_arclength(&pts, n).unwrap();
        for (a, b) in c.samples().iter().zip(&pts) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn degenerate_input_is_rejected() {
        let pts = vec![Vec3::new(1.0, 2.0, 3.0); 20];
        assert!(matches!(
            ClosedCurve::resample_arclength(&pts, 64),
            Err(Error::DegenerateCurve(_))
        ));
    }

    #[test]
    fn reversal_flips_tangents_and_orientation() {
        let c = BuiltinCurve::Trefoil.build(128).unwrap();
        let r = c.reversed();
        assert_eq!(r.orientation(), Orientation::Reversed);
        assert!((r.samples()[0] - c.samples()[0]).norm() == 0.0);
        assert!((r.tangents()[0] + c.tangents()[0]).norm() < 1e-9);
        assert!((r.samples()[1] - c.samples()[127]).norm() == 0.0);
    }
}
