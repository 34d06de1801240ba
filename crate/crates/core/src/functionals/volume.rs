//! Volume quadrature of functionals of v^ε over ℝ³.
//!
//! The domain is split by a smooth cutoff w(dist) into a tube part, integrated
//! in coarea coordinates (s, ρ, θ) around the curve, and an exterior part on
//! an adaptive octree of Gauss–Legendre cells. The tube radius is a fixed
//! fraction of the minimal security radius so the coarea map is injective.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use crate::biot_savart::FilamentField;
use crate::error::{Error, Result};
use crate::numeric::{gl3, gl6, pairwise_sum, smoothstep7};
use crate::Vec3;

use super::energy::k_eps;
use super::testfield::{TensorField, TestField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeOptions {
    /// Tube radius as a fraction of the minimal security radius.
    pub tube_fraction: f64,
    /// Arclength nodes in the tube; `None` uses the curve grid, capped at 256.
    pub tube_arclength_nodes: Option<usize>,
    pub tube_angular_nodes: usize,
    /// Relative tolerance on the summed exterior error estimate.
    pub cell_tol: f64,
    pub max_depth: u32,
    /// Upper bound on the edge of the initial exterior cells.
    pub max_cell: Option<f64>,
    /// Exponent p of the refinement indicator (1 − w)|v|^p.
    pub indicator_power: f64,
}

impl Default for VolumeOptions {
    fn default() -> Self {
        VolumeOptions {
            tube_fraction: 0.25,
            tube_arclength_nodes: None,
            tube_angular_nodes: 16,
            cell_tol: 5e-3,
            max_depth: 8,
            max_cell: None,
            indicator_power: 2.0,
        }
    }
}

impl VolumeOptions {
    /// Defaults with exterior cells no larger than a quarter of the support
    /// radius of the integrand's test field.
    pub fn for_support(radius: f64) -> Self {
        VolumeOptions {
            max_cell: Some(0.25 * radius),
            ..VolumeOptions::default()
        }
    }
}

/// Axis-aligned box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub lo: Vec3,
    pub hi: Vec3,
}

impl Aabb {
    pub fn cube(center: Vec3, half: f64) -> Self {
        let h = Vec3::repeat(half);
        Aabb {
            lo: center - h,
            hi: center + h,
        }
    }

    pub fn volume(&self) -> f64 {
        let d = self.hi - self.lo;
        d.x * d.y * d.z
    }

    fn union(&self, o: &Aabb) -> Aabb {
        Aabb {
            lo: self.lo.inf(&o.lo),
            hi: self.hi.sup(&o.hi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadNode {
    pub x: Vec3,
    pub weight: f64,
    pub v: Vec3,
}

/// Tube radius b and cutoff w: 1 for ρ ≤ b/2, 0 for ρ ≥ b.
#[derive(Debug, Clone, Copy)]
struct Cutoff {
    b: f64,
}

impl Cutoff {
    fn w(&self, rho: f64) -> f64 {
        let h = 0.5 * self.b;
        1.0 - smoothstep7((rho - h) / h)
    }
}

/// Stored quadrature nodes with precomputed velocities, reusable across
/// integrands.
#[derive(Debug, Clone)]
pub struct FieldQuadrature {
    epsilon: f64,
    length: f64,
    tube_radius: f64,
    region: Aabb,
    tube: Vec<QuadNode>,
    exterior: Arc<Vec<QuadNode>>,
}

impl FieldQuadrature {
    pub fn build(field: &FilamentField, region: Aabb, opts: &VolumeOptions) -> Result<Self> {
        let curve = field.curve();
        let rmin = curve.min_security_radius();
        if !(rmin > 0.0) {
            return Err(Error::DegenerateCurve(
                "zero security radius; volume quadrature needs a smooth curve".into(),
            ));
        }
        let cut = Cutoff {
            b: opts.tube_fraction * rmin,
        };
        let tube = tube_nodes(field, cut, opts);
        let exterior = Arc::new(exterior_nodes(field, cut, region, opts, &tube));
        Ok(FieldQuadrature {
            epsilon: field.epsilon(),
            length: curve.length(),
            tube_radius: cut.b,
            region,
            tube,
            exterior,
        })
    }

    /// Same region for another ε on the same curve. Exterior nodes are reused
    /// when both scales lie inside the inner tube, where v^ε is independent
    /// of ε.
    pub fn rebuild(&self, field: &FilamentField, opts: &VolumeOptions) -> Result<Self> {
        let half = 0.5 * self.tube_radius;
        let same_curve = (field.curve().length() - self.length).abs() <= 1e-14 * self.length;
        if !(same_curve && self.epsilon < half && field.epsilon() < half) {
            return FieldQuadrature::build(field, self.region, opts);
        }
        let cut = Cutoff {
            b: self.tube_radius,
        };
        Ok(FieldQuadrature {
            epsilon: field.epsilon(),
            length: self.length,
            tube_radius: self.tube_radius,
            region: self.region,
            tube: tube_nodes(field, cut, opts),
            exterior: self.exterior.clone(),
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn tube_radius(&self) -> f64 {
        self.tube_radius
    }

    pub fn node_count(&self) -> usize {
        self.tube.len() + self.exterior.len()
    }

    /// ∫ f(x, v^ε(x)) dx.
    pub fn integrate(&self, f: impl Fn(&Vec3, &Vec3) -> f64 + Sync) -> f64 {
        let part = |nodes: &[QuadNode]| {
            let vals: Vec<f64> = nodes.par_iter().map(|n| n.weight * f(&n.x, &n.v)).collect();
            pairwise_sum(&vals)
        };
        part(&self.tube) + part(&self.exterior)
    }

    /// ∫ φ : v⊗v dx.
    pub fn momentum_flux(&self, phi: &TensorField) -> f64 {
        self.integrate(|x, v| (phi.value(x) * v).dot(v))
    }

    /// ℓ_{E,φ} = ∫ (∇×φ)·v dx.
    pub fn moment(&self, phi: &TestField) -> f64 {
        self.integrate(|x, v| phi.curl(x).dot(v))
    }

    /// {H^ε_E, ℓ_φ} = k_ε ∫ ∇(∇×φ) : v⊗v dx.
    pub fn bracket(&self, phi: &TestField) -> Result<f64> {
        let k = k_eps(self.epsilon, self.length)?;
        Ok(k * self.integrate(|x, v| (phi.grad_curl(x) * v).dot(v)))
    }
}

fn orthonormal_frame(t: &Vec3, n_hint: &Vec3) -> (Vec3, Vec3) {
    let t = t.normalize();
    let mut n = n_hint - t * t.dot(n_hint);
    if n.norm() < 1e-8 {
        let helper = if t.x.abs() < 0.9 {
            Vec3::x()
        } else {
            Vec3::y()
        };
        n = helper - t * t.dot(&helper);
    }
    let n = n.normalize();
    (n, t.cross(&n))
}

fn radial_breaks(eps: f64, b: f64) -> Vec<f64> {
    let mut br = vec![0.0, 0.5 * eps, eps, 0.5 * b, 0.75 * b, b];
    let mut e = 2.0 * eps;
    while e < 0.5 * b {
        br.push(e);
        e *= 2.0;
    }
    br.retain(|x| *x <= b);
    br.sort_by(|a, b| a.total_cmp(b));
    br.dedup_by(|a, c| (*a - *c).abs() <= 1e-12 * b);
    br
}

fn tube_nodes(field: &FilamentField, cut: Cutoff, opts: &VolumeOptions) -> Vec<QuadNode> {
    let curve = field.curve();
    let ns = opts
        .tube_arclength_nodes
        .unwrap_or_else(|| curve.n().min(256));
    let hs = curve.length() / ns as f64;
    let nth = opts.tube_angular_nodes;
    let breaks = radial_breaks(field.epsilon(), cut.b);
    let rule = gl6();
    let radial: Vec<(f64, f64)> = breaks
        .windows(2)
        .flat_map(|w| rule.map(w[0], w[1]).collect::<Vec<_>>())
        .collect();
    let per_s = radial.len() * nth;
    (0..ns * per_s)
        .into_par_iter()
        .map(|idx| {
            let i = idx / per_s;
            let rem = idx % per_s;
            let (k, j) = (rem / nth, rem % nth);
            let s = i as f64 * hs;
            let (p, t) = curve.point_tangent(s);
            let g2 = curve.second(s);
            let (n1, n2) = orthonormal_frame(&t, &g2);
            let (rho, wr) = radial[k];
            let th = 2.0 * PI * (j as f64 + 0.5) / nth as f64;
            let dir = n1 * th.cos() + n2 * th.sin();
            let x = p + dir * rho;
            let jac = rho * (1.0 - rho * dir.dot(&g2));
            let weight = hs * wr * (2.0 * PI / nth as f64) * jac * cut.w(rho);
            let v = field.velocity_with_foot(&x, s, rho);
            QuadNode { x, weight, v }
        })
        .collect()
}

#[derive(Clone, Copy)]
struct Cell {
    lo: Vec3,
    size: f64,
    depth: u32,
}

fn cell_nodes(field: &FilamentField, cut: Cutoff, c: &Cell) -> Vec<QuadNode> {
    let rule = gl3();
    let pts: Vec<(f64, f64)> = rule.map(0.0, c.size).collect();
    let mut out = Vec::with_capacity(27);
    for &(a, wa) in &pts {
        for &(b, wb) in &pts {
            for &(z, wz) in &pts {
                let x = c.lo + Vec3::new(a, b, z);
                let tp = field.curve().tube_project(&x);
                let w = 1.0 - cut.w(tp.dist);
                if w <= 0.0 {
                    continue;
                }
                let v = field.velocity_with_foot(&x, tp.s, tp.dist);
                out.push(QuadNode {
                    x,
                    weight: wa * wb * wz * w,
                    v,
                });
            }
        }
    }
    out
}

fn children(c: &Cell) -> [Cell; 8] {
    let h = 0.5 * c.size;
    std::array::from_fn(|k| Cell {
        lo: c.lo + Vec3::new((k & 1) as f64, ((k >> 1) & 1) as f64, ((k >> 2) & 1) as f64) * h,
        size: h,
        depth: c.depth + 1,
    })
}

fn indicator(nodes: &[QuadNode], p: f64) -> f64 {
    nodes.iter().map(|n| n.weight * n.v.norm().powf(p)).sum()
}

/// A leaf cell with the nodes of its eight children; the difference between
/// its own rule and the children's is the error estimate.
struct Leaf {
    cell: Cell,
    kids: Vec<Vec<QuadNode>>,
    value: f64,
    err: f64,
}

fn make_leaf(field: &FilamentField, cut: Cutoff, cell: Cell, own: f64, p: f64) -> Leaf {
    let kids: Vec<Vec<QuadNode>> = children(&cell)
        .iter()
        .map(|k| cell_nodes(field, cut, k))
        .collect();
    let value: f64 = kids.iter().map(|n| indicator(n, p)).sum();
    Leaf {
        cell,
        kids,
        value,
        err: (own - value).abs(),
    }
}

fn exterior_nodes(
    field: &FilamentField,
    cut: Cutoff,
    region: Aabb,
    opts: &VolumeOptions,
    tube: &[QuadNode],
) -> Vec<QuadNode> {
    let p = opts.indicator_power;
    let d = region.hi - region.lo;
    let mut size0 = d.max() / 8.0;
    if let Some(h) = opts.max_cell {
        size0 = size0.min(h);
    }
    let counts = d.map(|x| ((x / size0).ceil() as usize).max(1));
    let mut roots = Vec::new();
    for i in 0..counts.x {
        for j in 0..counts.y {
            for k in 0..counts.z {
                roots.push(Cell {
                    lo: region.lo + Vec3::new(i as f64, j as f64, k as f64) * size0,
                    size: size0,
                    depth: 0,
                });
            }
        }
    }
    let mut leaves: Vec<Leaf> = roots
        .into_par_iter()
        .map(|c| {
            let own = indicator(&cell_nodes(field, cut, &c), p);
            make_leaf(field, cut, c, own, p)
        })
        .collect();
    let tube_total = indicator(tube, p);
    loop {
        let total = tube_total + leaves.iter().map(|l| l.value).sum::<f64>();
        let err: f64 = leaves.iter().map(|l| l.err).sum();
        if err <= opts.cell_tol * total.abs() {
            break;
        }
        // Refine the leaves carrying half of the estimated error.
        let mut order: Vec<usize> = (0..leaves.len())
            .filter(|&i| leaves[i].cell.depth < opts.max_depth)
            .collect();
        if order.is_empty() {
            break;
        }
        order.sort_by(|&a, &b| leaves[b].err.total_cmp(&leaves[a].err).then(a.cmp(&b)));
        let mut acc = 0.0;
        let mut chosen = Vec::new();
        for i in order {
            if acc >= 0.5 * err {
                break;
            }
            acc += leaves[i].err;
            chosen.push(i);
        }
        chosen.sort_unstable();
        let mut picked = Vec::with_capacity(chosen.len());
        for &i in chosen.iter().rev() {
            picked.push(leaves.swap_remove(i));
        }
        picked.reverse();
        let fresh: Vec<Leaf> = picked
            .into_par_iter()
            .flat_map_iter(|leaf| {
                let kids = children(&leaf.cell);
                kids.into_iter()
                    .zip(leaf.kids)
                    .map(|(c, own)| make_leaf(field, cut, c, indicator(&own, p), p))
                    .collect::<Vec<_>>()
            })
            .collect();
        leaves.extend(fresh);
    }
    leaves
        .into_iter()
        .flat_map(|l| l.kids.into_iter().flatten())
        .collect()
}

/// Box covering the supports of the given fields.
pub fn support_box(fields: &[TensorField]) -> Option<Aabb> {
    let mut acc: Option<Aabb> = None;
    for f in fields {
        let (c, r) = f.support()?;
        let b = Aabb::cube(c, r);
        acc = Some(acc.map_or(b, |a| a.union(&b)));
    }
    acc
}

/// ∫ φ : v^ε⊗v^ε dx for a single compactly supported φ.
pub fn momentum_flux(field: &FilamentField, phi: &TensorField) -> Result<f64> {
    let region = support_box(std::slice::from_ref(phi))
        .ok_or_else(|| Error::arg("phi", "must be compactly supported"))?;
    let (_, r) = phi.support().unwrap_or((Vec3::zeros(), 1.0));
    Ok(FieldQuadrature::build(field, region, &VolumeOptions::for_support(r))?.momentum_flux(phi))
}

/// ℓ_{E,φ}(∇×v^ε) = ∫ (∇×φ)·v^ε dx.
pub fn moment_field(field: &FilamentField, phi: &TestField) -> Result<f64> {
    let (c, r) = phi
        .support()
        .ok_or_else(|| Error::arg("phi", "must be compactly supported"))?;
    Ok(
        FieldQuadrature::build(field, Aabb::cube(c, r), &VolumeOptions::for_support(r))?
            .moment(phi),
    )
}

/// k_ε ∫ ∇(∇×φ) : v^ε⊗v^ε dx.
pub fn bracket_euler(field: &FilamentField, phi: &TestField) -> Result<f64> {
    let (c, r) = phi
        .support()
        .ok_or_else(|| Error::arg("phi", "must be compactly supported"))?;
    FieldQuadrature::build(field, Aabb::cube(c, r), &VolumeOptions::for_support(r))?.bracket(phi)
}

/// ‖v^ε‖_{L^q}, q ∈ (2, ∞].
pub fn lq_norm(field: &FilamentField, q: f64) -> Result<f64> {
    if q.is_nan() || q <= 2.0 {
        return Err(Error::arg("q", format!("must exceed 2, got {q}")));
    }
    if q.is_infinite() {
        return Ok(sup_norm(field));
    }
    let curve = field.curve();
    let center = curve.centroid();
    let ext = curve.extent();
    let opts = VolumeOptions {
        indicator_power: q,
        ..VolumeOptions::default()
    };
    let rmin = curve.min_security_radius();
    if !(rmin > 0.0) {
        return Err(Error::DegenerateCurve(
            "zero security radius; volume quadrature needs a smooth curve".into(),
        ));
    }
    let cut = Cutoff {
        b: opts.tube_fraction * rmin,
    };
    let tube = tube_nodes(field, cut, &opts);
    let tube_total = indicator(&tube, q);
    // Outside the box |v| ≤ L/(4π(|x−c| − ext)²), so the tail is at most
    // 4π lq^q (half/a)² a^{3−2q}/(2q−3) with a = half − ext. The tube part
    // bounds the total from below.
    let lq = curve.length() / (4.0 * PI);
    let tail = |half: f64| {
        let a = half - ext;
        4.0 * PI * lq.powf(q) * (half / a).powi(2) * a.powf(3.0 - 2.0 * q) / (2.0 * q - 3.0)
    };
    let mut half = 2.0 * ext;
    while tail(half) > 1e-4 * tube_total && half < 64.0 * ext {
        half *= 1.25;
    }
    let region = Aabb::cube(center, half);
    let exterior = exterior_nodes(field, cut, region, &opts, &tube);
    let total = indicator(&tube, q) + indicator(&exterior, q);
    Ok((total + tail(half)).powf(1.0 / q))
}

/// sup |v^ε| by probe maximization over the tube near dist ≈ ε.
pub fn sup_norm(field: &FilamentField) -> f64 {
    let curve = field.curve();
    let eps = field.epsilon();
    let ns = curve.n().min(128);
    let nth = 8;
    let hs = curve.length() / ns as f64;
    let top = (4.0 * eps).min(0.25 * curve.min_security_radius().max(eps));
    let vals: Vec<f64> = (0..ns * nth)
        .into_par_iter()
        .map(|idx| {
            let s = (idx / nth) as f64 * hs;
            let th = 2.0 * PI * (idx % nth) as f64 / nth as f64;
            let (p, t) = curve.point_tangent(s);
            let (n1, n2) = orthonormal_frame(&t, &curve.second(s));
            let dir = n1 * th.cos() + n2 * th.sin();
            let speed = |rho: f64| field.velocity_with_foot(&(p + dir * rho), s, rho).norm();
            // Coarse scan then golden refinement around the best probe.
            let m = 16;
            let (mut bi, mut bv) = (0, 0.0);
            for k in 0..=m {
                let v = speed(top * k as f64 / m as f64);
                if v > bv {
                    bi = k;
                    bv = v;
                }
            }
            let lo = top * (bi.max(1) - 1) as f64 / m as f64;
            let hi = top * (bi + 1).min(m) as f64 / m as f64;
            let (_, neg) = crate::numeric::golden_min(lo, hi, 1e-6 * eps, |r| -speed(r));
            bv.max(-neg)
        })
        .collect();
    vals.into_iter().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::curve::curve_flux;
    use crate::geometry::BuiltinCurve;
    use crate::Mat3;

    #[test]
    fn antisymmetric_flux_vanishes_and_identity_is_close() {
        let c = BuiltinCurve::UnitCircle.build(128).unwrap();
        let eps = 2f64.powi(-6);
        let f = FilamentField::new(c.clone(), eps).unwrap();
        let cover = TensorField::plateau(c.centroid(), 1.1 * c.extent(), Mat3::identity());
        let anti = TensorField::plateau(
            c.centroid(),
            1.1 * c.extent(),
            Mat3::new(0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0),
        );
        let opts = VolumeOptions::for_support(cover.support().unwrap().1);
        let q = FieldQuadrature::build(
            &f,
            support_box(std::slice::from_ref(&cover)).unwrap(),
            &opts,
        )
        .unwrap();
        let k = k_eps(eps, 1.0).unwrap();
        let flux = k * q.momentum_flux(&cover);
        assert!((flux - curve_flux(&c, &cover)).abs() < 8.0 * k);
        assert!(q.momentum_flux(&anti).abs() < 1e-12 * flux.abs().max(1.0));
    }

    #[test]
    fn field_moment_matches_curve_moment() {
        let c = BuiltinCurve::UnitCircle.build(128).unwrap();
        let eps = 2f64.powi(-5);
        let f = FilamentField::new(c.clone(), eps).unwrap();
        let phi = TestField::plateau(c.samples()[5], 0.05, Vec3::new(0.3, 1.0, -0.2));
        let field = moment_field(&f, &phi).unwrap();
        let curve = crate::functionals::moment_curve(&c, &phi);
        assert!(
            (field - curve).abs() <= eps * phi.curl_sup_norm(),
            "{field} vs {curve}"
        );
    }

    #[test]
    fn brackets_of_far_field_are_small() {
        let c = BuiltinCurve::UnitCircle.build(128).unwrap();
        let f = FilamentField::new(c.clone(), 2f64.powi(-6)).unwrap();
        let phi = TestField::plateau(Vec3::new(1.5, 0.0, 0.0), 0.05, Vec3::new(1.0, 0.0, 1.0));
        assert!(bracket_euler(&f, &phi).unwrap().abs() < 1e-6);
        assert_eq!(crate::functionals::bracket_bcf(&c, &phi), 0.0);
    }

    #[test]
    fn lq_rejects_small_exponent_and_scales_linearly() {
        let c = Arc::new(BuiltinCurve::UnitCircle.build(64).unwrap());
        let f = FilamentField::new(c.clone(), 0.05).unwrap();
        assert!(lq_norm(&f, 2.0).is_err());
        let one = sup_norm(&f);
        let two = sup_norm(&f.clone().with_circulation(2.0));
        assert!((two - 2.0 * one).abs() < 1e-12 * one);
    }
}
