//! Homogeneous flat norm of differences of filament vorticities, bracketed
//! by a duality lower bound and explicit-potential upper bounds.

mod fft3;
mod grid;

use std::f64::consts::PI;
use std::sync::Arc;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{Bump, RingField, TestField};
use crate::geometry::{weak_l1inf, ClosedCurve};
use crate::numeric::{gauss_legendre, golden_min, pairwise_sum};
use crate::{Mat3, Vec3};

pub(crate) use fft3::Fft3;
use grid::CurlProjector;
pub use grid::{GridSpec, StaggeredField};

/// One weighted filament, optionally mollified by the uniform ball ρ^ε.
#[derive(Debug, Clone)]
pub struct WeightedCurve {
    pub curve: Arc<ClosedCurve>,
    pub weight: f64,
    pub mollifier: Option<f64>,
}

#[derive(Debug, Clone)]
pub enum VorticityMeasure {
    Curves(Vec<WeightedCurve>),
    Grid(StaggeredField),
}

impl VorticityMeasure {
    /// μ_a − μ_b.
    pub fn difference(a: impl Into<Arc<ClosedCurve>>, b: impl Into<Arc<ClosedCurve>>) -> Self {
        VorticityMeasure::Curves(vec![
            WeightedCurve {
                curve: a.into(),
                weight: 1.0,
                mollifier: None,
            },
            WeightedCurve {
                curve: b.into(),
                weight: -1.0,
                mollifier: None,
            },
        ])
    }

    /// ρ^ε∗μ_Γ − μ_Γ.
    pub fn mollification(curve: impl Into<Arc<ClosedCurve>>, epsilon: f64) -> Self {
        let c = curve.into();
        VorticityMeasure::Curves(vec![
            WeightedCurve {
                curve: c.clone(),
                weight: 1.0,
                mollifier: Some(epsilon),
            },
            WeightedCurve {
                curve: c,
                weight: -1.0,
                mollifier: None,
            },
        ])
    }

    /// Rasterizes a curve measure onto the grid, then applies `smoothing`
    /// binomial filter passes. Mollified parts are rasterized unmollified.
    pub fn to_grid(&self, spec: GridSpec, smoothing: usize) -> StaggeredField {
        let raw = match self {
            VorticityMeasure::Grid(g) => g.clone(),
            VorticityMeasure::Curves(parts) => {
                let list: Vec<(&ClosedCurve, f64)> =
                    parts.iter().map(|p| (p.curve.as_ref(), p.weight)).collect();
                StaggeredField::rasterize(spec, &list, 4)
            }
        };
        raw.smoothed(smoothing)
    }

    /// Largest |div ω| relative to max|ω|/h; zero for closed curves.
    pub fn divergence_defect(&self) -> f64 {
        match self {
            VorticityMeasure::Curves(_) => 0.0,
            VorticityMeasure::Grid(g) => {
                let m = g.max_abs();
                if m == 0.0 {
                    return 0.0;
                }
                g.divergence().iter().fold(0.0_f64, |a, d| a.max(d.abs())) * g.spec.h / m
            }
        }
    }

    fn support_points(&self) -> Vec<Vec3> {
        match self {
            VorticityMeasure::Curves(parts) => parts
                .iter()
                .flat_map(|p| p.curve.samples().iter().cloned())
                .collect(),
            VorticityMeasure::Grid(g) => {
                let s = g.spec;
                let n = s.n;
                (0..s.len())
                    .filter(|&i| (0..3).any(|c| g.comps[c][i] != 0.0))
                    .map(|i| s.node(i / (n * n), (i / n) % n, i % n))
                    .collect()
            }
        }
    }

    /// ∫ ξ·dω.
    pub fn pair(&self, xi: &TestField) -> f64 {
        match self {
            VorticityMeasure::Grid(g) => g.pair(|x| xi.value(x)),
            VorticityMeasure::Curves(parts) => parts
                .iter()
                .map(|p| {
                    let c = &p.curve;
                    let vals: Vec<f64> = (0..c.n())
                        .into_par_iter()
                        .map(|i| {
                            let x = c.samples()[i];
                            let v = match p.mollifier {
                                None => xi.value(&x),
                                Some(e) => ball_average(xi, &x, e),
                            };
                            v.dot(&c.tangents()[i])
                        })
                        .collect();
                    p.weight * pairwise_sum(&vals) * c.spacing()
                })
                .sum(),
        }
    }
}

/// (ρ^ε∗ξ)(x) for the uniform ball by a product rule in (r, cos θ, φ).
fn ball_average(xi: &TestField, x: &Vec3, eps: f64) -> Vec3 {
    thread_local! {
        static RULE: (Vec<f64>, Vec<f64>) = gauss_legendre(8);
    }
    RULE.with(|(gx, gw)| {
        let nphi = 16;
        let mut acc = Vec3::zeros();
        for (a, wa) in gx.iter().zip(gw) {
            let r = 0.5 * eps * (a + 1.0);
            let wr = 0.5 * wa * 3.0 * r * r / eps.powi(2);
            for (mu, wm) in gx.iter().zip(gw) {
                let st = (1.0 - mu * mu).sqrt();
                for k in 0..nphi {
                    let ph = 2.0 * PI * (k as f64 + 0.5) / nphi as f64;
                    let y = Vec3::new(st * ph.cos(), st * ph.sin(), *mu) * r;
                    acc += xi.value(&(x + y)) * (wr * 0.5 * wm / nphi as f64);
                }
            }
        }
        acc
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatNormEstimate {
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
}

impl FlatNormEstimate {
    pub fn new(lower: f64, upper: f64) -> Self {
        FlatNormEstimate {
            lower,
            upper,
            gap: upper - lower,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.lower >= 0.0 && self.lower <= self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualOptions {
    pub trials: usize,
    pub seed: u64,
    /// Test-field scales are log-uniform in [scale_min, scale_max].
    pub scale_min: f64,
    pub scale_max: f64,
}

impl Default for DualOptions {
    fn default() -> Self {
        DualOptions {
            trials: 64,
            seed: 0,
            scale_min: 0.01,
            scale_max: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualCertificate {
    pub value: f64,
    pub best: Option<TestField>,
    pub curl_max: f64,
}

/// ‖∇×ξ‖_∞ of a ring field on a meridian grid refined until the maximum is
/// stable to 1%.
fn ring_curl_max(r: &RingField) -> f64 {
    let mut m = 64;
    let mut prev = 0.0;
    loop {
        let mut best: f64 = 0.0;
        for i in 0..=m {
            let rho = 2.0 * r.radius * i as f64 / m as f64;
            for j in 0..=m {
                let z = 4.0 * r.sigma * (2.0 * j as f64 / m as f64 - 1.0);
                best = best.max(r.curl_norm_meridian(rho, z));
            }
        }
        if (best - prev).abs() <= 0.01 * best || m >= 1024 {
            return best;
        }
        prev = best;
        m *= 2;
    }
}

fn curl_max(xi: &TestField) -> f64 {
    match xi {
        TestField::Ring(r) => ring_curl_max(r),
        other => other.curl_sup_norm(),
    }
}

/// Centroid, principal axis (smallest-variance direction) and mean distance
/// from that axis.
fn principal_frame(pts: &[Vec3]) -> (Vec3, Vec3, f64) {
    let c = pts.iter().fold(Vec3::zeros(), |a, p| a + p) / pts.len() as f64;
    let cov = pts
        .iter()
        .fold(Mat3::zeros(), |a, p| a + (p - c) * (p - c).transpose())
        / pts.len() as f64;
    let eig = cov.symmetric_eigen();
    let (imin, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |a, (i, v)| if *v < a.1 { (i, *v) } else { a },
        );
    let axis: Vec3 = eig.eigenvectors.column(imin).into();
    let rad = pts
        .iter()
        .map(|p| ((p - c) - axis * (p - c).dot(&axis)).norm())
        .sum::<f64>()
        / pts.len() as f64;
    (c, axis, rad)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box–Muller.
    let u: f64 = rng.gen_range(1e-12..1.0);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    let v = Vec3::new(gaussian(rng), gaussian(rng), gaussian(rng));
    v / v.norm().max(1e-300)
}

/// The seeded test-field family: even trials are azimuthal ring fields about
/// a jittered principal axis of the support, odd trials are vector plateaus
/// centred near a random support point. Scales are log-uniform.
pub fn random_test_field(
    k: usize,
    pts: &[Vec3],
    frame: (Vec3, Vec3, f64),
    opts: &DualOptions,
    rng: &mut ChaCha8Rng,
) -> TestField {
    let (c, axis, rad) = frame;
    let ls = rng.gen_range(opts.scale_min.ln()..=opts.scale_max.ln());
    let scale = ls.exp();
    if k.is_multiple_of(2) {
        let jitter = 0.05 * rad.max(opts.scale_min);
        let center = c + Vec3::new(gaussian(rng), gaussian(rng), gaussian(rng)) * jitter;
        let ax = (axis + random_unit(rng) * 0.05).normalize();
        let radius = rad.max(opts.scale_min) * rng.gen_range(0.8..1.25);
        TestField::Ring(RingField {
            center,
            axis: ax,
            radius,
            sigma: scale,
            amplitude: 1.0,
        })
    } else {
        let p = pts[rng.gen_range(0..pts.len())];
        let center = p + Vec3::new(gaussian(rng), gaussian(rng), gaussian(rng)) * (0.5 * scale);
        TestField::Plateau {
            bump: Bump::new(center, scale),
            coeff: random_unit(rng),
        }
    }
}

/// max over seeded trial fields of (∫ξ·dω)/‖∇×ξ‖_∞.
pub fn dual_lower_bound(omega: &VorticityMeasure, opts: &DualOptions) -> Result<DualCertificate> {
    if omega.divergence_defect() > 1e-10 {
        return Err(Error::NotDivergenceFree(omega.divergence_defect()));
    }
    if !(opts.scale_min > 0.0 && opts.scale_min <= opts.scale_max) {
        return Err(Error::arg("scale_min", "need 0 < scale_min ≤ scale_max"));
    }
    let pts = omega.support_points();
    if pts.is_empty() {
        return Ok(DualCertificate {
            value: 0.0,
            best: None,
            curl_max: 0.0,
        });
    }
    let frame = principal_frame(&pts);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cert = DualCertificate {
        value: 0.0,
        best: None,
        curl_max: 0.0,
    };
    for k in 0..opts.trials {
        let xi = random_test_field(k, &pts, frame, opts, &mut rng);
        let cm = curl_max(&xi);
        if !(cm > 0.0) {
            continue;
        }
        // ξ and −ξ are both admissible.
        let v = omega.pair(&xi).abs() / cm;
        if v > cert.value {
            cert = DualCertificate {
                value: v,
                best: Some(xi),
                curl_max: cm,
            };
        }
    }
    Ok(cert)
}

/// Displacement of a homotopy bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Displacement {
    Translation { z: Vec3 },
    Mollifier { epsilon: f64 },
}

/// Mass of the homotopy measure R_z: |z|·L for a translation and
/// sup_{|z|≤ε} |z|·L = ε·L for the mollification difference.
pub fn homotopy_upper_bound(curve: &ClosedCurve, d: Displacement) -> f64 {
    match d {
        Displacement::Translation { z } => z.norm() * curve.length(),
        Displacement::Mollifier { epsilon } => epsilon.max(0.0) * curve.length(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuledSurface {
    pub area: f64,
    /// Optimal parameter shift of the second curve, as a fraction of its length.
    pub shift: f64,
}

fn ruled_area(a: &[Vec3], b: &ClosedCurve, shift: f64) -> f64 {
    let n = a.len();
    let lb = b.length();
    let bp: Vec<Vec3> = (0..n)
        .map(|i| b.point((shift + i as f64 / n as f64) * lb))
        .collect();
    let tri = |p: &Vec3, q: &Vec3, r: &Vec3| 0.5 * (q - p).cross(&(r - p)).norm();
    let vals: Vec<f64> = (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            tri(&a[i], &a[j], &bp[j]) + tri(&a[i], &bp[j], &bp[i])
        })
        .collect();
    pairwise_sum(&vals)
}

/// Area of the ruled surface between the curves, minimized over the
/// relative parameter shift. Its tangent-plane measure is a potential of
/// μ_a − μ_b, so the area bounds the flat norm from above.
pub fn spanning_surface_upper(a: &ClosedCurve, b: &ClosedCurve) -> RuledSurface {
    let ratio = a.length() / b.length();
    if !(0.5..=2.0).contains(&ratio) {
        warn!(
            "ruled surface between curves of very different lengths ({} vs {})",
            a.length(),
            b.length()
        );
    }
    let n = a.n().max(b.n()).max(256);
    let ap: Vec<Vec3> = (0..n)
        .map(|i| a.point(i as f64 * a.length() / n as f64))
        .collect();
    let scan = 64;
    let vals: Vec<f64> = (0..scan)
        .into_par_iter()
        .map(|k| ruled_area(&ap, b, k as f64 / scan as f64))
        .collect();
    let (kbest, _) =
        vals.iter().enumerate().fold(
            (0, f64::INFINITY),
            |acc, (k, v)| if *v < acc.1 { (k, *v) } else { acc },
        );
    let lo = (kbest as f64 - 1.0) / scan as f64;
    let hi = (kbest as f64 + 1.0) / scan as f64;
    let (s, area) = golden_min(lo, hi, 1e-9, |s| ruled_area(&ap, b, s));
    let (shift, area) = if area <= vals[kbest] {
        (s, area)
    } else {
        (kbest as f64 / scan as f64, vals[kbest])
    };
    RuledSurface {
        area,
        shift: shift.rem_euclid(1.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimalOptions {
    pub max_iter: usize,
    /// Shrinkage threshold as a fraction of the largest node value of the
    /// minimal-norm potential.
    pub step: f64,
    /// Relative mass decrease over `window` iterations that counts as
    /// converged.
    pub tol: f64,
    pub window: usize,
}

impl Default for PrimalOptions {
    fn default() -> Self {
        PrimalOptions {
            max_iter: 4000,
            step: 0.25,
            tol: 1e-5,
            window: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimalResult {
    pub mass: f64,
    pub iterations: usize,
    pub converged: bool,
    #[serde(skip)]
    pub potential: Option<StaggeredField>,
}

fn check_divergence(omega: &StaggeredField) -> Result<()> {
    let defect = VorticityMeasure::Grid(omega.clone()).divergence_defect();
    if defect > 1e-10 {
        return Err(Error::NotDivergenceFree(defect));
    }
    Ok(())
}

/// Minimal-L² potential of ω, the discrete divergence-free Biot–Savart
/// potential.
pub fn particular_potential(omega: &StaggeredField) -> Result<StaggeredField> {
    check_divergence(omega)?;
    Ok(CurlProjector::new(omega).project(&StaggeredField::zeros(omega.spec)))
}

/// Douglas–Rachford on min mass(φ) subject to curl φ = ω. The returned mass
/// is that of a feasible iterate, hence an upper bound for the grid problem.
pub fn grid_primal(omega: &StaggeredField, opts: &PrimalOptions) -> Result<PrimalResult> {
    check_divergence(omega)?;
    let spec = omega.spec;
    let proj = CurlProjector::new(omega);
    let x0 = proj.project(&StaggeredField::zeros(spec));
    let peak = x0.node_norms().into_iter().fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(PrimalResult {
            mass: 0.0,
            iterations: 0,
            converged: true,
            potential: Some(x0),
        });
    }
    let lambda = opts.step * peak;
    let shrink = |v: &StaggeredField| -> StaggeredField {
        let mut out = v.clone();
        let norms = v.node_norms();
        for (i, nrm) in norms.iter().enumerate() {
            let f = if *nrm > lambda {
                1.0 - lambda / nrm
            } else {
                0.0
            };
            for c in 0..3 {
                out.comps[c][i] *= f;
            }
        }
        out
    };
    let mut z = x0.clone();
    let mut best = x0.mass();
    let mut best_x = x0;
    let mut history = vec![best];
    let mut converged = false;
    let mut it = 0;
    while it < opts.max_iter {
        it += 1;
        let x = proj.project(&z);
        let m = x.mass();
        if m < best {
            best = m;
            best_x = x.clone();
        }
        history.push(best);
        if history.len() > opts.window {
            let old = history[history.len() - 1 - opts.window];
            if old - best <= opts.tol * best {
                converged = true;
                break;
            }
        }
        let mut refl = x.clone();
        for c in 0..3 {
            for (r, zc) in refl.comps[c].iter_mut().zip(&z.comps[c]) {
                *r = 2.0 * *r - zc;
            }
        }
        let y = shrink(&refl);
        for c in 0..3 {
            for ((zc, yc), xc) in z.comps[c].iter_mut().zip(&y.comps[c]).zip(&x.comps[c]) {
                *zc += yc - xc;
            }
        }
    }
    if !converged {
        warn!(
            "grid primal did not converge in {} iterations; returning best feasible mass",
            opts.max_iter
        );
    }
    Ok(PrimalResult {
        mass: best,
        iterations: it,
        converged,
        potential: Some(best_x),
    })
}

/// Weak-L^{1,∞} norm of the node magnitudes of a grid potential.
pub fn grid_weak_norm(phi: &StaggeredField) -> Result<f64> {
    weak_l1inf(&phi.node_norms(), phi.spec.cell_volume())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairBreakdown {
    pub dual: f64,
    pub dual_trials: usize,
    pub seed: u64,
    pub ruled_surface: f64,
    pub ruled_shift: f64,
    pub grid: Option<usize>,
    pub grid_primal: Option<f64>,
    pub primal_iterations: Option<usize>,
    pub primal_converged: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairEstimate {
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    pub breakdown: PairBreakdown,
}

/// Flat-norm bracket for μ_a − μ_b. With `grid = Some(n)` the discrete
/// primal on an n³ box around both curves is reported alongside.
pub fn estimate_pair(
    a: Arc<ClosedCurve>,
    b: Arc<ClosedCurve>,
    grid: Option<usize>,
    seed: u64,
) -> Result<PairEstimate> {
    let w = VorticityMeasure::difference(a.clone(), b.clone());
    let opts = DualOptions {
        seed,
        ..Default::default()
    };
    let dual = dual_lower_bound(&w, &opts)?.value;
    let ruled = spanning_surface_upper(&a, &b);
    let primal = match grid {
        Some(n) => {
            let (mut lo, mut hi) = (Vec3::repeat(f64::INFINITY), Vec3::repeat(f64::NEG_INFINITY));
            for p in a.samples().iter().chain(b.samples()) {
                lo = lo.inf(p);
                hi = hi.sup(p);
            }
            let extent = (hi - lo).max();
            let spec = GridSpec::centered(0.5 * (lo + hi), 0.7 * extent, n)?;
            Some(grid_primal(&w.to_grid(spec, 2), &PrimalOptions::default())?)
        }
        None => None,
    };
    let est = FlatNormEstimate::new(dual, ruled.area);
    Ok(PairEstimate {
        lower: est.lower,
        upper: est.upper,
        gap: est.gap,
        breakdown: PairBreakdown {
            dual,
            dual_trials: opts.trials,
            seed,
            ruled_surface: ruled.area,
            ruled_shift: ruled.shift,
            grid,
            grid_primal: primal.as_ref().map(|p| p.mass),
            primal_iterations: primal.as_ref().map(|p| p.iterations),
            primal_converged: primal.as_ref().map(|p| p.converged),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BuiltinCurve;

    #[test]
    fn zero_measure_has_zero_bounds() {
        let c = Arc::new(BuiltinCurve::UnitCircle.build(128).unwrap());
        let w = VorticityMeasure::difference(c.clone(), c.clone());
        let d = dual_lower_bound(
            &w,
            &DualOptions {
                trials: 8,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(d.value < 1e-12);
        assert!(spanning_surface_upper(&c, &c).area < 1e-12);
        assert_eq!(
            homotopy_upper_bound(&c, Displacement::Translation { z: Vec3::zeros() }),
            0.0
        );
        let g = w.to_grid(GridSpec::centered(Vec3::zeros(), 0.3, 16).unwrap(), 2);
        assert_eq!(
            grid_primal(&g, &PrimalOptions::default()).unwrap().mass,
            0.0
        );
    }

    #[test]
    fn homotopy_values() {
        let c = BuiltinCurve::UnitCircle.build(64).unwrap();
        let b = homotopy_upper_bound(
            &c,
            Displacement::Translation {
                z: Vec3::new(0.0, 0.06, 0.08),
            },
        );
        assert!((b - 0.1).abs() < 1e-12);
        let e = 2f64.powi(-6);
        assert!(
            (homotopy_upper_bound(&c, Displacement::Mollifier { epsilon: e }) - e).abs() < 1e-15
        );
    }

    #[test]
    fn cylinder_area() {
        let r = 1.0;
        let a = BuiltinCurve::Circle { radius: r }.build(256).unwrap();
        let b = a.translated(Vec3::new(0.0, 0.0, 0.2)).shifted(0.7).unwrap();
        let s = spanning_surface_upper(&a, &b);
        let exact = 2.0 * PI * r * 0.2;
        assert!(
            (s.area - exact).abs() < 1e-3 * exact,
            "{} vs {exact}",
            s.area
        );
    }

    #[test]
    fn mollification_lower_bound_is_below_eps_l() {
        let c = Arc::new(BuiltinCurve::UnitCircle.build(128).unwrap());
        let eps = 2f64.powi(-5);
        let w = VorticityMeasure::mollification(c.clone(), eps);
        let d = dual_lower_bound(
            &w,
            &DualOptions {
                trials: 16,
                scale_min: eps,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(d.value <= eps * c.length());
        assert!(d.value > 0.0);
    }

    #[test]
    fn primal_beats_known_potential() {
        let spec = GridSpec::centered(Vec3::zeros(), 0.3, 16).unwrap();
        let mut phi0 = StaggeredField::zeros(spec);
        for i in 5..9 {
            for j in 6..8 {
                phi0.comps[2][spec.index(i, j, 7)] = 1.0;
            }
        }
        let omega = phi0.curl();
        let r = grid_primal(&omega, &PrimalOptions::default()).unwrap();
        assert!(
            r.mass <= phi0.mass() * (1.0 + 1e-5),
            "{} vs {}",
            r.mass,
            phi0.mass()
        );
        let p = r.potential.unwrap().curl();
        for c in 0..3 {
            for (a, b) in p.comps[c].iter().zip(&omega.comps[c]) {
                assert!((a - b).abs() < 1e-8 * omega.max_abs());
            }
        }
    }

    #[test]
    fn pair_estimate_brackets_a_translation() {
        let a = Arc::new(
            crate::geometry::BuiltinCurve::UnitCircle
                .build(128)
                .unwrap(),
        );
        let b = Arc::new(a.translated(Vec3::new(0.0, 0.0, 0.1)));
        let e = estimate_pair(a, b, None, 7).unwrap();
        assert!(e.lower > 0.0 && e.lower <= e.upper);
        assert!((e.upper - 0.1).abs() < 1e-3);
        assert!(e.breakdown.grid_primal.is_none());
    }
}
