//! The verification checks. Each returns records plus named ε-series and is
//! a pure function of its inputs and seed.

use std::f64::consts::PI;
use std::sync::Arc;

use log::info;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{SeriesRow, TestRecord};
use crate::bcf::{evolve, l2_identity_residual, EvolveOptions, StabilityField};
use crate::biot_savart::FilamentField;
use crate::error::Result;
use crate::flat_norm::{
    dual_lower_bound, grid_primal, homotopy_upper_bound, spanning_surface_upper, Displacement,
    DualOptions, GridSpec, PrimalOptions, VorticityMeasure,
};
use crate::functionals::{
    curve_flux, interpolation_check, k_eps, kinetic_energy_l2, lq_norm, sup_norm, support_box,
    truncated_power, FieldQuadrature, TensorField, TestField, VolumeOptions,
};
use crate::geometry::{BuiltinCurve, ClosedCurve};
use crate::numeric::{linear_fit, median};
use crate::{Mat3, Vec3};

#[derive(Debug, Clone, Default)]
pub struct SuiteOutput {
    pub records: Vec<TestRecord>,
    pub series: Vec<(String, Vec<SeriesRow>)>,
}

impl SuiteOutput {
    fn record(r: TestRecord) -> Self {
        SuiteOutput {
            records: vec![r],
            series: vec![],
        }
    }

    pub fn extend(&mut self, o: SuiteOutput) {
        self.records.extend(o.records);
        self.series.extend(o.series);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }
}

fn spread(v: &[f64]) -> f64 {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    hi / lo
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.gen::<f64>() - 0.5,
            rng.gen::<f64>() - 0.5,
            rng.gen::<f64>() - 0.5,
        ) * 2.0;
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Unit vector orthogonal to `t`, at angle θ in a fixed frame.
fn normal_direction(t: &Vec3, theta: f64) -> Vec3 {
    let t = t.normalize();
    let a = if t.x.abs() < 0.9 {
        Vec3::x()
    } else {
        Vec3::y()
    };
    let n1 = (a - t * t.dot(&a)).normalize();
    let n2 = t.cross(&n1);
    n1 * theta.cos() + n2 * theta.sin()
}

// ---------------------------------------------------------------- energy

/// ∫|v^ε|² against |log ε|: slope L/2π, bounded intercepts.
pub fn energy_log_slope(curve: &Arc<ClosedCurve>, eps: &[f64]) -> Result<SuiteOutput> {
    let l = curve.length();
    let mut e = Vec::with_capacity(eps.len());
    for &x in eps {
        e.push(kinetic_energy_l2(&FilamentField::new(curve.clone(), x)?));
    }
    let logs: Vec<f64> = eps.iter().map(|x| (x / l).ln().abs()).collect();
    let (slope, intercept) = linear_fit(&logs, &e);
    let target = l / (2.0 * PI);
    let icpt: Vec<f64> = e.iter().zip(&logs).map(|(v, g)| v - target * g).collect();
    let mean = icpt.iter().sum::<f64>() / icpt.len() as f64;
    let range = icpt.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - icpt.iter().cloned().fold(f64::INFINITY, f64::min);
    let rel = (slope / target - 1.0).abs();
    let mut r = TestRecord::new("energy_log_slope", "energy", "Prop.ve")
        .input("epsilons", eps.to_vec())
        .input("length", l);
    r.measure("slope", slope);
    r.measure("slope_rel_error", rel);
    r.measure("intercept_range_over_mean", range / mean.abs());
    r.fit("slope", slope);
    r.fit("intercept", intercept);
    let passed = rel < 0.03 && range < 0.25 * mean.abs();
    let rows = eps
        .iter()
        .zip(&e)
        .zip(&logs)
        .map(|((&x, &v), &g)| SeriesRow {
            epsilon: x,
            value: v,
            fit: Some(slope * g + intercept),
        })
        .collect();
    Ok(SuiteOutput {
        records: vec![r.verdict(passed)],
        series: vec![("energy".into(), rows)],
    })
}

// ------------------------------------------------------------------ flux

fn flux_fields(c: &ClosedCurve) -> Vec<TensorField> {
    let n = c.n();
    let ext = c.extent();
    vec![
        TensorField::plateau(c.centroid(), 1.1 * ext, Mat3::identity()),
        TensorField::plateau(c.centroid(), 1.1 * ext, Vec3::z() * Vec3::z().transpose()),
        TensorField::plateau(
            c.samples()[0],
            0.08,
            Mat3::new(1.0, 0.3, 0.0, 0.3, 0.5, 0.2, 0.0, 0.2, 0.8),
        ),
        TensorField::plateau(
            c.samples()[90 * n / 256],
            0.06,
            Mat3::new(0.2, 0.0, 0.4, 0.0, 1.0, 0.1, 0.4, 0.1, 0.3),
        ),
        TensorField::plateau(
            c.centroid() + Vec3::new(0.05, 0.0, 0.0),
            0.1,
            Mat3::from_diagonal(&Vec3::new(1.0, -0.5, 0.7)),
        ),
    ]
}

/// k_ε∫φ:v^ε⊗v^ε against ∮φ:(I − τ⊗τ) for five plateau fields on the
/// circle and the trefoil.
pub fn momentum_flux_identity() -> Result<SuiteOutput> {
    let eps: Vec<f64> = (5..=9).map(|k| 2f64.powi(-k)).collect();
    let mut out = SuiteOutput::default();
    for b in [BuiltinCurve::UnitCircle, BuiltinCurve::Trefoil] {
        let c = Arc::new(b.build(256)?);
        let l = c.length();
        let fields = flux_fields(&c);
        let region = support_box(&fields).expect("plateau fields are compactly supported");
        let opts = VolumeOptions {
            max_cell: Some(0.03),
            ..Default::default()
        };
        let exact: Vec<f64> = fields.iter().map(|p| curve_flux(&c, p)).collect();
        let mut scaled = vec![Vec::new(); fields.len()];
        let mut identity_ok = true;
        let mut identity_worst: f64 = 0.0;
        let mut quad: Option<FieldQuadrature> = None;
        for &e in &eps {
            let f = FilamentField::new(c.clone(), e)?;
            let q = match &quad {
                None => FieldQuadrature::build(&f, region, &opts)?,
                Some(p) => p.rebuild(&f, &opts)?,
            };
            let k = k_eps(e, l)?;
            for (j, p) in fields.iter().enumerate() {
                let kf = k * q.momentum_flux(p);
                scaled[j].push((kf - exact[j]).abs() * (e / l).ln().abs());
                if j == 0 {
                    let dev = (kf - 2.0 * l).abs() / k;
                    identity_worst = identity_worst.max(dev);
                    identity_ok &= dev <= 8.0 * l;
                }
            }
            info!("flux {}: ε = {e:.3e}, {} nodes", b.name(), q.node_count());
            quad = Some(q);
        }
        let mut ok = identity_ok;
        let mut r = TestRecord::new(&format!("momentum_flux_{}", b.name()), "flux", "Prop.ve")
            .input("epsilons", eps.clone())
            .input("fields", fields.len());
        r.measure("identity_worst_deviation_over_k", identity_worst);
        for (j, s) in scaled.iter().enumerate() {
            let m = median(s);
            let worst = s.iter().map(|v| (v / m).max(m / v)).fold(0.0, f64::max);
            ok &= worst < 2.0;
            r.measure(&format!("phi{j}_worst_ratio_to_median"), worst);
            r.fit(&format!("phi{j}_err_log_median"), m);
            out.series.push((
                format!("flux_{}_phi{j}", b.name()),
                eps.iter()
                    .zip(s)
                    .map(|(&e, &v)| SeriesRow {
                        epsilon: e,
                        value: v,
                        fit: Some(m),
                    })
                    .collect(),
            ));
        }
        out.records.push(r.verdict(ok));
    }
    Ok(out)
}

// ----------------------------------------------------------------- field

/// ε·‖v^ε‖_∞ and ε^{1/2}‖v^ε‖_{L⁴} across the ε grid.
pub fn lq_bounds(curve: &Arc<ClosedCurve>, eps: &[f64]) -> Result<SuiteOutput> {
    let mut sup = Vec::new();
    let mut l4 = Vec::new();
    for &e in eps {
        let f = FilamentField::new(curve.clone(), e)?;
        sup.push(e * sup_norm(&f));
        l4.push(e.sqrt() * lq_norm(&f, 4.0)?);
    }
    let (ss, s4) = (spread(&sup), spread(&l4));
    let mut r = TestRecord::new("lq_bounds", "field", "Prop.ve").input("epsilons", eps.to_vec());
    r.measure("sup_spread", ss);
    r.measure("l4_spread", s4);
    let rows = |v: &[f64]| {
        eps.iter()
            .zip(v)
            .map(|(&e, &x)| SeriesRow {
                epsilon: e,
                value: x,
                fit: None,
            })
            .collect()
    };
    Ok(SuiteOutput {
        records: vec![r.verdict(ss < 2.0 && s4 < 2.0)],
        series: vec![
            ("sup_norm_scaled".into(), rows(&sup)),
            ("l4_norm_scaled".into(), rows(&l4)),
        ],
    })
}

/// ‖f‖_p ≤ 4‖f‖_{1,∞}^{(2−p)/p}‖f‖_2^{(2p−2)/p} on truncated powers.
pub fn interpolation_family() -> Result<SuiteOutput> {
    let mut r = TestRecord::new(
        "interpolation_inequality",
        "field",
        "Appendix interpolation inequality",
    );
    let mut worst: f64 = 0.0;
    for alpha in [1.6, 2.0, 2.6] {
        let (f, dv) = truncated_power(alpha, 1e3, 1.0, 64);
        for (pn, p) in [("5/4", 1.25), ("4/3", 4.0 / 3.0), ("3/2", 1.5)] {
            let ratio = interpolation_check(&f, dv, p)?.ratio;
            r.measure(&format!("ratio_alpha{alpha}_p{pn}"), ratio);
            worst = worst.max(ratio);
        }
    }
    r.measure("worst_ratio", worst);
    Ok(SuiteOutput::record(r.verdict(worst <= 4.0)))
}

// ------------------------------------------------------------- flat norm

/// Dual lower bound of ‖ρ^ε∗μ_Γ − μ_Γ‖_F against the homotopy bound εL.
pub fn mollification_flat_norm(
    curve: &Arc<ClosedCurve>,
    eps: &[f64],
    seed: u64,
) -> Result<SuiteOutput> {
    let l = curve.length();
    let opts = DualOptions {
        trials: 64,
        seed,
        ..Default::default()
    };
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    let mut homotopy_exact = true;
    for &e in eps {
        let lower =
            dual_lower_bound(&VorticityMeasure::mollification(curve.clone(), e), &opts)?.value;
        let upper = homotopy_upper_bound(curve, Displacement::Mollifier { epsilon: e });
        homotopy_exact &= upper == e * l;
        ok &= lower <= e * l;
        worst = worst.max(lower / (e * l));
        rows.push(SeriesRow {
            epsilon: e,
            value: lower,
            fit: Some(upper),
        });
    }
    let mut r = TestRecord::new("mollification_flat_norm", "flatnorm", "Lemma L6")
        .input("epsilons", eps.to_vec())
        .input("trials", opts.trials)
        .input("seed", seed);
    r.measure("worst_lower_over_eps_l", worst);
    r.measure("homotopy_exact", if homotopy_exact { 1.0 } else { 0.0 });
    Ok(SuiteOutput {
        records: vec![r.verdict(ok && homotopy_exact)],
        series: vec![("mollification_lower".into(), rows)],
    })
}

/// Coaxial unit-length circles a distance 0.1 apart: dual ≤ primal ≤ ruled.
pub fn flat_norm_sandwich(seed: u64) -> Result<SuiteOutput> {
    let a = Arc::new(BuiltinCurve::UnitCircle.build(256)?);
    let b = Arc::new(a.translated(Vec3::new(0.0, 0.0, 0.1)));
    let w = VorticityMeasure::difference(a.clone(), b.clone());
    let lower = dual_lower_bound(
        &w,
        &DualOptions {
            trials: 64,
            seed,
            ..Default::default()
        },
    )?
    .value;
    let upper = spanning_surface_upper(&a, &b).area;
    let spec = GridSpec::centered(Vec3::new(0.0, 0.0, 0.05), 0.22, 48)?;
    let primal = grid_primal(&w.to_grid(spec, 2), &PrimalOptions::default())?;
    let gap = (upper - lower) / upper;
    let mut r = TestRecord::new("flat_norm_sandwich", "flatnorm", "flat norm")
        .input("grid", 48)
        .input("gap_distance", 0.1)
        .input("seed", seed);
    r.measure("lower", lower);
    r.measure("primal", primal.mass);
    r.measure("upper", upper);
    r.measure("gap_over_upper", gap);
    r.measure("primal_iterations", primal.iterations as f64);
    let ok = lower <= primal.mass && primal.mass <= upper && gap < 0.5;
    Ok(SuiteOutput::record(r.verdict(ok)))
}

// -------------------------------------------------------------- geometry

fn probe_curves() -> Result<Vec<(&'static str, ClosedCurve)>> {
    Ok(vec![
        ("circle", BuiltinCurve::UnitCircle.build(512)?),
        (
            "ellipse",
            BuiltinCurve::Ellipse { a: 0.3, b: 0.2 }.build(512)?,
        ),
        ("trefoil", BuiltinCurve::Trefoil.build(512)?),
    ])
}

/// h·#{|γ(s_i) − x| < r} ≤ 8r‖κ*‖ over random (x, r).
pub fn linear_estimate(seed: u64) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    for (name, c) in probe_curves()? {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = c.weak_norm();
        let l = c.length();
        let mut violations = 0;
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let r = l * 10f64.powf(rng.gen_range(-3.0..-0.3));
            let s = rng.gen::<f64>() * l;
            let off = random_unit(&mut rng) * (2.0 * r * rng.gen::<f64>());
            let x = c.point(s) + off;
            let ratio = c.ball_hit_length(&x, r) / (r * w);
            worst = worst.max(ratio);
            if ratio > 8.0 {
                violations += 1;
            }
        }
        let mut rec = TestRecord::new(&format!("linear_estimate_{name}"), "geometry", "L.linear")
            .input("probes", 1000)
            .input("seed", seed);
        rec.measure("violations", violations as f64);
        rec.measure("worst_ratio", worst);
        rec.measure("weak_norm", w);
        out.records.push(rec.verdict(violations == 0));
    }
    Ok(out)
}

/// ∇ζ against central differences of the projection, and the local
/// Lipschitz bound |1/|∇ζ| − 1| ≤ dist/r, at 100 ellipse tube points.
pub fn tube_projection() -> Result<SuiteOutput> {
    let c = BuiltinCurve::Ellipse { a: 0.3, b: 0.2 }.build(512)?;
    let l = c.length();
    let step = 1e-5 * l;
    let mut worst_fd: f64 = 0.0;
    let mut lip_violations = 0;
    for i in 0..100 {
        let s = (i as f64 + 0.37) / 100.0 * l;
        let (p, t) = c.point_tangent(s);
        let dir = normal_direction(&t, 2.0 * PI * ((i * 37) % 100) as f64 / 100.0);
        let d = 0.2 * c.security_radius_at(s) * ((i % 7) as f64 + 1.0) / 8.0;
        let x = p + dir * d;
        let g = c.grad_zeta(&x)?;
        let mut fd = Vec3::zeros();
        for j in 0..3 {
            let mut e = Vec3::zeros();
            e[j] = step;
            let sp = c.tube_project(&(x + e)).s;
            let sm = c.tube_project(&(x - e)).s;
            fd[j] = c.param_diff(sp, sm) / (2.0 * step);
        }
        worst_fd = worst_fd.max((g - fd).norm() / g.norm());
        let tp = c.tube_project(&x);
        if (1.0 / g.norm() - 1.0).abs() > tp.dist / c.security_radius_at(tp.s) {
            lip_violations += 1;
        }
    }
    let mut r = TestRecord::new("tube_projection", "geometry", "Lemmas L9cis").input("points", 100);
    r.measure("worst_fd_rel_error", worst_fd);
    r.measure("lipschitz_violations", lip_violations as f64);
    Ok(SuiteOutput::record(
        r.verdict(worst_fd < 1e-5 && lip_violations == 0),
    ))
}

// ------------------------------------------------------------------- bcf

/// Circle of radius R over T = 0.1R²: rigid translation at speed 1/R.
pub fn circle_rigid_motion() -> Result<SuiteOutput> {
    let rad = 1.0 / (2.0 * PI);
    let c = BuiltinCurve::Circle { radius: rad }.build(512)?;
    let h = c.spacing();
    let t_final = 0.1 * rad * rad;
    let mut o = EvolveOptions::new(0.25 * h * h, t_final);
    o.output_every = usize::MAX;
    let traj = evolve(&c, &o)?;
    let end = traj.states.last().expect("final state");
    let shift = end.centroid() - c.centroid();
    let speed = shift.z / t_final;
    let speed_err = (speed * rad - 1.0).abs();
    let exact = Vec3::new(0.0, 0.0, t_final / rad);
    let pos_err = end
        .samples()
        .iter()
        .zip(c.samples())
        .map(|(a, b)| (a - b - exact).norm())
        .fold(0.0, f64::max);
    let mut r = TestRecord::new("circle_rigid_motion", "bcf", "BCF")
        .input("radius", rad)
        .input("t_final", t_final)
        .input("n", 512);
    r.measure("speed_rel_error", speed_err);
    r.measure("position_error_over_length", pos_err / c.length());
    r.measure("length_drift", traj.length_drift());
    r.measure("prerenorm_speed_defect", traj.max_prerenorm_defect);
    let ok = speed_err < 1e-6 && traj.length_drift() < 1e-8 && traj.max_prerenorm_defect < 1e-6;
    Ok(SuiteOutput::record(r.verdict(ok)))
}

fn identity_fields(c: &ClosedCurve) -> Vec<TestField> {
    let n = c.n();
    let ext = c.extent();
    vec![
        TestField::plateau(
            c.samples()[5 * n / 256],
            0.5 * ext,
            Vec3::new(0.4, -0.7, 0.2),
        ),
        TestField::plateau(
            c.samples()[n / 2] + Vec3::new(0.0, 0.0, 0.1 * ext),
            0.6 * ext,
            Vec3::new(0.2, 0.9, -0.3),
        ),
        TestField::plateau(
            c.samples()[n / 3] + Vec3::new(0.06 * ext, 0.0, 0.0),
            0.75 * ext,
            Vec3::new(-0.6, 0.1, 0.9),
        ),
    ]
}

/// d/dt∮φ·τ against ∮∇(∇×φ):(I − τ⊗τ) along circle and trefoil flows, with
/// the order of the time difference fitted over halvings of its step.
pub fn moment_identity() -> Result<SuiteOutput> {
    const N: usize = 512;
    const MID: usize = 128;
    const STRIDES: [usize; 3] = [16, 32, 64];
    let mut out = SuiteOutput::default();
    for b in [BuiltinCurve::UnitCircle, BuiltinCurve::Trefoil] {
        let c = b.build(N)?;
        let h = c.spacing();
        let dt = 0.25 * h * h;
        let traj = evolve(&c, &EvolveOptions::new(dt, 2.0 * MID as f64 * dt))?;
        let mut r = TestRecord::new(
            &format!("moment_identity_{}", b.name()),
            "bcf",
            "Lemma L2 identity",
        )
        .input("n", N)
        .input("dt", traj.dt)
        .input("strides", STRIDES.to_vec());
        let mut ok = true;
        for (j, phi) in identity_fields(&c).iter().enumerate() {
            let base = l2_identity_residual(&traj, phi, MID, 1)?;
            ok &= base.relative < 1e-4;
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for s in STRIDES {
                let rs = l2_identity_residual(&traj, phi, MID, s)?;
                xs.push((s as f64 * traj.dt).ln());
                ys.push((rs.lhs - base.lhs).abs().ln());
            }
            let (order, _) = linear_fit(&xs, &ys);
            ok &= (1.8..=2.2).contains(&order);
            r.measure(&format!("phi{j}_relative_residual"), base.relative);
            r.measure(&format!("phi{j}_rhs"), base.rhs);
            r.fit(&format!("phi{j}_order"), order);
        }
        out.records.push(r.verdict(ok));
    }
    Ok(out)
}

// ------------------------------------------------------------- stability

struct RpropFit {
    k_fit: f64,
    defect_self: f64,
}

fn rprop_fit(n: usize, seed: u64) -> Result<RpropFit> {
    let c = BuiltinCurve::UnitCircle.build(n)?;
    let h = c.spacing();
    let dt = 0.25 * h * h;
    let traj = Arc::new(evolve(&c, &EvolveOptions::new(dt, 8.0 * dt))?);
    let sf = StabilityField::new(traj.clone())?;
    let rg = sf.r_gamma();
    let defect_self = (0..traj.len())
        .map(|k| sf.defect(k, &traj.states[k]).abs())
        .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut k_fit: f64 = 0.0;
    for _ in 0..1000 {
        let k = rng.gen_range(1..traj.len() - 1);
        let st = &traj.states[k];
        let s = rng.gen::<f64>() * st.length();
        let (p, t) = st.point_tangent(s);
        let x =
            p + normal_direction(&t, 2.0 * PI * rng.gen::<f64>()) * (0.4 * rg * rng.gen::<f64>());
        let xi = random_unit(&mut rng);
        let pr = sf.rprop(k, &x, &xi, 0.01 * rg)?;
        if pr.bound > 0.0 {
            k_fit = k_fit.max(pr.residual / pr.bound);
        }
    }
    Ok(RpropFit { k_fit, defect_self })
}

/// E_γ along the flow, the quadratic growth of E_γ under normal
/// perturbation, and a refinement-stable rprop constant.
pub fn stability_machinery(seed: u64) -> Result<SuiteOutput> {
    let coarse = rprop_fit(256, seed)?;
    let fine = rprop_fit(512, seed)?;

    let c = BuiltinCurve::UnitCircle.build(256)?;
    let traj = Arc::new(evolve(
        &c,
        &EvolveOptions::new(0.25 * c.spacing().powi(2), 0.0),
    )?);
    let sf = StabilityField::new(traj)?;
    let rg = sf.r_gamma();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut rows = Vec::new();
    for j in 0..9 {
        let d = rg * 10f64.powf(-3.0 + 2.0 * j as f64 / 8.0);
        let pts: Vec<Vec3> = c
            .samples()
            .iter()
            .zip(c.tangents().iter().zip(c.second_derivatives()))
            .map(|(p, (t, a))| p + t.cross(a).normalize() * d)
            .collect();
        let lam = ClosedCurve::resample_arclength(&pts, c.n())?;
        let e = sf.defect(0, &lam);
        xs.push(d.ln());
        ys.push(e.ln());
        rows.push(SeriesRow {
            epsilon: d,
            value: e,
            fit: None,
        });
    }
    let (exponent, _) = linear_fit(&xs, &ys);
    let change = (fine.k_fit / coarse.k_fit - 1.0).abs();
    let mut r = TestRecord::new("stability_machinery", "stability", "E_γ defect")
        .input("probes", 1000)
        .input("seed", seed)
        .input("resolutions", vec![256, 512]);
    r.measure("defect_self_max", coarse.defect_self.max(fine.defect_self));
    r.fit("defect_exponent", exponent);
    r.fit("k_fit_coarse", coarse.k_fit);
    r.fit("k_fit_fine", fine.k_fit);
    r.measure("k_fit_relative_change", change);
    let ok = coarse.defect_self.max(fine.defect_self) < 1e-9
        && (exponent - 2.0).abs() <= 0.2
        && coarse.k_fit.is_finite()
        && change < 0.2;
    Ok(SuiteOutput {
        records: vec![r.verdict(ok)],
        series: vec![("defect_normal_perturbation".into(), rows)],
    })
}
