use std::sync::Arc;

use proptest::prelude::*;

use filament_core::bcf::curve_distance;
use filament_core::biot_savart::FilamentField;
use filament_core::flat_norm::{homotopy_upper_bound, Displacement};
use filament_core::functionals::{excess, k_eps};
use filament_core::harness::{ExperimentConfig, SeriesRow, Suite, VerifyReport};
use filament_core::{BuiltinCurve, ClosedCurve, Vec3};

fn perturbed(amplitude: f64, mode: u32, n: usize) -> ClosedCurve {
    BuiltinCurve::PerturbedCircle { amplitude, mode }
        .build(n)
        .unwrap()
}

fn vec3() -> impl Strategy<Value = Vec3> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn resampling_is_idempotent(a in 0.0..0.3f64, m in 2u32..7) {
        prop_assume!(a * f64::from(m * m) <= 2.0);
        let c = perturbed(a, m, 256);
        let again = ClosedCurve::resample_arclength(c.samples(), c.n()).unwrap();
        prop_assert!((again.length() - c.length()).abs() < 1e-10);
        for (p, q) in again.samples().iter().zip(c.samples()) {
            prop_assert!((p - q).norm() < 1e-10);
        }
    }

    #[test]
    fn arclength_samples_are_uniform(a in 0.0..0.3f64, m in 2u32..7) {
        prop_assume!(a * f64::from(m * m) <= 2.0);
        let c = perturbed(a, m, 256);
        let h = c.spacing();
        for (i, t) in c.tangents().iter().enumerate() {
            prop_assert!((t.norm() - 1.0).abs() < 1e-8);
            let chord = (c.samples()[(i + 1) % c.n()] - c.samples()[i]).norm();
            prop_assert!(chord >= 0.9 * h && chord <= h * (1.0 + 1e-8));
        }
    }

    #[test]
    fn security_radius_is_capped_by_curvature(a in 0.0..0.3f64, m in 2u32..7) {
        let c = perturbed(a, m, 128);
        let p = c.profile();
        for i in 0..c.n() {
            let r = c.security_radius(i);
            prop_assert!(r <= 0.5 * c.length() + 1e-12);
            prop_assert!(r <= (1.0 / c.second_derivatives()[i].norm()) * (1.0 + 1e-6));
            prop_assert!((p.kappa_star[i] * r - 1.0).abs() < 1e-12);
        }
        prop_assert!(c.weak_norm() >= 2.0 - 1e-9);
    }

    #[test]
    fn weak_norm_is_scale_invariant(a in 0.0..0.3f64, m in 2u32..6, alpha in 0.5..10.0f64) {
        let c = perturbed(a, m, 128);
        let s = c.scaled(alpha).unwrap();
        prop_assert!((s.weak_norm() / c.weak_norm() - 1.0).abs() < 0.01);
    }

    #[test]
    fn linear_estimate_on_random_balls(a in 0.0..0.3f64, m in 2u32..6, s in 0.0..1.0f64, off in vec3(), lr in -3.0..-0.3f64) {
        let c = perturbed(a, m, 256);
        let r = 10f64.powf(lr);
        let x = c.point(s) + off * r;
        prop_assert!(c.ball_hit_length(&x, r) <= 8.0 * r * c.weak_norm());
    }

    #[test]
    fn homotopy_bound_is_subadditive(z1 in vec3(), z2 in vec3()) {
        let c = BuiltinCurve::Trefoil.build(64).unwrap();
        let u = |z| homotopy_upper_bound(&c, Displacement::Translation { z });
        prop_assert!(u(z1 + z2) <= u(z1) + u(z2) + 1e-12);
    }

    #[test]
    fn k_eps_monotone_and_excess_affine(e1 in 1e-6..0.2f64, e2 in 1e-6..0.2f64, x in 0.0..5.0f64, y in 0.0..5.0f64) {
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        prop_assume!(hi - lo > 1e-9);
        prop_assert!(k_eps(lo, 1.0).unwrap() < k_eps(hi, 1.0).unwrap());
        let mid = excess(0.5 * (x + y), e1, 1.0).unwrap();
        let avg = 0.5 * (excess(x, e1, 1.0).unwrap() + excess(y, e1, 1.0).unwrap());
        prop_assert!((mid - avg).abs() < 1e-12);
    }

    #[test]
    fn config_accepts_exactly_the_open_epsilon_range(e in 0.0..1.0f64, k in 0u32..12) {
        let n = 1usize << k;
        let c = ExperimentConfig { epsilons: vec![e], n, suites: vec![], ..Default::default() };
        let ok = e > 0.0 && e < 0.5 && n >= 64;
        prop_assert_eq!(c.validate().is_ok(), ok);
    }

    #[test]
    fn series_export_is_a_pure_function(vals in prop::collection::vec((1e-4..1.0f64, -10.0..10.0f64), 1..8)) {
        let mut r = VerifyReport::default();
        r.series.insert("s".into(), vals.iter().map(|&(e, v)| SeriesRow { epsilon: e, value: v, fit: None }).collect());
        let back = VerifyReport::from_json(&r.to_json()).unwrap();
        prop_assert_eq!(r.export_series("s").unwrap(), back.export_series("s").unwrap());
        prop_assert_eq!(back.export_series("s").unwrap().lines().count(), vals.len() + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn velocity_is_divergence_free(dir in vec3(), d in 0.02..0.3f64, s in 0.0..1.0f64) {
        prop_assume!(dir.norm() > 0.1);
        let c = Arc::new(BuiltinCurve::Trefoil.build(128).unwrap());
        let f = FilamentField::new(c.clone(), 0.01).unwrap();
        let x = c.point(s) + dir.normalize() * d;
        let dist = c.distance(&x);
        prop_assume!(dist > 0.02);
        let h = 0.003 * dist;
        let mut div = 0.0;
        for j in 0..3 {
            let mut e = Vec3::zeros();
            e[j] = h;
            let v = |k: f64| f.velocity(&(x + e * k))[j];
            div += (8.0 * (v(1.0) - v(-1.0)) - (v(2.0) - v(-2.0))) / (12.0 * h);
        }
        prop_assert!(div.abs() < 1e-5 * f.velocity(&x).norm().max(1.0), "div {div}");
    }

    #[test]
    fn field_outside_core_ignores_epsilon(dir in vec3(), d in 0.05..0.5f64, s in 0.0..1.0f64) {
        prop_assume!(dir.norm() > 0.1);
        let c = Arc::new(BuiltinCurve::UnitCircle.build(128).unwrap());
        let x = c.point(s) + dir.normalize() * d;
        prop_assume!(c.distance(&x) > 0.04);
        let a = FilamentField::new(c.clone(), 0.01).unwrap().velocity(&x);
        let b = FilamentField::new(c.clone(), 0.03).unwrap().velocity(&x);
        prop_assert!((a - b).norm() < 1e-6 * a.norm().max(1.0));
    }

    #[test]
    fn curve_distance_is_a_pseudometric(
        a in prop::array::uniform3(0.0..0.1f64),
        m in prop::array::uniform3(2u32..5),
        shift in prop::array::uniform3(-0.2..0.2f64),
    ) {
        let cs: Vec<ClosedCurve> = (0..3).map(|i| perturbed(a[i], m[i], 128).shifted(shift[i]).unwrap()).collect();
        let d = |i: usize, j: usize| curve_distance(&cs[i], &cs[j]).unwrap();
        let (ab, ba) = (d(0, 1), d(1, 0));
        prop_assert!((ab.sup_dist - ba.sup_dist).abs() < 1e-8);
        prop_assert!((ab.tangent_l2 - ba.tangent_l2).abs() < 1e-8);
        prop_assert!(d(0, 0).sup_dist < 1e-8);
        prop_assert!(d(0, 2).sup_dist <= ab.sup_dist + d(1, 2).sup_dist + 1e-8);
        prop_assert!(d(0, 2).tangent_l2 <= ab.tangent_l2 + d(1, 2).tangent_l2 + 1e-8);
    }
}

#[test]
fn empty_suite_list_is_valid_and_randomized_suites_need_a_seed() {
    let c = ExperimentConfig {
        suites: vec![],
        ..Default::default()
    };
    assert!(c.validate().is_ok());
    for s in Suite::ALL {
        let c = ExperimentConfig {
            suites: vec![s],
            ..Default::default()
        };
        assert_eq!(c.validate().is_err(), s.is_randomized());
    }
}
