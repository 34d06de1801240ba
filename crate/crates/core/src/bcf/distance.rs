use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ClosedCurve;
use crate::numeric::{golden_min, pairwise_sum, wrap_centered};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveDistance {
    /// sup_s |λ(s) − γ(s + σ̄)|.
    pub sup_dist: f64,
    /// (∮|λ' − γ'(· + σ̄)|²)^{1/2}.
    pub tangent_l2: f64,
    /// Shift minimizing ∮|λ(s) − γ(s + σ)|² ds, wrapped to (−L/2, L/2].
    pub sigma_bar: f64,
}

fn shift_energy(lambda: &ClosedCurve, gamma: &ClosedCurve, sigma: f64) -> f64 {
    let v: Vec<f64> = (0..lambda.n())
        .map(|i| (lambda.samples()[i] - gamma.point(lambda.param(i) + sigma)).norm_squared())
        .collect();
    pairwise_sum(&v) * lambda.spacing()
}

/// (g, g') for g = d/dσ of the shift energy.
fn shift_newton(lambda: &ClosedCurve, gamma: &ClosedCurve, sigma: f64) -> (f64, f64) {
    let n = lambda.n();
    let mut g = Vec::with_capacity(n);
    let mut gp = Vec::with_capacity(n);
    for i in 0..n {
        let s = lambda.param(i) + sigma;
        let (p, t) = gamma.point_tangent(s);
        let d = lambda.samples()[i] - p;
        g.push(-2.0 * d.dot(&t));
        gp.push(2.0 * (t.norm_squared() - d.dot(&gamma.second(s))));
    }
    let h = lambda.spacing();
    (pairwise_sum(&g) * h, pairwise_sum(&gp) * h)
}

/// Parametrization-aware distance between two closed curves of equal
/// length.
pub fn curve_distance(lambda: &ClosedCurve, gamma: &ClosedCurve) -> Result<CurveDistance> {
    if lambda.is_polygon() || gamma.is_polygon() {
        return Err(Error::PolygonMode);
    }
    let l = gamma.length();
    if (lambda.length() - l).abs() > 1e-6 * l {
        return Err(Error::arg(
            "lambda",
            format!("length {} differs from {}", lambda.length(), l),
        ));
    }
    const SCAN: usize = 64;
    let step = l / SCAN as f64;
    let (mut best, mut fbest) = (0.0, f64::INFINITY);
    for j in 0..SCAN {
        let s = j as f64 * step;
        let f = shift_energy(lambda, gamma, s);
        if f < fbest {
            best = s;
            fbest = f;
        }
    }
    let (mut sigma, _) = golden_min(best - step, best + step, 1e-9 * l, |s| {
        shift_energy(lambda, gamma, s)
    });
    for _ in 0..8 {
        let (g, gp) = shift_newton(lambda, gamma, sigma);
        if gp <= 0.0 {
            break;
        }
        let d = g / gp;
        if d.abs() > step {
            break;
        }
        sigma -= d;
        if d.abs() < 1e-15 * l {
            break;
        }
    }

    let gap = |s: f64| (lambda.point(s) - gamma.point(s + sigma)).norm_squared();
    let h = lambda.spacing();
    let mut imax = 0;
    let mut dmax = -1.0;
    for i in 0..lambda.n() {
        let d = gap(lambda.param(i));
        if d > dmax {
            dmax = d;
            imax = i;
        }
    }
    let s0 = lambda.param(imax);
    let (_, neg) = golden_min(s0 - h, s0 + h, 1e-12 * l, |s| -gap(s));
    let sup_dist = dmax.max(-neg).sqrt();

    let tv: Vec<f64> = (0..lambda.n())
        .map(|i| (lambda.tangents()[i] - gamma.tangent(lambda.param(i) + sigma)).norm_squared())
        .collect();
    let tangent_l2 = (pairwise_sum(&tv) * h).sqrt();
    Ok(CurveDistance {
        sup_dist,
        tangent_l2,
        sigma_bar: wrap_centered(sigma, l),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BuiltinCurve;
    use crate::Vec3;
    use std::f64::consts::PI;

    #[test]
    fn pure_shift() {
        let c = BuiltinCurve::Trefoil.build(256).unwrap();
        let lam = c.shifted(-0.3).unwrap();
        let d = curve_distance(&lam, &c).unwrap();
        assert!(d.sup_dist < 1e-8 && d.tangent_l2 < 1e-8, "{d:?}");
        assert!((d.sigma_bar + 0.3).abs() < 1e-8, "{d:?}");
    }

    #[test]
    fn translation() {
        let c = BuiltinCurve::Ellipse { a: 0.2, b: 0.12 }
            .build(256)
            .unwrap();
        let z = Vec3::new(1e-3, -2e-3, 5e-4);
        let d = curve_distance(&c.translated(z), &c).unwrap();
        assert!((d.sup_dist - z.norm()).abs() < 1e-10);
        assert!(d.tangent_l2 < 1e-10);
        assert!(d.sigma_bar.abs() < 1e-8);
    }

    #[test]
    fn normal_wiggle_tangent_error() {
        let (a, m) = (1e-4, 5.0);
        let r = 1.0 / (2.0 * PI);
        let wig = ClosedCurve::from_parametric(
            |t| {
                let th = 2.0 * PI * t;
                let rho = r + a * (m * th).cos();
                Vec3::new(rho * th.cos(), rho * th.sin(), 0.0)
            },
            256,
        )
        .unwrap();
        let wig = wig.scaled(1.0 / wig.length()).unwrap();
        let c = BuiltinCurve::UnitCircle.build(256).unwrap();
        let d = curve_distance(&wig, &c).unwrap();
        // First order: the normal tangent error carries the factor m − 1/m.
        let expect = a * (m - 1.0 / m) * 2.0 * PI / 2f64.sqrt();
        assert!(
            (d.tangent_l2 / expect - 1.0).abs() < 0.02,
            "{} vs {expect}",
            d.tangent_l2
        );
    }

    #[test]
    fn rejects_length_mismatch() {
        let c = BuiltinCurve::UnitCircle.build(64).unwrap();
        let big = c.scaled(1.1).unwrap();
        assert!(curve_distance(&big, &c).is_err());
    }
}
