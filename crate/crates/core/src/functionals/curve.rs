//! Curve-side functionals: integrals along Γ only.

use crate::geometry::ClosedCurve;
use crate::numeric::pairwise_sum;
use crate::{Mat3, Vec3};

use super::testfield::{TensorField, TestField};

fn trapezoid(curve: &ClosedCurve, f: impl Fn(&Vec3, &Vec3) -> f64) -> f64 {
    let (xs, ts, h) = curve.fine_points();
    let vals: Vec<f64> = xs.iter().zip(ts).map(|(x, t)| f(x, t)).collect();
    pairwise_sum(&vals) * h
}

/// ∫_Γ φ : (I − τ⊗τ) dH¹.
pub fn curve_flux(curve: &ClosedCurve, phi: &TensorField) -> f64 {
    trapezoid(curve, |x, t| {
        let tt = t * t.transpose() / t.norm_squared();
        phi.value(x).component_mul(&(Mat3::identity() - tt)).sum()
    })
}

/// ℓ_{B,φ}(Γ) = ∮ φ·τ dH¹.
pub fn moment_curve(curve: &ClosedCurve, phi: &TestField) -> f64 {
    trapezoid(curve, |x, t| phi.value(x).dot(t))
}

/// {H_B, ℓ_φ}(Γ) = ∫_Γ ∇(∇×φ) : (I − τ⊗τ) dH¹.
pub fn bracket_bcf(curve: &ClosedCurve, phi: &TestField) -> f64 {
    curve_flux(curve, &TensorField::GradCurl(phi.clone()))
}
