//! Kinetic energy of the mollified field and its excess over the
//! logarithmic leading term.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::biot_savart::FilamentField;
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// ∫|v^ε|² dx as the double line integral ∬ (η^ε∗G)(γ(s)−γ(t)) γ'(s)·γ'(t).
/// The outer integral is the periodic trapezoid rule on the curve grid; the
/// inner one is refined adaptively in the |s − t| < 4ε band.
pub fn kinetic_energy_l2(field: &FilamentField) -> f64 {
    let curve = field.curve();
    let h = curve.spacing();
    let vals: Vec<f64> = (0..curve.n())
        .into_par_iter()
        .map(|i| field.energy_density(curve.param(i)))
        .collect();
    pairwise_sum(&vals) * h
}

/// k_ε = 4π/|log(ε/L)|.
pub fn k_eps(epsilon: f64, length: f64) -> Result<f64> {
    if !(epsilon > 0.0 && length > 0.0) {
        return Err(Error::arg("epsilon", "epsilon and length must be positive"));
    }
    if epsilon >= 0.5 * length {
        return Err(Error::arg(
            "epsilon",
            format!("must be below L/2 = {}, got {epsilon}", 0.5 * length),
        ));
    }
    Ok(4.0 * PI / (epsilon / length).ln().abs())
}

/// (k_ε/L)·(∫|v|²/2) − 1.
pub fn excess(l2_squared: f64, epsilon: f64, length: f64) -> Result<f64> {
    if !(l2_squared >= 0.0) {
        return Err(Error::arg(
            "l2_squared",
            format!("must be non-negative, got {l2_squared}"),
        ));
    }
    Ok(k_eps(epsilon, length)? / length * 0.5 * l2_squared - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub epsilon: f64,
    pub length: f64,
    pub l2_squared: f64,
    pub k_eps: f64,
    pub excess: f64,
}

impl EnergyReport {
    pub fn compute(field: &FilamentField) -> Result<Self> {
        let length = field.curve().length();
        let epsilon = field.epsilon();
        let k = k_eps(epsilon, length)?;
        let l2 = kinetic_energy_l2(field);
        Ok(EnergyReport {
            epsilon,
            length,
            l2_squared: l2,
            k_eps: k,
            excess: excess(l2, epsilon, length)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BuiltinCurve;

    #[test]
    fn excess_formula() {
        let eps: f64 = 2f64.powi(-8);
        let l2 = eps.ln().abs() / (2.0 * PI);
        assert!(excess(l2, eps, 1.0).unwrap().abs() < 1e-14);
        assert!((excess(1.3 * l2, eps, 1.0).unwrap() - 0.3).abs() < 1e-12);
        assert!(excess(1.0, 0.5, 1.0).is_err());
        assert!(k_eps(0.01, 1.0).unwrap() < k_eps(0.02, 1.0).unwrap());
    }

    #[test]
    fn circle_energy_leading_term() {
        let c = BuiltinCurve::UnitCircle.build(256).unwrap();
        let eps: f64 = 2f64.powi(-8);
        let f = FilamentField::new(c.clone(), eps).unwrap();
        let e = kinetic_energy_l2(&f);
        let lead = eps.ln().abs() / (2.0 * PI);
        let kappa = 2.0 * PI;
        assert!((e - lead).abs() < 0.6 * kappa * kappa, "{e} vs {lead}");
        let mirrored = c
            .transformed(&crate::Mat3::from_diagonal(&crate::Vec3::new(
                1.0, 1.0, -1.0,
            )))
            .unwrap();
        let e2 = kinetic_energy_l2(&FilamentField::new(mirrored, eps).unwrap());
        assert!((e - e2).abs() < 1e-10 * e);
    }
}
