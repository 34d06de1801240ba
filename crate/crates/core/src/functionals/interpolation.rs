//! Interpolation between weak-L¹ and L²: ‖f‖_p ≤ C‖f‖_{1,∞}^{(2−p)/p}‖f‖_2^{(2p−2)/p}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::weak_l1inf;
use crate::numeric::pairwise_sum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationNorms {
    pub lp: f64,
    pub weak_l1: f64,
    pub l2: f64,
    pub ratio: f64,
}

/// Norms of a nonnegative grid function with cell volume `cell_volume`, and
/// the ratio ‖f‖_p / (‖f‖_{1,∞}^{(2−p)/p}·‖f‖_2^{(2p−2)/p}).
pub fn interpolation_check(values: &[f64], cell_volume: f64, p: f64) -> Result<InterpolationNorms> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::arg("p", format!("must lie in (1, 2), got {p}")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::arg("values", "non-finite grid value"));
    }
    let weak = weak_l1inf(values, cell_volume)?;
    let lp = (pairwise_sum(&values.iter().map(|v| v.powf(p)).collect::<Vec<_>>()) * cell_volume)
        .powf(1.0 / p);
    let l2 = (pairwise_sum(&values.iter().map(|v| v * v).collect::<Vec<_>>()) * cell_volume).sqrt();
    if !(weak > 0.0 && l2 > 0.0 && weak.is_finite() && l2.is_finite()) {
        return Err(Error::arg("values", "norms must be positive and finite"));
    }
    let ratio = lp / (weak.powf((2.0 - p) / p) * l2.powf((2.0 * p - 2.0) / p));
    Ok(InterpolationNorms {
        lp,
        weak_l1: weak,
        l2,
        ratio,
    })
}

/// Samples f_α = min(A, |x|^{−α}) on the cell centres of a uniform grid
/// over [−R, R]³, zero outside the ball of radius R.
pub fn truncated_power(alpha: f64, cap: f64, radius: f64, n: usize) -> (Vec<f64>, f64) {
    let h = 2.0 * radius / n as f64;
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let c = |m: usize| -radius + (m as f64 + 0.5) * h;
                let r = (c(i).powi(2) + c(j).powi(2) + c(k).powi(2)).sqrt();
                out.push(if r > radius {
                    0.0
                } else {
                    r.powf(-alpha).min(cap)
                });
            }
        }
    }
    (out, h * h * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn indicator_of_ball_closed_form() {
        // For 1_B all three norms follow from |B|: ratio = |B|^{1/p − (2−p)/p − (p−1)/p} = 1.
        let n = 64;
        let (f, dv) = truncated_power(0.0, 1.0, 1.0, n);
        let r = interpolation_check(&f, dv, 4.0 / 3.0).unwrap();
        let vol: f64 = f.iter().sum::<f64>() * dv;
        assert!((vol - 4.0 * PI / 3.0).abs() < 0.02 * vol);
        assert!((r.weak_l1 - vol).abs() < 1e-12 * vol);
        assert!((r.ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn homogeneous_under_scaling() {
        let (f, dv) = truncated_power(2.0, 50.0, 1.0, 24);
        let g: Vec<f64> = f.iter().map(|x| 3.7 * x).collect();
        let a = interpolation_check(&f, dv, 1.5).unwrap().ratio;
        let b = interpolation_check(&g, dv, 1.5).unwrap().ratio;
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(interpolation_check(&[1.0], 1.0, 2.0).is_err());
        assert!(interpolation_check(&[f64::INFINITY], 1.0, 1.5).is_err());
    }
}
