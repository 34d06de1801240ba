use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ClosedCurve;
use crate::error::{Error, Result};
use crate::Vec3;

/// Closed-form test curves. All but `Circle` are normalized to unit length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BuiltinCurve {
    /// Planar circle of the given radius in the xy-plane, counterclockwise.
    Circle { radius: f64 },
    /// Circle of radius 1/2π.
    UnitCircle,
    /// Ellipse with semi-axes a, b, rescaled to unit length.
    Ellipse { a: f64, b: f64 },
    /// (2,3) torus knot, rescaled to unit length.
    Trefoil,
    /// Planar circle with radial modulation 1 + amplitude·cos(mode·θ),
    /// rescaled to unit length.
    PerturbedCircle { amplitude: f64, mode: u32 },
}

impl BuiltinCurve {
    pub fn name(&self) -> &'static str {
        match self {
            BuiltinCurve::Circle { .. } => "circle",
            BuiltinCurve::UnitCircle => "unit-circle",
            BuiltinCurve::Ellipse { .. } => "ellipse",
            BuiltinCurve::Trefoil => "trefoil",
            BuiltinCurve::PerturbedCircle { .. } => "perturbed-circle",
        }
    }

    pub fn build(&self, n: usize) -> Result<ClosedCurve> {
        match *self {
            BuiltinCurve::Circle { radius } => circle(radius, n),
            BuiltinCurve::UnitCircle => circle(1.0 / (2.0 * PI), n),
            BuiltinCurve::Ellipse { a, b } => {
                if !(a > 0.0 && b > 0.0) {
                    return Err(Error::arg("ellipse", "semi-axes must be positive"));
                }
                unit_length(ClosedCurve::from_parametric(
                    |t| {
                        let th = 2.0 * PI * t;
                        Vec3::new(a * th.cos(), b * th.sin(), 0.0)
                    },
                    n,
                )?)
            }
            BuiltinCurve::Trefoil => unit_length(ClosedCurve::from_parametric(
                |t| {
                    let th = 2.0 * PI * t;
                    let rho = 2.0 + (3.0 * th).cos();
                    Vec3::new(
                        rho * (2.0 * th).cos(),
                        rho * (2.0 * th).sin(),
                        (3.0 * th).sin(),
                    )
                },
                n,
            )?),
            BuiltinCurve::PerturbedCircle { amplitude, mode } => {
                if amplitude.abs() >= 0.5 {
                    return Err(Error::arg("amplitude", "must be below 0.5"));
                }
                unit_length(ClosedCurve::from_parametric(
                    |t| {
                        let th = 2.0 * PI * t;
                        let rho = 1.0 + amplitude * (mode as f64 * th).cos();
                        Vec3::new(rho * th.cos(), rho * th.sin(), 0.0)
                    },
                    n,
                )?)
            }
        }
    }
}

fn unit_length(c: ClosedCurve) -> Result<ClosedCurve> {
    let l = c.length();
    c.scaled(1.0 / l)
}

fn circle(radius: f64, n: usize) -> Result<ClosedCurve> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::arg("radius", "must be positive"));
    }
    let samples = (0..n)
        .map(|i| {
            let th = 2.0 * PI * i as f64 / n as f64;
            Vec3::new(radius * th.cos(), radius * th.sin(), 0.0)
        })
        .collect();
    ClosedCurve::from_arclength_samples(samples, 2.0 * PI * radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalized_curves_have_unit_length() {
        for c in [
            BuiltinCurve::UnitCircle,
            BuiltinCurve::Ellipse { a: 0.3, b: 0.2 },
            BuiltinCurve::Trefoil,
            BuiltinCurve::PerturbedCircle {
                amplitude: 0.1,
                mode: 3,
            },
        ] {
            let k = c.build(256).unwrap();
            assert!((k.length() - 1.0).abs() < 1e-12, "{}", c.name());
            assert!(
                k.speed_defect() < 1e-8,
                "{}: {}",
                c.name(),
                k.speed_defect()
            );
        }
    }

    #[test]
    fn config_round_trip() {
        let c = BuiltinCurve::PerturbedCircle {
            amplitude: 0.05,
            mode: 4,
        };
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<BuiltinCurve>(&s).unwrap(), c);
    }
}
