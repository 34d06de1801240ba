use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{gl10, UniformSpline};
use crate::Vec3;

/// Uniform-ball mollifier ρ^ε = 3/(4πε³)·1_{B_ε}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mollifier {
    epsilon: f64,
}

impl Mollifier {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::arg(
                "epsilon",
                format!("must be positive, got {epsilon}"),
            ));
        }
        Ok(Mollifier { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn density(&self, r: f64) -> f64 {
        if r < self.epsilon {
            3.0 / (4.0 * PI * self.epsilon.powi(3))
        } else {
            0.0
        }
    }

    /// K^ε(z) = ∇(ρ^ε∗G)(z): the Newtonian kernel −z/(4π|z|³) outside the
    /// ball, linear inside.
    #[inline]
    pub fn kernel(&self, z: &Vec3) -> Vec3 {
        let r2 = z.norm_squared();
        let e = self.epsilon;
        if r2 >= e * e {
            let r = r2.sqrt();
            -z / (4.0 * PI * r2 * r)
        } else {
            -z / (4.0 * PI * e * e * e)
        }
    }

    /// (ρ^ε∗G)(r): Newtonian potential of the uniform ball.
    #[inline]
    pub fn potential(&self, r: f64) -> f64 {
        let e = self.epsilon;
        if r >= e {
            1.0 / (4.0 * PI * r)
        } else {
            (3.0 * e * e - r * r) / (8.0 * PI * e * e * e)
        }
    }

    /// Closed-form η^ε = ρ^ε∗ρ^ε: the normalized overlap volume of two
    /// ε-balls at distance r.
    pub fn eta(&self, r: f64) -> f64 {
        let e = self.epsilon;
        if r >= 2.0 * e {
            return 0.0;
        }
        3.0 * (4.0 * e + r) * (2.0 * e - r).powi(2) / (64.0 * PI * e.powi(6))
    }

    /// Antiderivative of u·(ρ^ε∗G)(u), vanishing at 0.
    fn q(&self, u: f64) -> f64 {
        let e = self.epsilon;
        if u <= e {
            (1.5 * e * e * u * u - 0.25 * u.powi(4)) / (8.0 * PI * e.powi(3))
        } else {
            5.0 * e / (32.0 * PI) + (u - e) / (4.0 * PI)
        }
    }

    /// (η^ε∗G)(r) by radial convolution of ρ^ε with ρ^ε∗G. The integrand is
    /// piecewise polynomial in the radial variable, so Gauss–Legendre on
    /// each smooth piece is exact up to round-off.
    pub fn eta_g_direct(&self, r: f64) -> f64 {
        let e = self.epsilon;
        if r >= 2.0 * e {
            return 1.0 / (4.0 * PI * r);
        }
        let mut cuts = vec![0.0, e];
        for b in [e - r, r - e] {
            if b > 0.0 && b < e {
                cuts.push(b);
            }
        }
        cuts.sort_by(|a, b| a.total_cmp(b));
        let rule = gl10();
        let mut acc = 0.0;
        for w in cuts.windows(2) {
            for (rho, wt) in rule.map(w[0], w[1]) {
                let inner = if r > 1e-12 * e {
                    (self.q(r + rho) - self.q((r - rho).abs())) / r
                } else {
                    2.0 * rho * self.potential(rho)
                };
                acc += wt * rho * inner;
            }
        }
        3.0 * acc / (2.0 * e.powi(3))
    }
}

pub const ETA_KNOTS: usize = 2049;

/// η^ε∗G tabulated on [0, 4ε] with a clamped cubic spline; exact Newtonian
/// value beyond 2ε.
#[derive(Debug, Clone)]
pub struct EtaProfile {
    mollifier: Mollifier,
    spline: UniformSpline,
}

impl EtaProfile {
    pub fn new(mollifier: Mollifier) -> Self {
        let e = mollifier.epsilon();
        let top = 4.0 * e;
        let dx = top / (ETA_KNOTS - 1) as f64;
        let y: Vec<f64> = (0..ETA_KNOTS)
            .map(|k| mollifier.eta_g_direct(k as f64 * dx))
            .collect();
        let d1 = -1.0 / (4.0 * PI * top * top);
        EtaProfile {
            mollifier,
            spline: UniformSpline::clamped(0.0, dx, y, 0.0, d1),
        }
    }

    pub fn mollifier(&self) -> Mollifier {
        self.mollifier
    }

    #[inline]
    pub fn value(&self, r: f64) -> f64 {
        if r >= 2.0 * self.mollifier.epsilon() {
            1.0 / (4.0 * PI * r)
        } else {
            self.spline.eval(r)
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        if r >= 2.0 * self.mollifier.epsilon() {
            -1.0 / (4.0 * PI * r * r)
        } else {
            self.spline.eval_d1(r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_gradient_of_potential() {
        let m = Mollifier::new(0.1).unwrap();
        for z in [Vec3::new(0.03, -0.02, 0.01), Vec3::new(0.2, 0.1, -0.3)] {
            let h = 1e-6;
            let mut g = Vec3::zeros();
            for d in 0..3 {
                let mut e = Vec3::zeros();
                e[d] = h;
                g[d] = (m.potential((z + e).norm()) - m.potential((z - e).norm())) / (2.0 * h);
            }
            assert!((g - m.kernel(&z)).norm() < 1e-7 * m.kernel(&z).norm());
        }
    }

    #[test]
    fn eta_has_unit_mass() {
        let m = Mollifier::new(0.3).unwrap();
        let rule = gl10();
        let mut mass = 0.0;
        for k in 0..20 {
            let (a, b) = (k as f64 * 0.03, (k + 1) as f64 * 0.03);
            for (r, w) in rule.map(a, b) {
                mass += w * 4.0 * PI * r * r * m.eta(r);
            }
        }
        assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eta_g_values() {
        let e = 0.05;
        let m = Mollifier::new(e).unwrap();
        let p = EtaProfile::new(m);
        assert!((p.value(0.0) - 3.0 / (10.0 * PI * e)).abs() < 1e-10 / e);
        assert!((p.value(3.0 * e) - 1.0 / (4.0 * PI * 3.0 * e)).abs() < 1e-14 / e);
        assert!((m.eta_g_direct(2.0 * e) - 1.0 / (8.0 * PI * e)).abs() < 1e-12 / e);
        let mut prev = f64::INFINITY;
        for k in 0..400 {
            let v = p.value(k as f64 * 0.01 * e);
            assert!(v <= prev + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn gauss_law_recovers_eta() {
        // -(1/r²)(r² f')' = η for the profile f = η∗G.
        let e = 0.1;
        let m = Mollifier::new(e).unwrap();
        let p = EtaProfile::new(m);
        for k in 1..20 {
            let r = k as f64 * 0.1 * e;
            let h = 1e-4 * e;
            let flux = |x: f64| x * x * p.derivative(x);
            let lap = (flux(r + h) - flux(r - h)) / (2.0 * h) / (r * r);
            assert!((-lap - m.eta(r)).abs() < 1e-6 * m.eta(0.0), "r={r}");
        }
    }
}
