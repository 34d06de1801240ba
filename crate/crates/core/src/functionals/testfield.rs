//! Smooth test fields with closed-form derivatives.

use serde::{Deserialize, Serialize};

use crate::numeric::{smoothstep7, smoothstep7_d1, smoothstep7_d2, SMOOTHSTEP7_MAX_SLOPE};
use crate::{Mat3, Vec3};

/// Radial plateau χ(|x − c|/scale): 1 on the ball of radius `scale`,
/// 0 outside twice that radius, degree-7 polynomial transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: Vec3,
    pub scale: f64,
}

impl Bump {
    pub fn new(center: Vec3, scale: f64) -> Self {
        assert!(scale > 0.0, "bump scale must be positive");
        Bump { center, scale }
    }

    pub fn support_radius(&self) -> f64 {
        2.0 * self.scale
    }

    pub fn value(&self, x: &Vec3) -> f64 {
        let t = (x - self.center).norm() / self.scale;
        1.0 - smoothstep7(t - 1.0)
    }

    pub fn gradient(&self, x: &Vec3) -> Vec3 {
        let d = x - self.center;
        let r = d.norm();
        let t = r / self.scale;
        if !(1.0..2.0).contains(&t) {
            return Vec3::zeros();
        }
        d * (-smoothstep7_d1(t - 1.0) / (self.scale * r))
    }

    pub fn hessian(&self, x: &Vec3) -> Mat3 {
        let d = x - self.center;
        let r = d.norm();
        let t = r / self.scale;
        if !(1.0..2.0).contains(&t) {
            return Mat3::zeros();
        }
        let e = d / r;
        let c1 = -smoothstep7_d1(t - 1.0) / self.scale;
        let c2 = -smoothstep7_d2(t - 1.0) / (self.scale * self.scale);
        let ee = e * e.transpose();
        ee * c2 + (Mat3::identity() - ee) * (c1 / r)
    }

    /// sup |∇χ|.
    pub fn max_slope(&self) -> f64 {
        SMOOTHSTEP7_MAX_SLOPE / self.scale
    }
}

/// Azimuthal field −ψ(z)·k(ρ)·e_θ about an axis, in coordinates (ρ, θ, z)
/// centred at `center`. ψ(z) = z·exp(−z²/2σ²) for |z| < 4σ with a smooth
/// cutoff, k(ρ) = R·K(ρ/R), K(t) = [t(2 − t)]² on [0, 2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingField {
    pub center: Vec3,
    pub axis: Vec3,
    pub radius: f64,
    pub sigma: f64,
    pub amplitude: f64,
}

impl RingField {
    fn frame(&self) -> (Vec3, Vec3, Vec3) {
        let a = self.axis.normalize();
        let helper = if a.x.abs() < 0.9 {
            Vec3::x()
        } else {
            Vec3::y()
        };
        let e1 = a.cross(&helper).normalize();
        let e2 = a.cross(&e1);
        (e1, e2, a)
    }

    fn psi(&self, z: f64) -> (f64, f64) {
        let s = self.sigma;
        let u = (z.abs() - 3.0 * s) / s;
        let cut = 1.0 - smoothstep7(u);
        let dcut = -smoothstep7_d1(u) / s * z.signum();
        let g = (-z * z / (2.0 * s * s)).exp();
        let val = z * g;
        let dval = g * (1.0 - z * z / (s * s));
        (val * cut, dval * cut + val * dcut)
    }

    fn k(&self, rho: f64) -> (f64, f64) {
        let r = self.radius;
        let t = rho / r;
        if t >= 2.0 {
            return (0.0, 0.0);
        }
        let q = t * (2.0 - t);
        let dq = 2.0 - 2.0 * t;
        (r * q * q, 2.0 * q * dq)
    }

    pub fn support_radius(&self) -> f64 {
        (2.0 * self.radius).hypot(4.0 * self.sigma)
    }

    pub fn value(&self, x: &Vec3) -> Vec3 {
        let (e1, e2, a) = self.frame();
        let d = x - self.center;
        let z = d.dot(&a);
        let (p, q) = (d.dot(&e1), d.dot(&e2));
        let rho = p.hypot(q);
        if rho == 0.0 {
            return Vec3::zeros();
        }
        let eth = (e2 * p - e1 * q) / rho;
        let (psi, _) = self.psi(z);
        let (k, _) = self.k(rho);
        eth * (-self.amplitude * psi * k)
    }

    /// Closed-form curl: −∂_zξ_θ e_ρ + (1/ρ)∂_ρ(ρξ_θ) e_z.
    pub fn curl(&self, x: &Vec3) -> Vec3 {
        let (e1, e2, a) = self.frame();
        let d = x - self.center;
        let z = d.dot(&a);
        let (p, q) = (d.dot(&e1), d.dot(&e2));
        let rho = p.hypot(q);
        let (psi, dpsi) = self.psi(z);
        let (k, dk) = self.k(rho);
        let amp = self.amplitude;
        // ξ_θ = −amp·ψ·k, and k/ρ → 4 R·t(2−t)²/R... finite at the axis.
        let k_over_rho = if rho > 0.0 { k / rho } else { 0.0 };
        let cz = -amp * psi * (k_over_rho + dk);
        if rho == 0.0 {
            return a * cz;
        }
        let erho = (e1 * p + e2 * q) / rho;
        erho * (amp * dpsi * k) + a * cz
    }

    /// Curl magnitude on the meridian half-plane (ρ ≥ 0, z).
    pub fn curl_norm_meridian(&self, rho: f64, z: f64) -> f64 {
        let (psi, dpsi) = self.psi(z);
        let (k, dk) = self.k(rho);
        let k_over_rho = if rho > 0.0 { k / rho } else { 0.0 };
        let cz = psi * (k_over_rho + dk);
        let cr = dpsi * k;
        self.amplitude.abs() * cz.hypot(cr)
    }
}

/// Vector-valued test field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TestField {
    /// a·χ.
    Plateau {
        bump: Bump,
        coeff: Vec3,
    },
    /// amplitude·∇χ, an exact form.
    Gradient {
        bump: Bump,
        amplitude: f64,
    },
    /// B·x + b; not compactly supported.
    Affine {
        matrix: Mat3,
        offset: Vec3,
    },
    Ring(RingField),
    Sum(Vec<TestField>),
}

fn curl_of_jacobian(j: &Mat3) -> Vec3 {
    Vec3::new(
        j[(2, 1)] - j[(1, 2)],
        j[(0, 2)] - j[(2, 0)],
        j[(1, 0)] - j[(0, 1)],
    )
}

impl TestField {
    pub fn plateau(center: Vec3, scale: f64, coeff: Vec3) -> Self {
        TestField::Plateau {
            bump: Bump::new(center, scale),
            coeff,
        }
    }

    pub fn value(&self, x: &Vec3) -> Vec3 {
        match self {
            TestField::Plateau { bump, coeff } => coeff * bump.value(x),
            TestField::Gradient { bump, amplitude } => bump.gradient(x) * *amplitude,
            TestField::Affine { matrix, offset } => matrix * x + offset,
            TestField::Ring(r) => r.value(x),
            TestField::Sum(v) => v.iter().fold(Vec3::zeros(), |a, f| a + f.value(x)),
        }
    }

    /// J_ij = ∂_j φ_i.
    pub fn jacobian(&self, x: &Vec3) -> Mat3 {
        match self {
            TestField::Plateau { bump, coeff } => coeff * bump.gradient(x).transpose(),
            TestField::Gradient { bump, amplitude } => bump.hessian(x) * *amplitude,
            TestField::Affine { matrix, .. } => *matrix,
            TestField::Ring(r) => {
                let h = 1e-5 * r.radius.min(r.sigma);
                let mut j = Mat3::zeros();
                for c in 0..3 {
                    let mut e = Vec3::zeros();
                    e[c] = h;
                    j.set_column(c, &((r.value(&(x + e)) - r.value(&(x - e))) / (2.0 * h)));
                }
                j
            }
            TestField::Sum(v) => v.iter().fold(Mat3::zeros(), |a, f| a + f.jacobian(x)),
        }
    }

    pub fn curl(&self, x: &Vec3) -> Vec3 {
        match self {
            TestField::Plateau { bump, coeff } => bump.gradient(x).cross(coeff),
            TestField::Gradient { .. } => Vec3::zeros(),
            TestField::Affine { matrix, .. } => curl_of_jacobian(matrix),
            TestField::Ring(r) => r.curl(x),
            TestField::Sum(v) => v.iter().fold(Vec3::zeros(), |a, f| a + f.curl(x)),
        }
    }

    /// M_ij = ∂_j (∇×φ)_i. Its trace is div curl φ = 0.
    pub fn grad_curl(&self, x: &Vec3) -> Mat3 {
        match self {
            TestField::Plateau { bump, coeff } => {
                let h = bump.hessian(x);
                let mut m = Mat3::zeros();
                for j in 0..3 {
                    let col: Vec3 = h.column(j).into();
                    m.set_column(j, &col.cross(coeff));
                }
                m
            }
            TestField::Gradient { .. } | TestField::Affine { .. } => Mat3::zeros(),
            TestField::Ring(r) => {
                let h = 1e-5 * r.radius.min(r.sigma);
                let mut m = Mat3::zeros();
                for c in 0..3 {
                    let mut e = Vec3::zeros();
                    e[c] = h;
                    m.set_column(c, &((r.curl(&(x + e)) - r.curl(&(x - e))) / (2.0 * h)));
                }
                m
            }
            TestField::Sum(v) => v.iter().fold(Mat3::zeros(), |a, f| a + f.grad_curl(x)),
        }
    }

    /// Centre and radius of a ball containing the support, if compact.
    pub fn support(&self) -> Option<(Vec3, f64)> {
        match self {
            TestField::Plateau { bump, .. } | TestField::Gradient { bump, .. } => {
                Some((bump.center, bump.support_radius()))
            }
            TestField::Affine { .. } => None,
            TestField::Ring(r) => Some((r.center, r.support_radius())),
            TestField::Sum(v) => {
                let balls: Option<Vec<(Vec3, f64)>> = v.iter().map(|f| f.support()).collect();
                enclosing_ball(&balls?)
            }
        }
    }

    /// ‖φ‖_∞ (closed form where available, an upper bound for sums).
    pub fn sup_norm(&self) -> f64 {
        match self {
            TestField::Plateau { coeff, .. } => coeff.norm(),
            TestField::Gradient { bump, amplitude } => amplitude.abs() * bump.max_slope(),
            TestField::Affine { .. } => f64::INFINITY,
            TestField::Ring(r) => {
                let s = r.sigma;
                // max |z e^{-z²/2σ²}| = σ e^{-1/2}; max K = 1.
                r.amplitude.abs() * s * (-0.5f64).exp() * r.radius
            }
            TestField::Sum(v) => v.iter().map(|f| f.sup_norm()).sum(),
        }
    }

    /// ‖∇φ‖_∞.
    pub fn grad_sup_norm(&self) -> f64 {
        match self {
            TestField::Plateau { bump, coeff } => coeff.norm() * bump.max_slope(),
            TestField::Affine { matrix, .. } => matrix.norm(),
            TestField::Sum(v) => v.iter().map(|f| f.grad_sup_norm()).sum(),
            _ => self.sampled_max(|x| self.jacobian(x).norm()),
        }
    }

    /// ‖∇×φ‖_∞.
    pub fn curl_sup_norm(&self) -> f64 {
        match self {
            TestField::Plateau { bump, coeff } => coeff.norm() * bump.max_slope(),
            TestField::Gradient { .. } => 0.0,
            TestField::Affine { matrix, .. } => curl_of_jacobian(matrix).norm(),
            _ => self.sampled_max(|x| self.curl(x).norm()),
        }
    }

    /// ‖φ‖_∞ + L‖∇φ‖_∞.
    pub fn w1inf_l(&self, length: f64) -> f64 {
        self.sup_norm() + length * self.grad_sup_norm()
    }

    fn sampled_max(&self, f: impl Fn(&Vec3) -> f64) -> f64 {
        let (c, r) = self.support().unwrap_or((Vec3::zeros(), 1.0));
        let m = 48;
        let mut best: f64 = 0.0;
        for i in 0..=m {
            for j in 0..=m {
                for k in 0..=m {
                    let x = c + Vec3::new(i as f64, j as f64, k as f64)
                        .map(|t| r * (2.0 * t / m as f64 - 1.0));
                    best = best.max(f(&x));
                }
            }
        }
        best
    }
}

fn enclosing_ball(balls: &[(Vec3, f64)]) -> Option<(Vec3, f64)> {
    if balls.is_empty() {
        return None;
    }
    let c = balls.iter().fold(Vec3::zeros(), |a, b| a + b.0) / balls.len() as f64;
    let r = balls
        .iter()
        .map(|(x, r)| (x - c).norm() + r)
        .fold(0.0, f64::max);
    Some((c, r))
}

/// Matrix-valued test field for the momentum-flux functionals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TensorField {
    /// A·χ.
    Plateau {
        bump: Bump,
        coeff: Mat3,
    },
    /// ∇(∇×φ).
    GradCurl(TestField),
    Sum(Vec<TensorField>),
}

impl TensorField {
    pub fn plateau(center: Vec3, scale: f64, coeff: Mat3) -> Self {
        TensorField::Plateau {
            bump: Bump::new(center, scale),
            coeff,
        }
    }

    pub fn value(&self, x: &Vec3) -> Mat3 {
        match self {
            TensorField::Plateau { bump, coeff } => coeff * bump.value(x),
            TensorField::GradCurl(f) => f.grad_curl(x),
            TensorField::Sum(v) => v.iter().fold(Mat3::zeros(), |a, f| a + f.value(x)),
        }
    }

    pub fn support(&self) -> Option<(Vec3, f64)> {
        match self {
            TensorField::Plateau { bump, .. } => Some((bump.center, bump.support_radius())),
            TensorField::GradCurl(f) => f.support(),
            TensorField::Sum(v) => {
                let balls: Option<Vec<(Vec3, f64)>> = v.iter().map(|f| f.support()).collect();
                enclosing_ball(&balls?)
            }
        }
    }

    /// ‖φ‖_∞ with the Frobenius norm on matrices.
    pub fn sup_norm(&self) -> f64 {
        match self {
            TensorField::Plateau { coeff, .. } => coeff.norm(),
            TensorField::GradCurl(f) => sampled_tensor_max(f, |x| f.grad_curl(x).norm()),
            TensorField::Sum(v) => v.iter().map(|f| f.sup_norm()).sum(),
        }
    }

    /// ‖∇φ‖_∞; finite differences of the closed form for `GradCurl`.
    pub fn grad_sup_norm(&self) -> f64 {
        match self {
            TensorField::Plateau { bump, coeff } => coeff.norm() * bump.max_slope(),
            TensorField::GradCurl(f) => sampled_tensor_max(f, |x| {
                let h = 1e-5;
                let mut acc = 0.0;
                for c in 0..3 {
                    let mut e = Vec3::zeros();
                    e[c] = h;
                    acc += ((f.grad_curl(&(x + e)) - f.grad_curl(&(x - e))) / (2.0 * h))
                        .norm_squared();
                }
                acc.sqrt()
            }),
            TensorField::Sum(v) => v.iter().map(|f| f.grad_sup_norm()).sum(),
        }
    }

    pub fn w1inf_l(&self, length: f64) -> f64 {
        self.sup_norm() + length * self.grad_sup_norm()
    }
}

fn sampled_tensor_max(f: &TestField, g: impl Fn(&Vec3) -> f64) -> f64 {
    f.sampled_max(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_jacobian(f: &dyn Fn(&Vec3) -> Vec3, x: &Vec3) -> Mat3 {
        let h = 1e-6;
        let mut j = Mat3::zeros();
        for c in 0..3 {
            let mut e = Vec3::zeros();
            e[c] = h;
            j.set_column(c, &((f(&(x + e)) - f(&(x - e))) / (2.0 * h)));
        }
        j
    }

    fn probes() -> Vec<Vec3> {
        (0..40)
            .map(|k| {
                let t = k as f64 * 0.7;
                Vec3::new(
                    0.05 + 0.3 * t.sin(),
                    0.2 * (1.3 * t).cos(),
                    0.25 * (0.9 * t).sin(),
                )
            })
            .collect()
    }

    #[test]
    fn plateau_derivatives_match_finite_differences() {
        let f = TestField::plateau(
            Vec3::new(0.02, -0.01, 0.03),
            0.12,
            Vec3::new(0.3, -1.0, 0.5),
        );
        for x in probes() {
            let j = fd_jacobian(&|y| f.value(y), &x);
            assert!((j - f.jacobian(&x)).norm() < 1e-7);
            let m = fd_jacobian(&|y| f.curl(y), &x);
            assert!((m - f.grad_curl(&x)).norm() < 1e-6 * (1.0 + m.norm()));
            assert!(f.grad_curl(&x).trace().abs() < 1e-10);
        }
    }

    #[test]
    fn ring_curl_matches_finite_differences() {
        let r = RingField {
            center: Vec3::new(0.0, 0.0, 0.01),
            axis: Vec3::new(0.1, 0.0, 1.0),
            radius: 0.1,
            sigma: 0.04,
            amplitude: 1.0,
        };
        let f = TestField::Ring(r);
        for x in probes() {
            let j = fd_jacobian(&|y| f.value(y), &x);
            let c = curl_of_jacobian(&j);
            assert!(
                (c - f.curl(&x)).norm() < 1e-6 * (1.0 + c.norm()),
                "{c} vs {}",
                f.curl(&x)
            );
        }
    }

    #[test]
    fn gradient_field_is_curl_free() {
        let f = TestField::Gradient {
            bump: Bump::new(Vec3::zeros(), 0.1),
            amplitude: 2.0,
        };
        for x in probes() {
            let j = fd_jacobian(&|y| f.value(y), &x);
            assert!((j - f.jacobian(&x)).norm() < 1e-6 * (1.0 + j.norm()));
            assert!(curl_of_jacobian(&j).norm() < 1e-6 * (1.0 + j.norm()));
        }
    }

    #[test]
    fn support_and_norms() {
        let b = Bump::new(Vec3::zeros(), 0.2);
        assert_eq!(b.value(&Vec3::new(0.41, 0.0, 0.0)), 0.0);
        assert_eq!(b.value(&Vec3::new(0.19, 0.0, 0.0)), 1.0);
        let f = TestField::plateau(Vec3::zeros(), 0.2, Vec3::new(3.0, 4.0, 0.0));
        assert_eq!(f.sup_norm(), 5.0);
        assert!((f.grad_sup_norm() - 5.0 * 2.1875 / 0.2).abs() < 1e-12);
    }
}
