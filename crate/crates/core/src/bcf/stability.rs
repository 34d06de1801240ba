use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::FlowTrajectory;
use crate::error::{Error, Result};
use crate::geometry::ClosedCurve;
use crate::numeric::pairwise_sum;
use crate::Vec3;

/// X_γ(x) = f(dist²(x, Γ))·τ(ζ(x)) with f(r²) = (1 − 4r²/R_γ²)³ inside the
/// R_γ/2 tube, evaluated on the states of a flow trajectory.
#[derive(Debug, Clone)]
pub struct StabilityField {
    traj: Arc<FlowTrajectory>,
    r_gamma: f64,
}

/// One rprop evaluation: |∂_tX·ξ − ∇(∇×X):ξ⊗ξ| against 1 − X·ξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RpropProbe {
    pub residual: f64,
    pub bound: f64,
}

fn cutoff(d2: f64, r: f64) -> f64 {
    let u = 1.0 - 4.0 * d2 / (r * r);
    if u <= 0.0 {
        0.0
    } else {
        u * u * u
    }
}

// Fourth-order central first-derivative weights at offsets ±1, ±2.
const D4: [(f64, f64); 4] = [
    (-2.0, 1.0 / 12.0),
    (-1.0, -8.0 / 12.0),
    (1.0, 8.0 / 12.0),
    (2.0, -1.0 / 12.0),
];

impl StabilityField {
    /// R_γ = ¼·min over all states and samples of the security radius.
    pub fn new(traj: Arc<FlowTrajectory>) -> Result<Self> {
        if traj.is_empty() {
            return Err(Error::arg("trajectory", "no states"));
        }
        let rmin = traj
            .states
            .iter()
            .map(|c| c.min_security_radius())
            .fold(f64::INFINITY, f64::min);
        Self::with_radius(traj, 0.25 * rmin)
    }

    pub fn with_radius(traj: Arc<FlowTrajectory>, r_gamma: f64) -> Result<Self> {
        if traj.states.iter().any(|c| c.is_polygon()) {
            return Err(Error::PolygonMode);
        }
        if !(r_gamma > 0.0 && r_gamma.is_finite()) {
            return Err(Error::arg("r_gamma", "tube radius must be positive"));
        }
        Ok(StabilityField { traj, r_gamma })
    }

    pub fn r_gamma(&self) -> f64 {
        self.r_gamma
    }

    pub fn trajectory(&self) -> &FlowTrajectory {
        &self.traj
    }

    fn state(&self, k: usize) -> &ClosedCurve {
        &self.traj.states[k]
    }

    /// X at state `k`.
    pub fn eval(&self, k: usize, x: &Vec3) -> Vec3 {
        let c = self.state(k);
        let tp = c.tube_project(x);
        let f = cutoff(tp.dist * tp.dist, self.r_gamma);
        if f == 0.0 {
            return Vec3::zeros();
        }
        c.tangent(tp.s).normalize() * f
    }

    /// ∇×X at state `k` by fourth-order differences with step `h`.
    fn curl(&self, k: usize, x: &Vec3, h: f64) -> Vec3 {
        let mut jac = [[0.0; 3]; 3];
        for (j, row) in jac.iter_mut().enumerate() {
            let mut e = Vec3::zeros();
            e[j] = h;
            let mut d = Vec3::zeros();
            for (o, w) in D4 {
                d += self.eval(k, &(x + e * o)) * w;
            }
            d /= h;
            // row j holds ∂_j X.
            *row = [d.x, d.y, d.z];
        }
        Vec3::new(
            jac[1][2] - jac[2][1],
            jac[2][0] - jac[0][2],
            jac[0][1] - jac[1][0],
        )
    }

    /// ∇(∇×X):ξ⊗ξ = d/dt [ξ·∇×X(x + tξ)] at t = 0.
    fn grad_curl_xi(&self, k: usize, x: &Vec3, xi: &Vec3, h: f64) -> f64 {
        let mut acc = 0.0;
        for (o, w) in D4 {
            acc += w * xi.dot(&self.curl(k, &(x + xi * (o * h)), h));
        }
        acc / h
    }

    fn check_inside(&self, k: usize, x: &Vec3) -> Result<()> {
        let d = self.state(k).tube_project(x).dist;
        if d >= 0.5 * self.r_gamma {
            return Err(Error::OutsideTube {
                dist: d,
                radius: 0.5 * self.r_gamma,
            });
        }
        Ok(())
    }

    /// rprop residual at state `k`: the time derivative by central
    /// differences over states k ± 1, spatial derivatives with step `h_fd`.
    pub fn rprop(&self, k: usize, x: &Vec3, xi: &Vec3, h_fd: f64) -> Result<RpropProbe> {
        let n = self.traj.len();
        if k == 0 || k + 1 >= n {
            return Err(Error::arg("k", format!("state {k} is not interior")));
        }
        if !(h_fd > 0.0) {
            return Err(Error::arg("h_fd", "must be positive"));
        }
        let xn = xi.norm();
        if !(xn > 0.0 && xn.is_finite()) {
            return Err(Error::arg("xi", "must be a nonzero vector"));
        }
        let xi = xi / xn;
        for j in [k - 1, k, k + 1] {
            self.check_inside(j, x)?;
        }
        let dt = self.traj.times[k + 1] - self.traj.times[k - 1];
        let dxdt = (self.eval(k + 1, x) - self.eval(k - 1, x)) / dt;
        let gc = self.grad_curl_xi(k, x, &xi, h_fd);
        let residual = (dxdt.dot(&xi) - gc).abs();
        let bound = 1.0 - self.eval(k, x).dot(&xi);
        Ok(RpropProbe { residual, bound })
    }

    /// E_γ(Λ) = |Λ| − ∮X·dλ at state `k`, by the trapezoid rule.
    pub fn defect(&self, k: usize, lambda: &ClosedCurve) -> f64 {
        let h = lambda.spacing();
        let v: Vec<f64> = lambda
            .samples()
            .iter()
            .zip(lambda.tangents())
            .map(|(p, t)| t.norm() - self.eval(k, p).dot(t))
            .collect();
        pairwise_sum(&v) * h
    }
}
