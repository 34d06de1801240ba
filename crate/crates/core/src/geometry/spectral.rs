//! Periodic trigonometric interpolation of sampled closed curves.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::Vec3;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Signed wavenumber of FFT bin `k` for length `n`. The Nyquist bin is
/// reported as +n/2.
#[inline]
pub fn wavenumber(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Normalized Fourier coefficients of a real periodic sequence.
pub fn forward_scalar(v: &[f64]) -> Vec<Complex64> {
    let n = v.len();
    let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    plan(n, false).process(&mut buf);
    let s = 1.0 / n as f64;
    for c in &mut buf {
        *c *= s;
    }
    buf
}

/// Coefficients of each coordinate of a sampled closed curve.
pub fn forward(points: &[Vec3]) -> [Vec<Complex64>; 3] {
    let col = |d: usize| forward_scalar(&points.iter().map(|p| p[d]).collect::<Vec<_>>());
    [col(0), col(1), col(2)]
}

/// Multiplier of the `order`-th derivative for bin `k` on a period `period`.
/// Odd derivatives of the Nyquist mode vanish on the grid.
fn diff_factor(k: usize, n: usize, period: f64, order: u32) -> Complex64 {
    if order == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if n.is_multiple_of(2) && k == n / 2 && order % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let w = 2.0 * PI * wavenumber(k, n) as f64 / period;
    Complex64::new(0.0, w).powu(order)
}

fn inverse_real(mut buf: Vec<Complex64>) -> Vec<f64> {
    let n = buf.len();
    plan(n, true).process(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// Coefficients at round-off level relative to the largest one; they are
/// dropped before differentiation so that noise is not amplified by k^m.
fn noise_floor(c: &[Vec<Complex64>; 3]) -> f64 {
    let m = c
        .iter()
        .flat_map(|v| v.iter().skip(1))
        .fold(0.0_f64, |a, z| a.max(z.norm()));
    let m0 = c.iter().fold(0.0_f64, |a, v| a.max(v[0].norm()));
    2e-16 * m.max(1e-3 * m0)
}

/// Derivative of the given order sampled back on the original grid.
pub fn derivative(coeffs: &[Vec<Complex64>; 3], period: f64, order: u32) -> Vec<Vec3> {
    let n = coeffs[0].len();
    let floor = if order > 0 { noise_floor(coeffs) } else { 0.0 };
    let cols: Vec<Vec<f64>> = coeffs
        .iter()
        .map(|c| {
            let buf = c
                .iter()
                .enumerate()
                .map(|(k, ck)| {
                    if ck.norm() < floor {
                        Complex64::new(0.0, 0.0)
                    } else {
                        ck * diff_factor(k, n, period, order)
                    }
                })
                .collect();
            inverse_real(buf)
        })
        .collect();
    (0..n)
        .map(|i| Vec3::new(cols[0][i], cols[1][i], cols[2][i]))
        .collect()
}

/// Zero-padded evaluation of the `order`-th derivative on a grid of `m ≥ n`
/// points. The Nyquist coefficient is split evenly between ±n/2, which is
/// the cosine interpretation used by [`eval_scalar`].
pub fn upsample(coeffs: &[Vec<Complex64>; 3], period: f64, m: usize, order: u32) -> Vec<Vec3> {
    let n = coeffs[0].len();
    assert!(m >= n);
    let floor = if order > 0 { noise_floor(coeffs) } else { 0.0 };
    let cols: Vec<Vec<f64>> = coeffs
        .iter()
        .map(|c| {
            let mut buf = vec![Complex64::new(0.0, 0.0); m];
            for (k, ck) in c.iter().enumerate() {
                if ck.norm() < floor {
                    continue;
                }
                let kw = wavenumber(k, n);
                if n.is_multiple_of(2) && k == n / 2 {
                    let w = 2.0 * PI * kw as f64 / period;
                    let half = ck * 0.5;
                    buf[k] += half * Complex64::new(0.0, w).powu(order);
                    buf[m - k] += half * Complex64::new(0.0, -w).powu(order);
                    continue;
                }
                let idx = if kw >= 0 {
                    kw as usize
                } else {
                    (m as i64 + kw) as usize
                };
                let w = 2.0 * PI * kw as f64 / period;
                buf[idx] += ck * Complex64::new(0.0, w).powu(order);
            }
            inverse_real(buf)
        })
        .collect();
    (0..m)
        .map(|i| Vec3::new(cols[0][i], cols[1][i], cols[2][i]))
        .collect()
}

/// Direct O(n) evaluation of a real trigonometric interpolant and its first
/// derivative at an arbitrary parameter `t` (period `period`).
pub fn eval_scalar(c: &[Complex64], period: f64, t: f64) -> (f64, f64) {
    let n = c.len();
    let theta = 2.0 * PI * t / period;
    let z = Complex64::new(theta.cos(), theta.sin());
    let mut zk = Complex64::new(1.0, 0.0);
    let mut val = c[0].re;
    let mut der = Complex64::new(0.0, 0.0);
    let top = if n.is_multiple_of(2) {
        n / 2
    } else {
        n / 2 + 1
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, ck) in c.iter().enumerate().take(top).skip(1) {
        zk *= z;
        let term = ck * zk;
        acc += term;
        der += term * (k as f64);
    }
    val += 2.0 * acc.re;
    let w0 = 2.0 * PI / period;
    let mut d = -2.0 * w0 * der.im;
    if n.is_multiple_of(2) {
        let kn = (n / 2) as f64;
        let cn = c[n / 2].re;
        val += cn * (kn * theta).cos();
        d -= cn * kn * w0 * (kn * theta).sin();
    }
    (val, d)
}

pub fn eval_point(coeffs: &[Vec<Complex64>; 3], period: f64, t: f64) -> (Vec3, Vec3) {
    let (x, dx) = eval_scalar(&coeffs[0], period, t);
    let (y, dy) = eval_scalar(&coeffs[1], period, t);
    let (z, dz) = eval_scalar(&coeffs[2], period, t);
    (Vec3::new(x, y, z), Vec3::new(dx, dy, dz))
}

/// Resamples a closed curve given by `points` (uniform in an arbitrary
/// smooth periodic parameter t ∈ [0,1)) at `n_out` points equally spaced in
/// the arclength of its trigonometric interpolant. Returns the samples and
/// the interpolant's length. The first output sample is `points[0]`.
pub fn arclength_resample(points: &[Vec3], n_out: usize) -> (Vec<Vec3>, f64) {
    let m = points.len();
    let coeffs = forward(points);
    let d1 = derivative(&coeffs, 1.0, 1);
    let speed: Vec<f64> = d1.iter().map(|v| v.norm()).collect();
    let sc = forward_scalar(&speed);
    let length = sc[0].re;
    // Cumulative arclength S(t) = L·t + Σ_{k≠0} ŝ_k (e^{2πikt} − 1)/(2πik).
    let top = if m.is_multiple_of(2) {
        m / 2
    } else {
        m / 2 + 1
    };
    let cum = |t: f64| -> (f64, f64) {
        let theta = 2.0 * PI * t;
        let z = Complex64::new(theta.cos(), theta.sin());
        let mut zk = Complex64::new(1.0, 0.0);
        let mut s = length * t;
        let mut sp = sc[0].re;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut accp = Complex64::new(0.0, 0.0);
        for (k, ck) in sc.iter().enumerate().take(top).skip(1) {
            zk *= z;
            let e = zk - 1.0;
            acc += ck * e / Complex64::new(0.0, 2.0 * PI * k as f64);
            accp += ck * zk;
        }
        s += 2.0 * acc.re;
        sp += 2.0 * accp.re;
        if m.is_multiple_of(2) {
            let kn = (m / 2) as f64;
            let cn = sc[m / 2].re;
            s += cn * (kn * theta).sin() / (2.0 * PI * kn);
            sp += cn * (kn * theta).cos();
        }
        (s, sp)
    };
    let mut out = Vec::with_capacity(n_out);
    let mut t = 0.0_f64;
    let ds = length / n_out as f64;
    for j in 0..n_out {
        let target = j as f64 * ds;
        if j > 0 {
            let (_, sp) = cum(t);
            t += ds / sp.max(1e-300);
        }
        for _ in 0..50 {
            let (s, sp) = cum(t);
            let dt = (s - target) / sp;
            t -= dt;
            if dt.abs() < 1e-15 {
                break;
            }
        }
        out.push(if j == 0 {
            points[0]
        } else {
            eval_point(&coeffs, 1.0, t).0
        });
    }
    (out, length)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_single_mode() {
        let n = 32;
        let pts: Vec<Vec3> = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                Vec3::new((3.0 * t).cos(), (2.0 * t).sin(), 0.5)
            })
            .collect();
        let c = forward(&pts);
        let d = derivative(&c, 2.0 * PI, 1);
        for (i, v) in d.iter().enumerate() {
            let t = 2.0 * PI * i as f64 / n as f64;
            assert!((v.x + 3.0 * (3.0 * t).sin()).abs() < 1e-12);
            assert!((v.y - 2.0 * (2.0 * t).cos()).abs() < 1e-12);
            assert!(v.z.abs() < 1e-12);
        }
    }

    #[test]
    fn direct_evaluation_matches_upsampling() {
        let n = 16;
        let pts: Vec<Vec3> = (0..n)
            .map(|i| {
                let t = i as f64 / n as f64;
                Vec3::new(
                    (2.0 * PI * t).cos() + 0.1 * (16.0 * PI * t).cos(),
                    (2.0 * PI * t).sin(),
                    0.0,
                )
            })
            .collect();
        let c = forward(&pts);
        let fine = upsample(&c, 1.0, 64, 0);
        let dfine = upsample(&c, 1.0, 64, 1);
        for (i, (p, d)) in fine.iter().zip(&dfine).enumerate() {
            let (q, dq) = eval_point(&c, 1.0, i as f64 / 64.0);
            assert!((p - q).norm() < 1e-12);
            assert!((d - dq).norm() < 1e-10);
        }
    }
}
