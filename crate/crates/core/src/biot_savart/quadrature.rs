//! Composite line quadrature around a foot point on a closed curve.
//!
//! The arc |u| < 4·core around the foot is split at ±core/2, ±core, ±2core
//! and at the supplied kinks, and each piece is integrated adaptively. The
//! remaining arc is covered by geometrically growing 10-point Gauss–Legendre
//! panels, split further until each panel is shorter than the distance from
//! the target point to the curve at its midpoint.

use crate::geometry::ClosedCurve;
use crate::numeric::{adaptive_gl, gl10, gl_panel};
use crate::Vec3;

pub(crate) const NEAR_FACTOR: f64 = 4.0;
const NEAR_REL_TOL: f64 = 1e-8;
const NEAR_DEPTH: u32 = 8;
const FAR_DEPTH: u32 = 12;

/// Setup of one line integral.
pub(crate) struct LineSetup<'a> {
    pub curve: &'a ClosedCurve,
    /// Point whose distance to the curve steers far-panel splitting.
    pub target: Vec3,
    /// Foot parameter.
    pub s0: f64,
    /// Length scale of the integrand near the foot.
    pub core: f64,
    /// Extra breakpoints as offsets from the foot.
    pub kinks: &'a [f64],
    /// Magnitude estimate used for the adaptive tolerance.
    pub scale: f64,
}

pub(crate) fn integrate<const K: usize>(
    setup: &LineSetup<'_>,
    f: &mut impl FnMut(f64) -> [f64; K],
) -> [f64; K] {
    let curve = setup.curve;
    let half = 0.5 * curve.length();
    let core = setup.core.min(half / NEAR_FACTOR).max(1e-300);
    let near = NEAR_FACTOR * core;

    let mut near_edges: Vec<f64> = vec![
        -near,
        -2.0 * core,
        -core,
        -0.5 * core,
        0.0,
        0.5 * core,
        core,
        2.0 * core,
        near,
    ];
    let mut far_edges: Vec<f64> = Vec::new();
    let mut e = near;
    while e < half {
        far_edges.push(e);
        e *= 2.0;
    }
    far_edges.push(half);
    for &k in setup.kinks {
        if k.abs() < near {
            near_edges.push(k);
        } else if k.abs() < half {
            far_edges.push(k);
        }
    }
    if let Some((_, cum)) = curve.polygon_vertices() {
        for c in cum.iter().take(cum.len() - 1) {
            let off = curve.param_diff(*c, setup.s0);
            if off.abs() < near {
                near_edges.push(off);
            } else {
                far_edges.push(off);
            }
        }
    }
    near_edges.sort_by(|a, b| a.total_cmp(b));
    near_edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * half);

    let mut acc = [0.0; K];
    let mut add = |v: [f64; K]| {
        for k in 0..K {
            acc[k] += v[k];
        }
    };
    let mut g = |u: f64| f(setup.s0 + u);
    for w in near_edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a <= 0.0 {
            continue;
        }
        let sc = setup.scale * (b - a) / (2.0 * near);
        add(adaptive_gl(a, b, NEAR_REL_TOL, sc, NEAR_DEPTH, &mut g));
    }

    // Far arc on each side, offsets measured outward.
    let mut pos: Vec<f64> = far_edges.iter().filter(|x| **x > 0.0).cloned().collect();
    let mut neg: Vec<f64> = far_edges.iter().filter(|x| **x < 0.0).map(|x| -x).collect();
    for side in [&mut pos, &mut neg] {
        side.push(near);
        side.push(half);
        side.sort_by(|a, b| a.total_cmp(b));
        side.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * half);
        side.retain(|x| *x >= near && *x <= half);
    }
    let rule = gl10();
    for (sign, side) in [(1.0, &pos), (-1.0, &neg)] {
        for w in side.windows(2) {
            let (a, b) = (sign * w[0], sign * w[1]);
            far_panel(setup, rule, a.min(b), a.max(b), FAR_DEPTH, &mut g, &mut add);
        }
    }
    acc
}

fn far_panel<const K: usize>(
    setup: &LineSetup<'_>,
    rule: &crate::numeric::GlRule,
    a: f64,
    b: f64,
    depth: u32,
    g: &mut impl FnMut(f64) -> [f64; K],
    add: &mut impl FnMut([f64; K]),
) {
    if b <= a {
        return;
    }
    let mid = 0.5 * (a + b);
    let d = (setup.curve.point(setup.s0 + mid) - setup.target).norm();
    if depth > 0 && b - a > 0.8 * d {
        far_panel(setup, rule, a, mid, depth - 1, g, add);
        far_panel(setup, rule, mid, b, depth - 1, g, add);
        return;
    }
    add(gl_panel(rule, a, b, g));
}

/// Offsets u (one per side) where |x − γ(s0 + u)| first reaches `radius`,
/// for a foot at distance `d < radius`.
pub(crate) fn sphere_crossings(
    curve: &ClosedCurve,
    x: &Vec3,
    s0: f64,
    d: f64,
    radius: f64,
) -> [Option<f64>; 2] {
    let half = 0.5 * curve.length();
    let g = |u: f64| (curve.point(s0 + u) - x).norm() - radius;
    let guess = (radius * radius - d * d).max(0.0).sqrt().max(1e-3 * radius);
    let mut out = [None, None];
    for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
        // Bracket outward from the foot.
        let mut lo = 0.0;
        let mut hi = guess;
        let mut found = false;
        while hi <= half {
            if g(sign * hi) >= 0.0 {
                found = true;
                break;
            }
            lo = hi;
            hi *= 1.5;
        }
        if !found {
            continue;
        }
        // Illinois-modified regula falsi.
        let (mut fa, mut fb) = (g(sign * lo), g(sign * hi));
        let mut side = 0;
        for _ in 0..60 {
            let c = (lo * fb - hi * fa) / (fb - fa);
            let fc = g(sign * c);
            if fc.abs() <= 1e-15 * radius || (hi - lo) <= 1e-15 * radius {
                lo = c;
                hi = c;
                break;
            }
            if fc < 0.0 {
                lo = c;
                fa = fc;
                if side == -1 {
                    fb *= 0.5;
                }
                side = -1;
            } else {
                hi = c;
                fb = fc;
                if side == 1 {
                    fa *= 0.5;
                }
                side = 1;
            }
        }
        out[k] = Some(sign * 0.5 * (lo + hi));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BuiltinCurve;

    #[test]
    fn integrates_smooth_periodic_function_exactly() {
        let c = BuiltinCurve::UnitCircle.build(128).unwrap();
        let setup = LineSetup {
            curve: &c,
            target: c.samples()[3],
            s0: c.param(3),
            core: 1e-3,
            kinks: &[],
            scale: 1.0,
        };
        let v = integrate(&setup, &mut |s: f64| {
            [(2.0 * std::f64::consts::PI * s).cos().powi(2), 1.0]
        });
        assert!((v[0] - 0.5).abs() < 1e-13);
        assert!((v[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn crossings_on_circle() {
        let c = BuiltinCurve::UnitCircle.build(128).unwrap();
        let x = c.samples()[0];
        let r = 0.01;
        let [a, b] = sphere_crossings(&c, &x, 0.0, 0.0, r);
        let a = a.unwrap();
        let b = b.unwrap();
        // chord 2R sin(u/2R) = r
        let big_r = 1.0 / (2.0 * std::f64::consts::PI);
        let exact = 2.0 * big_r * (r / (2.0 * big_r)).asin();
        assert!((a - exact).abs() < 1e-13 && (b + exact).abs() < 1e-13);
    }
}
