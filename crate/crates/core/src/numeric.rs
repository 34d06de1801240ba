//! Small numerical kernels shared by the modules: Gauss–Legendre rules,
//! deterministic summation, 1-D minimization, splines and smooth steps.

use std::sync::OnceLock;

/// Pairwise (tree) summation. Deterministic for a fixed input order and
/// accurate to O(log n) rounding steps.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if v.len() <= BLOCK {
        let mut acc = 0.0;
        for x in v {
            acc += x;
        }
        return acc;
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

pub struct GlRule {
    pub x: Vec<f64>,
    pub w: Vec<f64>,
}

macro_rules! cached_rule {
    ($name:ident, $n:expr) => {
        pub fn $name() -> &'static GlRule {
            static R: OnceLock<GlRule> = OnceLock::new();
            R.get_or_init(|| {
                let (x, w) = gauss_legendre($n);
                GlRule { x, w }
            })
        }
    };
}

cached_rule!(gl3, 3);
cached_rule!(gl4, 4);
cached_rule!(gl6, 6);
cached_rule!(gl10, 10);
cached_rule!(gl16, 16);

impl GlRule {
    /// Nodes and weights mapped to [a, b].
    pub fn map(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let hw = 0.5 * (b - a);
        self.x
            .iter()
            .zip(&self.w)
            .map(move |(x, w)| (c + hw * x, hw * w))
    }
}

/// Fixed-rule integral of a K-vector valued function on [a, b].
pub fn gl_panel<const K: usize>(
    rule: &GlRule,
    a: f64,
    b: f64,
    f: &mut impl FnMut(f64) -> [f64; K],
) -> [f64; K] {
    let mut acc = [0.0; K];
    for (t, w) in rule.map(a, b) {
        let v = f(t);
        for k in 0..K {
            acc[k] += w * v[k];
        }
    }
    acc
}

fn norm_inf<const K: usize>(v: &[f64; K]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Adaptive bisection with the 10-point Gauss–Legendre rule. A panel is
/// accepted when the two-half estimate agrees with the whole-panel estimate
/// to `rel` (relative to `scale`, or to the estimate itself when larger).
pub fn adaptive_gl<const K: usize>(
    a: f64,
    b: f64,
    rel: f64,
    scale: f64,
    max_depth: u32,
    f: &mut impl FnMut(f64) -> [f64; K],
) -> [f64; K] {
    let rule = gl10();
    let whole = gl_panel(rule, a, b, f);
    adaptive_rec(rule, a, b, whole, rel, scale, max_depth, f)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_rec<const K: usize>(
    rule: &GlRule,
    a: f64,
    b: f64,
    whole: [f64; K],
    rel: f64,
    scale: f64,
    depth: u32,
    f: &mut impl FnMut(f64) -> [f64; K],
) -> [f64; K] {
    let m = 0.5 * (a + b);
    let left = gl_panel(rule, a, m, f);
    let right = gl_panel(rule, m, b, f);
    let mut both = [0.0; K];
    let mut diff = [0.0; K];
    for k in 0..K {
        both[k] = left[k] + right[k];
        diff[k] = both[k] - whole[k];
    }
    let tol = rel * scale.max(norm_inf(&both));
    if depth == 0 || norm_inf(&diff) <= tol {
        return both;
    }
    let l = adaptive_rec(rule, a, m, left, rel, scale * 0.5, depth - 1, f);
    let r = adaptive_rec(rule, m, b, right, rel, scale * 0.5, depth - 1, f);
    let mut out = [0.0; K];
    for k in 0..K {
        out[k] = l[k] + r[k];
    }
    out
}

/// Golden-section minimization of a unimodal function on [a, b].
pub fn golden_min(mut a: f64, mut b: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Least-squares line y = slope·x + intercept.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        sxy += (xi - mx) * (yi - my);
        sxx += (xi - mx) * (xi - mx);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Degree-7 smoothstep on [0, 1]: C³ at both ends.
pub fn smoothstep7(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let u4 = u * u * u * u;
    u4 * (35.0 + u * (-84.0 + u * (70.0 - 20.0 * u)))
}

pub fn smoothstep7_d1(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    let v = 1.0 - u;
    140.0 * u * u * u * v * v * v
}

pub fn smoothstep7_d2(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    let v = 1.0 - u;
    420.0 * u * u * v * v * (1.0 - 2.0 * u)
}

pub fn smoothstep7_d3(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    // d/du [420 u²(1-u)²(1-2u)]
    let v = 1.0 - u;
    420.0
        * (2.0 * u * v * v * (1.0 - 2.0 * u)
            - 2.0 * u * u * v * (1.0 - 2.0 * u)
            - 2.0 * u * u * v * v)
}

/// Maximum of |S'| for the degree-7 smoothstep, attained at u = 1/2.
pub const SMOOTHSTEP7_MAX_SLOPE: f64 = 2.1875;

/// Clamped cubic spline on uniform knots.
#[derive(Debug, Clone)]
pub struct UniformSpline {
    x0: f64,
    dx: f64,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl UniformSpline {
    /// `d0`, `d1` are the prescribed end slopes.
    pub fn clamped(x0: f64, dx: f64, y: Vec<f64>, d0: f64, d1: f64) -> Self {
        let n = y.len();
        assert!(n >= 3);
        // Solve for second derivatives m with the clamped end conditions.
        let h = dx;
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut r = vec![0.0; n];
        b[0] = 2.0 * h;
        c[0] = h;
        r[0] = 6.0 * ((y[1] - y[0]) / h - d0);
        for i in 1..n - 1 {
            a[i] = h;
            b[i] = 4.0 * h;
            c[i] = h;
            r[i] = 6.0 * (y[i + 1] - 2.0 * y[i] + y[i - 1]) / h;
        }
        a[n - 1] = h;
        b[n - 1] = 2.0 * h;
        r[n - 1] = 6.0 * (d1 - (y[n - 1] - y[n - 2]) / h);
        // Thomas algorithm.
        for i in 1..n {
            let w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            r[i] -= w * r[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = r[n - 1] / b[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (r[i] - c[i] * m[i + 1]) / b[i];
        }
        UniformSpline { x0, dx, y, m }
    }

    pub fn x_max(&self) -> f64 {
        self.x0 + self.dx * (self.y.len() - 1) as f64
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.y.len();
        let t = ((x - self.x0) / self.dx).clamp(0.0, (n - 1) as f64);
        let i = (t.floor() as usize).min(n - 2);
        let u = t - i as f64;
        let v = 1.0 - u;
        let h2 = self.dx * self.dx;
        v * self.y[i]
            + u * self.y[i + 1]
            + h2 / 6.0 * ((v * v * v - v) * self.m[i] + (u * u * u - u) * self.m[i + 1])
    }

    pub fn eval_d1(&self, x: f64) -> f64 {
        let n = self.y.len();
        let t = ((x - self.x0) / self.dx).clamp(0.0, (n - 1) as f64);
        let i = (t.floor() as usize).min(n - 2);
        let u = t - i as f64;
        let v = 1.0 - u;
        let h = self.dx;
        (self.y[i + 1] - self.y[i]) / h
            + h / 6.0 * (-(3.0 * v * v - 1.0) * self.m[i] + (3.0 * u * u - 1.0) * self.m[i + 1])
    }
}

/// Wraps `x` into (-half, half] for a period `2·half`.
pub fn wrap_centered(x: f64, period: f64) -> f64 {
    let mut y = x.rem_euclid(period);
    if y > 0.5 * period {
        y -= period;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1usize, 3, 4, 10, 16] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..2 * n {
                let num: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                assert!((num - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn adaptive_handles_kink() {
        let v = adaptive_gl(-1.0, 2.0, 1e-12, 1.0, 30, &mut |x: f64| [x.abs()]);
        assert!((v[0] - 2.5).abs() < 1e-9);
    }

    #[test]
    fn golden_finds_parabola_min() {
        let (x, _) = golden_min(-3.0, 5.0, 1e-10, |x| (x - 1.25).powi(2));
        assert!((x - 1.25).abs() < 1e-8);
    }

    #[test]
    fn spline_reproduces_cubic() {
        let f = |x: f64| 1.0 + x - 0.5 * x * x + 0.25 * x * x * x;
        let df = |x: f64| 1.0 - x + 0.75 * x * x;
        let y: Vec<f64> = (0..21).map(|i| f(i as f64 * 0.1)).collect();
        let s = UniformSpline::clamped(0.0, 0.1, y, df(0.0), df(2.0));
        for k in 0..97 {
            let x = k as f64 * 0.0207;
            assert!((s.eval(x) - f(x)).abs() < 1e-12);
            assert!((s.eval_d1(x) - df(x)).abs() < 1e-11);
        }
    }

    #[test]
    fn smoothstep_derivatives_match_finite_differences() {
        let h = 1e-5;
        for k in 1..20 {
            let u = k as f64 / 20.0;
            let fd1 = (smoothstep7(u + h) - smoothstep7(u - h)) / (2.0 * h);
            let fd2 = (smoothstep7_d1(u + h) - smoothstep7_d1(u - h)) / (2.0 * h);
            let fd3 = (smoothstep7_d2(u + h) - smoothstep7_d2(u - h)) / (2.0 * h);
            assert!((fd1 - smoothstep7_d1(u)).abs() < 1e-8);
            assert!((fd2 - smoothstep7_d2(u)).abs() < 1e-7);
            assert!((fd3 - smoothstep7_d3(u)).abs() < 1e-6);
        }
        assert!((smoothstep7_d1(0.5) - SMOOTHSTEP7_MAX_SLOPE).abs() < 1e-14);
    }

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 499500.0);
    }
}
