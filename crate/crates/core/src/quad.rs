//! Quadrature primitives: tanh-sinh for endpoint singularities, adaptive
//! Gauss-Kronrod for smooth-but-structured integrands, Gauss-Legendre rules
//! and Chebyshev panel interpolation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: Complex64,
    pub error: f64,
    pub converged: bool,
}

const TS_MAX_LEVEL: usize = 10;
const TS_U_MAX: f64 = 3.6;

/// One abscissa of the tanh-sinh rule on [-1, 1] for u >= 0: the distance
/// `q` of the node from the nearer endpoint measured in units of the full
/// interval, and the weight factor.
#[derive(Clone, Copy)]
struct TsNode {
    q: f64,
    weight: f64,
}

fn ts_levels() -> &'static Vec<Vec<TsNode>> {
    static LEVELS: OnceLock<Vec<Vec<TsNode>>> = OnceLock::new();
    LEVELS.get_or_init(|| {
        let mut levels = Vec::with_capacity(TS_MAX_LEVEL + 1);
        for level in 0..=TS_MAX_LEVEL {
            let h = 0.5f64.powi(level as i32);
            let mut nodes = Vec::new();
            let mut j = 1;
            loop {
                if level > 0 && j % 2 == 0 {
                    j += 1;
                    continue;
                }
                let u = j as f64 * h;
                if u > TS_U_MAX {
                    break;
                }
                let s = FRAC_PI_2 * u.sinh();
                let q = 1.0 / ((2.0 * s).exp() + 1.0);
                // (b-a)/2 * pi/2 cosh(u) sech^2(s), sech^2 = 4q(1-q)
                let weight = FRAC_PI_2 * u.cosh() * 4.0 * q * (1.0 - q) * 0.5;
                if q > 0.0 {
                    nodes.push(TsNode { q, weight });
                }
                j += 1;
            }
            levels.push(nodes);
        }
        levels
    })
}

/// Tanh-sinh quadrature of `f` over [a, b]. The integrand receives the node
/// and its distances to `a` and `b` (exact even when the node rounds onto an
/// endpoint). Non-finite samples are dropped.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> QuadEstimate
where
    F: Fn(f64, f64, f64) -> Complex64,
{
    let width = b - a;
    if width == 0.0 {
        return QuadEstimate { value: Complex64::new(0.0, 0.0), error: 0.0, converged: true };
    }
    let levels = ts_levels();
    let eval = |q: f64| -> Complex64 {
        let d = width * q;
        let left = f(a + d, d, width - d);
        let right = f(b - d, width - d, d);
        let mut s = Complex64::new(0.0, 0.0);
        if left.re.is_finite() && left.im.is_finite() {
            s += left;
        }
        if right.re.is_finite() && right.im.is_finite() {
            s += right;
        }
        s
    };
    let centre = {
        let v = f(a + 0.5 * width, 0.5 * width, 0.5 * width);
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    // Sum of weight*f over all nodes at the current spacing, excluding h.
    let mut sum = centre * (FRAC_PI_2 * 0.5);
    for n in &levels[0] {
        sum += eval(n.q) * n.weight;
    }
    let mut h = 1.0;
    let mut estimate = sum * h * width;
    let mut error = f64::INFINITY;
    for level in levels.iter().skip(1) {
        h *= 0.5;
        for n in level {
            sum += eval(n.q) * n.weight;
        }
        let next = sum * h * width;
        error = (next - estimate).norm();
        estimate = next;
        if error <= abs_tol.max(rel_tol * estimate.norm()) {
            return QuadEstimate { value: estimate, error, converged: true };
        }
    }
    QuadEstimate { value: estimate, error, converged: false }
}

/// Real-valued convenience wrapper around [`tanh_sinh`].
pub fn tanh_sinh_real<F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> (f64, f64, bool)
where
    F: Fn(f64, f64, f64) -> f64,
{
    let r = tanh_sinh(|x, da, db| Complex64::new(f(x, da, db), 0.0), a, b, abs_tol, rel_tol);
    (r.value.re, r.error, r.converged)
}

// Gauss-Kronrod 7/15 abscissae and weights.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_64, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let value = kronrod * h;
    let error = ((kronrod - gauss) * h).norm();
    (value, error)
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// Globally adaptive Gauss-Kronrod (7/15) quadrature over the union of the
/// intervals between consecutive `breaks`.
pub fn adaptive_gk<F>(f: F, breaks: &[f64], abs_tol: f64, rel_tol: f64, max_segments: usize) -> QuadEstimate
where
    F: Fn(f64) -> Complex64,
{
    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, error) = gk15(&f, w[0], w[1]);
        total += value;
        total_err += error;
        heap.push(Segment { a: w[0], b: w[1], value, error });
    }
    while total_err > abs_tol.max(rel_tol * total.norm()) && heap.len() < max_segments {
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            heap.push(seg);
            break;
        }
        let (v1, e1) = gk15(&f, seg.a, mid);
        let (v2, e2) = gk15(&f, mid, seg.b);
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
    }
    // Re-sum to shed accumulated rounding from the running updates.
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for s in heap.iter() {
        value += s.value;
        error += s.error;
    }
    let converged = error <= abs_tol.max(rel_tol * value.norm());
    QuadEstimate { value, error, converged }
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                x
            } else {
                p1
            };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Cached 20-point Gauss-Legendre rule.
pub fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(20))
}

/// Chebyshev interpolant of a real function on one panel.
#[derive(Debug, Clone)]
pub struct ChebPanel {
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<f64>,
}

impl ChebPanel {
    /// Chebyshev first-kind points for `n` coefficients, mapped to [a, b].
    pub fn nodes(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|j| {
                let x = (PI * (j as f64 + 0.5) / n as f64).cos();
                0.5 * (a + b) + 0.5 * (b - a) * x
            })
            .collect()
    }

    /// Builds the interpolant from samples taken at [`ChebPanel::nodes`].
    pub fn from_samples(a: f64, b: f64, values: &[f64]) -> Self {
        let n = values.len();
        let coeffs = (0..n)
            .map(|k| {
                let s: f64 = values
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * (PI * k as f64 * (j as f64 + 0.5) / n as f64).cos())
                    .sum();
                let c = 2.0 * s / n as f64;
                if k == 0 {
                    0.5 * c
                } else {
                    c
                }
            })
            .collect();
        Self { a, b, coeffs }
    }

    /// Size of the trailing coefficients, a proxy for the interpolation error.
    pub fn tail(&self) -> f64 {
        let n = self.coeffs.len();
        self.coeffs[n - 3..].iter().map(|c| c.abs()).fold(0.0, f64::max)
    }

    pub fn eval(&self, e: f64) -> f64 {
        let x = (2.0 * e - self.a - self.b) / (self.b - self.a);
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + self.coeffs[0]
    }

    /// Exact integral of the interpolant over the panel.
    pub fn integral(&self) -> f64 {
        let half = 0.5 * (self.b - self.a);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| k % 2 == 0)
            .map(|(k, c)| c * 2.0 / (1.0 - (k * k) as f64))
            .sum::<f64>()
            * half
    }
}
