//! Globally adaptive Gauss–Kronrod (7/15) quadrature with an optional
//! `u² = x − a` substitution for inverse-square-root endpoint singularities.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{NumericsError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;
const DEFAULT_REL_FLOOR: f64 = 1e-14;

/// How to treat each endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EndpointBehavior {
    /// Probe the endpoint: a non-finite value switches on the substitution.
    #[default]
    Auto,
    Regular,
    /// Integrable `(x − endpoint)^{-1/2}` type singularity.
    InverseSqrt,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
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
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(NumericsError::NonFinite { x })
        }
    };
    let fc = eval(center)?;
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    Ok(Segment { a, b, value, error })
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let first = kronrod(f, a, b)?;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    while total_err > abs_tol.max(rel_tol * total.abs()) {
        if heap.len() >= MAX_INTERVALS {
            return Err(NumericsError::NoConvergence { estimate: total, error: total_err, intervals: heap.len() });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(NumericsError::NoConvergence { estimate: total, error: total_err, intervals: heap.len() + 1 });
        }
        let left = kronrod(f, worst.a, mid)?;
        let right = kronrod(f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Resum periodically to stop drift in the running sums.
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    Ok(heap.iter().map(|s| s.value).sum())
}

/// `∫_a^b f(x) dx` to absolute tolerance `tol`.
///
/// Endpoint singularities of type `(x − a)^{-1/2}` are detected by probing the
/// endpoints; a non-finite endpoint value switches on the substitution
/// `u² = x − a` (or `u² = b − x`) on that side.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate_with(f, a, b, tol, DEFAULT_REL_FLOOR, EndpointBehavior::Auto, EndpointBehavior::Auto)
}

/// Like [`integrate`] but also stops once the error is below `rel_tol·|I|`.
pub fn integrate_rel<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    integrate_with(f, a, b, abs_tol, rel_tol.max(DEFAULT_REL_FLOOR), EndpointBehavior::Auto, EndpointBehavior::Auto)
}

pub fn integrate_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    left: EndpointBehavior,
    right: EndpointBehavior,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(NumericsError::InvalidInput(format!("integration bounds must be finite: [{a}, {b}]")));
    }
    if a > b {
        return Err(NumericsError::InvalidInput(format!("integration bounds reversed: [{a}, {b}]")));
    }
    if !(abs_tol > 0.0) {
        return Err(NumericsError::InvalidInput(format!("tolerance must be positive, got {abs_tol}")));
    }
    if a == b {
        return Ok(0.0);
    }
    let resolve = |mode: EndpointBehavior, x: f64| match mode {
        EndpointBehavior::Auto => !f(x).is_finite(),
        EndpointBehavior::Regular => false,
        EndpointBehavior::InverseSqrt => true,
    };
    let sing_left = resolve(left, a);
    let sing_right = resolve(right, b);
    let f = &f;
    match (sing_left, sing_right) {
        (false, false) => adaptive(f, a, b, abs_tol, rel_tol),
        (true, false) => {
            let g = move |u: f64| 2.0 * u * f(a + u * u);
            adaptive(&g, 0.0, (b - a).sqrt(), abs_tol, rel_tol)
        }
        (false, true) => {
            let g = move |u: f64| 2.0 * u * f(b - u * u);
            adaptive(&g, 0.0, (b - a).sqrt(), abs_tol, rel_tol)
        }
        (true, true) => {
            let mid = 0.5 * (a + b);
            let gl = move |u: f64| 2.0 * u * f(a + u * u);
            let gr = move |u: f64| 2.0 * u * f(b - u * u);
            let l = adaptive(&gl, 0.0, (mid - a).sqrt(), 0.5 * abs_tol, rel_tol)?;
            let r = adaptive(&gr, 0.0, (b - mid).sqrt(), 0.5 * abs_tol, rel_tol)?;
            Ok(l + r)
        }
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    let n = count as f64;
    for i in 0..(count + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=count {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[count - 1 - i] = x;
        weights[i] = w;
        weights[count - 1 - i] = w;
    }
    (nodes, weights)
}
