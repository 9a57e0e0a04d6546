//! Adaptive Gauss-Kronrod quadrature on finite intervals.
//!
//! 7/15-point rule with greedy bisection of the worst interval. Used by the
//! normalization-constant integrals and the singular-integral oracle; all
//! tolerances there are absolute.

use alloc::collections::BinaryHeap;

use core::cmp::Ordering;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::CoreError;
use crate::Result;

/// Kronrod abscissae on [0, 1] (positive half; node 7 is the center).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// 7-point Gauss weights matching the odd Kronrod abscissae.
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// Gauss-Kronrod 15-point estimate of ∫_a^b f and an error estimate.
pub fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs())
}

struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

/// Integrate f over [a, b] to absolute tolerance `abs_tol`.
pub fn adaptive(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_depth: usize,
) -> Result<QuadResult> {
    let (value, error) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Interval { a, b, value, error });
    let mut total_error = error;
    let mut subdivisions = 0usize;
    let limit = (1usize << max_depth.min(12)).min(4000);
    while total_error > abs_tol && subdivisions < limit {
        let worst = heap.pop().expect("heap non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at floating-point resolution; keep its estimate.
            total_error -= worst.error;
            let mut dead = worst;
            dead.error = 0.0;
            heap.push(dead);
            continue;
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total_error += e1 + e2 - worst.error;
        heap.push(Interval { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Interval { a: mid, b: worst.b, value: v2, error: e2 });
        subdivisions += 1;
    }
    let value: f64 = heap.iter().map(|iv| iv.value).sum();
    if total_error > abs_tol {
        return Err(CoreError::QuadratureNonConvergence {
            estimate: value,
            error: total_error,
            tolerance: abs_tol,
        });
    }
    Ok(QuadResult { value, error: total_error, subdivisions })
}

/// Adaptive integration of a complex-valued integrand (componentwise).
pub fn adaptive_complex(
    f: impl Fn(f64) -> crate::Complex64,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_depth: usize,
) -> Result<(crate::Complex64, f64)> {
    let re = adaptive(|x| f(x).re, a, b, abs_tol, max_depth)?;
    let im = adaptive(|x| f(x).im, a, b, abs_tol, max_depth)?;
    Ok((crate::Complex64::new(re.value, im.value), re.error + im.error))
}

/// Simple least-squares slope of y against x.
pub fn regression_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
