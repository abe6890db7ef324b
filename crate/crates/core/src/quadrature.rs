//! Gauss-Legendre rules and an adaptive integrator built on them.

use crate::C64;
use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// nodes in increasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Outcome of [`adaptive_integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: C64,
    pub error_estimate: f64,
    pub converged: bool,
}

/// Adaptive bisection with a 10-point Gauss-Legendre rule; a panel is
/// accepted once its halves agree with the whole to within its share of
/// `abs_tol`, or at `max_depth`.
pub fn adaptive_integrate<F>(f: F, a: f64, b: f64, abs_tol: f64, max_depth: u32) -> Integral
where
    F: Fn(f64) -> C64,
{
    let (x, w) = gauss_legendre(10);
    let rule = |lo: f64, hi: f64| -> C64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        x.iter()
            .zip(&w)
            .map(|(xi, wi)| f(mid + half * xi) * *wi)
            .sum::<C64>()
            * half
    };
    let mut total = C64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut converged = true;
    let width = (b - a).abs().max(f64::MIN_POSITIVE);
    let mut stack = vec![(a, b, rule(a, b), 0u32)];
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule(lo, mid);
        let right = rule(mid, hi);
        let diff = (left + right - whole).norm();
        let share = abs_tol * (hi - lo).abs() / width;
        if diff <= share || depth >= max_depth {
            if diff > share {
                converged = false;
            }
            total += left + right;
            err += diff;
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    Integral {
        value: total,
        error_estimate: err,
        converged,
    }
}
