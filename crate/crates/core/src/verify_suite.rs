//! Numeric witnesses for the Rolle-type statements about `D_λ = d/dx - λ`
//! and the bounds on odd generalized derivatives.
//!
//! Handles are [`Differentiable`]; the Rolle and mean-value searches use the
//! real part of the handle.

use crate::operator_core::{cexpm1, generalized_derivatives, Differentiable, ExponentSequence};
use crate::{ln_factorial, Error, Result, C64};
use serde::Serialize;
use serde_json::{json, Value};

pub const WITNESS_TOL: f64 = 1e-9;
const SCAN_POINTS: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub theorem_id: String,
    pub inputs: Value,
    pub witness: Value,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl WitnessReport {
    pub fn new(theorem_id: &str, inputs: Value, witness: Value, residual: f64, tolerance: f64) -> Self {
        Self {
            theorem_id: theorem_id.to_string(),
            inputs,
            witness,
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput(format!("interval [{a}, {b}]")));
    }
    Ok(())
}

/// Zero of `g` in `(a, b)`: scan at cell midpoints, then bisect a sign
/// change. Returns `(ξ, |g(ξ)|)`, or `None` with the smallest sampled value.
fn scan_bisect<G: Fn(f64) -> Result<f64>>(g: G, a: f64, b: f64) -> Result<std::result::Result<(f64, f64), f64>> {
    let h = (b - a) / SCAN_POINTS as f64;
    let xs: Vec<f64> = (0..SCAN_POINTS).map(|i| a + h * (i as f64 + 0.5)).collect();
    let mut vals = Vec::with_capacity(SCAN_POINTS);
    for &x in &xs {
        let v = g(x)?;
        if v.abs() <= WITNESS_TOL {
            return Ok(Ok((x, v.abs())));
        }
        vals.push(v);
    }
    for i in 1..SCAN_POINTS {
        if vals[i - 1].signum() != vals[i].signum() {
            let (mut lo, mut hi) = (xs[i - 1], xs[i]);
            let mut glo = vals[i - 1];
            let mut best = (lo, glo.abs());
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let gm = g(mid)?;
                if gm.abs() < best.1 {
                    best = (mid, gm.abs());
                }
                if gm.abs() <= WITNESS_TOL || mid == lo || mid == hi {
                    break;
                }
                if gm.signum() == glo.signum() {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            return Ok(Ok(best));
        }
    }
    Ok(Err(vals.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min)))
}

fn d_lambda<F: Differentiable + ?Sized>(f: &F, lambda: f64, x: f64) -> Result<f64> {
    let j = f.derivatives(x, 1)?;
    Ok((j[1] - lambda * j[0]).re)
}

/// `ξ ∈ (a, b)` with `f'(ξ) = λ f(ξ)`, given `e^(-λa) f(a) = e^(-λb) f(b)`.
pub fn rolle_point<F: Differentiable + ?Sized>(f: &F, lambda: f64, a: f64, b: f64) -> Result<WitnessReport> {
    check_interval(a, b)?;
    let fa = f.value(a)?.re;
    let fb = f.value(b)?.re;
    let gap = ((-lambda * a).exp() * fa - (-lambda * b).exp() * fb).abs();
    if gap > 1e-10 {
        return Err(Error::Precondition(format!(
            "weighted boundary values differ by {gap:e}"
        )));
    }
    let inputs = json!({"lambda": lambda, "a": a, "b": b});
    Ok(match scan_bisect(|x| d_lambda(f, lambda, x), a, b)? {
        Ok((xi, r)) => WitnessReport::new("rolle", inputs, json!({"xi": xi}), r, WITNESS_TOL),
        Err(r) => WitnessReport::new("rolle", inputs, json!({"xi": null}), r, WITNESS_TOL),
    })
}

/// `λ (f(b) - e^(λ(b-a)) f(a)) / (e^(λ(b-a)) - 1)`, the value `D_λ f` must take
/// somewhere in `(a, b)`.
pub fn mean_value_target(fa: f64, fb: f64, lambda: f64, a: f64, b: f64) -> f64 {
    let w = lambda * (b - a);
    let em1 = cexpm1(C64::new(w, 0.0)).re;
    lambda * (fb - fa - em1 * fa) / em1
}

/// `ξ ∈ (a, b)` with `D_λ f(ξ)` equal to [`mean_value_target`].
pub fn mean_value_point<F: Differentiable + ?Sized>(f: &F, lambda: f64, a: f64, b: f64) -> Result<WitnessReport> {
    check_interval(a, b)?;
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidInput(format!("lambda = {lambda}; must be nonzero")));
    }
    let t = mean_value_target(f.value(a)?.re, f.value(b)?.re, lambda, a, b);
    let inputs = json!({"lambda": lambda, "a": a, "b": b});
    Ok(match scan_bisect(|x| Ok(d_lambda(f, lambda, x)? - t), a, b)? {
        Ok((xi, r)) => WitnessReport::new("mean_value", inputs, json!({"xi": xi, "target": t}), r, WITNESS_TOL),
        Err(r) => WitnessReport::new("mean_value", inputs, json!({"xi": null, "target": t}), r, WITNESS_TOL),
    })
}

/// `(|λ (e^(λa) + e^(λb)) / (e^(λa) - e^(λb))|, 2 e^(|λ|(b-a)) / (b-a))`.
pub fn exp_ratio_bound(lambda: f64, a: f64, b: f64) -> (f64, f64) {
    let h = b - a;
    // λ (1 + e^(λh)) / (1 - e^(λh)) = -λ / tanh(λh/2)
    let lhs = (lambda / (0.5 * lambda * h).tanh()).abs();
    (lhs, 2.0 * (lambda.abs() * h).exp() / h)
}

/// The ratio bound on an `n × n` grid of `λ ∈ [-3, 3] \ {0}`, `b - a ∈ (0, 3]`.
pub fn exp_ratio_sweep(n: usize) -> WitnessReport {
    let mut worst = f64::NEG_INFINITY;
    let mut at = (0.0, 0.0);
    for i in 0..n {
        // even counts skip 0 by construction; odd counts are nudged off it
        let mut lambda = -3.0 + 6.0 * (i as f64 + 0.5) / n as f64;
        if lambda == 0.0 {
            lambda = 1e-6;
        }
        for j in 1..=n {
            let h = 3.0 * j as f64 / n as f64;
            let (lhs, rhs) = exp_ratio_bound(lambda, 0.0, h);
            let excess = lhs / rhs - 1.0;
            if excess > worst {
                worst = excess;
                at = (lambda, h);
            }
        }
    }
    WitnessReport::new(
        "exp_ratio",
        json!({"grid": n}),
        json!({"worst_lambda": at.0, "worst_length": at.1, "max_ratio": worst + 1.0}),
        worst,
        1e-12,
    )
}

fn sample_max<G: Fn(f64) -> Result<f64>>(g: G, a: f64, b: f64, points: usize) -> Result<f64> {
    let mut m = 0.0f64;
    for i in 0..points {
        let x = a + (b - a) * i as f64 / (points - 1) as f64;
        m = m.max(g(x)?);
    }
    Ok(m)
}

/// Both sides of
/// `|D_λ0 f(a)| <= 4 e^((|λ0|+|λ1|)(b-a))/(b-a) max(|f(a)|, |f(b)|)
///   + 2 max |D_λ1 D_λ0 f| (b-a) e^(|λ1|(b-a))`,
/// with the max over `[a, b]` sampled at 1025 points. The ratio bound is
/// checked for each nonzero exponent as well.
pub fn check_odd_derivative_bound<F: Differentiable + ?Sized>(
    f: &F,
    lambda0: f64,
    lambda1: f64,
    a: f64,
    b: f64,
) -> Result<WitnessReport> {
    check_interval(a, b)?;
    let h = b - a;
    let ja = f.derivatives(a, 1)?;
    let lhs = (ja[1] - lambda0 * ja[0]).norm();
    let fb = f.value(b)?;
    let second = sample_max(
        |t| {
            let j = f.derivatives(t, 2)?;
            Ok((j[2] - (lambda0 + lambda1) * j[1] + lambda0 * lambda1 * j[0]).norm())
        },
        a,
        b,
        1025,
    )?;
    let rhs = 4.0 * ((lambda0.abs() + lambda1.abs()) * h).exp() / h * ja[0].norm().max(fb.norm())
        + 2.0 * second * h * (lambda1.abs() * h).exp();
    let mut residual = lhs - rhs;
    let mut ratio_excess = f64::NEG_INFINITY;
    for l in [lambda0, lambda1] {
        if l != 0.0 {
            let (x, y) = exp_ratio_bound(l, a, b);
            ratio_excess = ratio_excess.max(x - y);
        }
    }
    residual = residual.max(ratio_excess);
    Ok(WitnessReport::new(
        "odd_derivative_bound",
        json!({"lambda0": lambda0, "lambda1": lambda1, "a": a, "b": b}),
        json!({"lhs": lhs, "rhs": rhs, "slack": rhs - lhs, "max_second": second}),
        residual,
        1e-12 * rhs.max(1.0),
    ))
}

/// Fitted constants of the even/odd envelope check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeFit {
    /// `max |D^(2n)| <= c (2n)! σ^(2n)` on `[v0, v0 + 2δ]`.
    pub sigma: f64,
    pub c: f64,
    /// `|D^(2n+1)| <= c2 (2n+1)! (σ + ε)^(2n+1)` on `[v0, v0 + δ]`.
    pub c2: f64,
    pub epsilon: f64,
    /// Largest ratio of the odd-order derivative to its pointwise bound.
    pub max_ratio: f64,
}

/// Checks
/// `|D^(2m+1) f(x)| <= 2 max(2/δ, δ) e^((|λ2m|+|λ2m+1|)δ) (M_2m + M_(2m+2))`
/// for `m <= n_max` on 64 points of `[v0, v0 + δ]`, where `M_j` is the max of
/// `|D^(j) f|` over 129 points of `[v0, v0 + 2δ]`, then fits the growth
/// constants of the even and odd orders.
pub fn check_even_to_odd<F: Differentiable + ?Sized>(
    f: &F,
    exponents: &ExponentSequence,
    v0: f64,
    delta: f64,
    n_max: usize,
) -> Result<(WitnessReport, EnvelopeFit)> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidInput(format!("delta = {delta}")));
    }
    let top = 2 * n_max + 2;
    let mut big = vec![0.0f64; top + 1];
    for i in 0..129 {
        let x = v0 + 2.0 * delta * i as f64 / 128.0;
        for (m, d) in generalized_derivatives(f, exponents, top, x)?.iter().enumerate() {
            big[m] = big[m].max(d.norm());
        }
    }
    let mut odd_max = vec![0.0f64; n_max + 1];
    let mut worst = f64::NEG_INFINITY;
    let mut max_ratio = 0.0f64;
    let mut rhs_scale = 0.0f64;
    let lead = 2.0 * (2.0 / delta).max(delta);
    for i in 0..64 {
        let x = v0 + delta * i as f64 / 63.0;
        let ds = generalized_derivatives(f, exponents, 2 * n_max + 1, x)?;
        for m in 0..=n_max {
            let l = exponents.get(2 * m)?.norm() + exponents.get(2 * m + 1)?.norm();
            let rhs = lead * (l * delta).exp() * (big[2 * m] + big[2 * m + 2]);
            let lhs = ds[2 * m + 1].norm();
            odd_max[m] = odd_max[m].max(lhs);
            worst = worst.max(lhs - rhs);
            rhs_scale = rhs_scale.max(rhs);
            if rhs > 0.0 {
                max_ratio = max_ratio.max(lhs / rhs);
            } else if lhs > 0.0 {
                max_ratio = f64::INFINITY;
            }
        }
    }
    // even-order rate: max of (M_2p/(2p)!)^(1/2p) over the top third of p
    let rates: Vec<f64> = (1..=n_max.max(1))
        .map(|p| {
            let m = big[2 * p];
            if m > 0.0 {
                ((m.ln() - ln_factorial(2 * p)) / (2 * p) as f64).exp()
            } else {
                0.0
            }
        })
        .collect();
    let start = rates.len() - rates.len().div_ceil(3);
    let sigma = rates[start..].iter().copied().fold(0.0, f64::max);
    let c = (0..=n_max + 1)
        .map(|p| {
            let m = big[2 * p];
            if m == 0.0 {
                0.0
            } else if sigma == 0.0 {
                if p == 0 {
                    m
                } else {
                    f64::INFINITY
                }
            } else {
                (m.ln() - ln_factorial(2 * p) - 2.0 * p as f64 * sigma.ln()).exp()
            }
        })
        .fold(0.0, f64::max);
    let epsilon = if sigma > 0.0 { 0.05 * sigma } else { 1e-3 };
    let c2 = odd_max
        .iter()
        .enumerate()
        .map(|(m, &v)| {
            let n = 2 * m + 1;
            if v == 0.0 {
                0.0
            } else {
                (v.ln() - ln_factorial(n) - n as f64 * (sigma + epsilon).ln()).exp()
            }
        })
        .fold(0.0, f64::max);
    let fit = EnvelopeFit {
        sigma,
        c,
        c2,
        epsilon,
        max_ratio,
    };
    let report = WitnessReport::new(
        "even_to_odd",
        json!({"v0": v0, "delta": delta, "n_max": n_max}),
        serde_json::to_value(fit).expect("plain floats"),
        worst,
        1e-9 * rhs_scale.max(1.0),
    );
    Ok((report, fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_core::{ExpPolynomial, ExpTerm};
    use proptest::prelude::{prop_assert, proptest, ProptestConfig};
    use std::f64::consts::PI;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    /// `scale * sin(ωx) e^(μx)` as a sum of two complex exponentials.
    fn sine(omega: f64, mu: f64, scale: f64) -> ExpPolynomial {
        let half = C64::new(0.0, -0.5 * scale);
        ExpPolynomial::new(vec![
            ExpTerm { coeff: half, power: 0, rate: C64::new(mu, omega) },
            ExpTerm { coeff: -half, power: 0, rate: C64::new(mu, -omega) },
        ])
    }

    #[test]
    fn rolle_examples() {
        let r = rolle_point(&ExpPolynomial::exponential(c(1.0), c(0.8)), 0.8, 0.0, 1.0).unwrap();
        assert!(r.passed && r.residual < 1e-12);

        let r = rolle_point(&sine(PI, 0.0, 1.0), 0.0, 0.0, 1.0).unwrap();
        assert!(r.passed);
        assert!((r.witness["xi"].as_f64().unwrap() - 0.5).abs() < 1e-9);

        // D_0.7 (sin(πx) e^(0.7x)) = π cos(πx) e^(0.7x), zero at 1/2
        let r = rolle_point(&sine(PI, 0.7, 1.0), 0.7, 0.0, 1.0).unwrap();
        assert!(r.passed && r.residual <= 1e-9);
        assert!((r.witness["xi"].as_f64().unwrap() - 0.5).abs() < 1e-8);

        assert!(matches!(
            rolle_point(&ExpPolynomial::constant(1.0), 1.0, 0.0, 1.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn mean_value_examples() {
        let r = mean_value_point(&ExpPolynomial::constant(2.5), 1.3, 0.0, 1.0).unwrap();
        assert!(r.passed && r.residual < 1e-12);
        assert!((r.witness["target"].as_f64().unwrap() + 1.3 * 2.5).abs() < 1e-12);

        // f(x) = x, λ = 1 on [0, 2]: 1 - ξ = 2/(e^2 - 1)
        let x = ExpPolynomial::new(vec![ExpTerm { coeff: c(1.0), power: 1, rate: c(0.0) }]);
        let r = mean_value_point(&x, 1.0, 0.0, 2.0).unwrap();
        let want = 1.0 - 2.0 / (2f64.exp() - 1.0);
        assert!(r.passed);
        assert!((r.witness["xi"].as_f64().unwrap() - want).abs() < 1e-8);

        // λ -> 0: classical mean value point of x^3 on [0, 1] is 1/sqrt(3)
        let cube = ExpPolynomial::new(vec![ExpTerm { coeff: c(1.0), power: 3, rate: c(0.0) }]);
        let r = mean_value_point(&cube, 1e-6, 0.0, 1.0).unwrap();
        assert!(r.passed);
        assert!((r.witness["xi"].as_f64().unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-3);

        assert!(matches!(mean_value_point(&cube, 0.0, 0.0, 1.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn odd_bound_examples() {
        let r = check_odd_derivative_bound(&ExpPolynomial::exponential(c(1.0), c(0.4)), 0.4, -1.0, 0.0, 1.0).unwrap();
        assert!(r.passed);
        assert!(r.witness["lhs"].as_f64().unwrap() < 1e-14);

        let r = check_odd_derivative_bound(&sine(1.0, 0.0, 1.0), 0.3, -0.5, 0.0, 1.0).unwrap();
        assert!(r.passed);
        assert!(r.witness["slack"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn ratio_bound_grid() {
        let r = exp_ratio_sweep(50);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn even_to_odd_examples() {
        let seq = ExponentSequence::harmonic(2, 3).unwrap();
        let e = ExpPolynomial::exponential(c(1.0), c(2.0));
        let (r, fit) = check_even_to_odd(&e, &seq, 0.0, 0.25, 6).unwrap();
        assert!(r.passed && fit.max_ratio == 0.0);

        // α e^(kv) + β e^((2-k-d)v) for k = 2, d = 3
        let h = ExpPolynomial::new(vec![
            ExpTerm { coeff: c(1.5), power: 0, rate: c(2.0) },
            ExpTerm { coeff: c(-0.4), power: 0, rate: c(-3.0) },
        ]);
        for delta in [0.1, 0.25] {
            let (r, fit) = check_even_to_odd(&h, &seq, 0.1, delta, 10).unwrap();
            assert!(r.passed, "{r:?}");
            assert!(fit.max_ratio < 1.0);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn random_cubics_satisfy_odd_bound(
            coeffs in proptest::array::uniform4(-2.0f64..2.0),
            l0 in -2.0f64..2.0,
            l1 in -2.0f64..2.0,
            a in -1.0f64..1.0,
            len in 0.1f64..2.0,
        ) {
            let f = ExpPolynomial::new(
                coeffs.iter().enumerate().map(|(p, &k)| ExpTerm { coeff: c(k), power: p as u32, rate: c(0.0) }).collect(),
            );
            let r = check_odd_derivative_bound(&f, l0, l1, a, a + len).unwrap();
            prop_assert!(r.passed, "{:?}", r);
        }

        #[test]
        fn rolle_on_weighted_sines(omega in 1.0f64..8.0, mu in -2.0f64..2.0, scale in 0.2f64..3.0) {
            // e^(-μx) f vanishes at 0 and π/ω
            let f = sine(omega, mu, scale);
            let r = rolle_point(&f, mu, 0.0, PI / omega).unwrap();
            prop_assert!(r.passed, "{:?}", r);
        }

        #[test]
        fn mean_value_on_exponentials(rate in -2.0f64..2.0, lambda in -2.0f64..2.0, len in 0.2f64..2.0) {
            let f = ExpPolynomial::new(vec![
                ExpTerm { coeff: c(1.0), power: 0, rate: c(rate) },
                ExpTerm { coeff: c(0.5), power: 2, rate: c(0.0) },
            ]);
            if lambda.abs() > 1e-3 {
                let r = mean_value_point(&f, lambda, 0.0, len).unwrap();
                prop_assert!(r.passed, "{:?}", r);
            }
        }
    }
}
