//! Fundamental functions of the operator `L = (d/dx - λ0)...(d/dx - λn)`,
//! generalized derivatives `D^(n)` and Taylor series in the basis `Φ_Λn`.
//!
//! `Φ_Λn` is the solution of `L Φ = 0` with `Φ^(k)(0) = 0` for `k < n` and
//! `Φ^(n)(0) = 1`. Three evaluators are provided: power series, a trapezoid
//! rule on a circle enclosing all exponents, and closed forms via partial
//! fractions.

use crate::quadrature::adaptive_integrate;
use crate::{factorial, ln_factorial, Error, Result, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// How an exponent sequence is generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ExponentRule {
    /// Finite list of values.
    Explicit { values: Vec<C64> },
    /// `λn = c` for every n.
    Constant { value: C64 },
    /// `λn = values[n mod len]`.
    Periodic { values: Vec<C64> },
    /// `λn = offset + step * n`.
    Affine { offset: C64, step: C64 },
    /// `λ(2j) = k + 2j`, `λ(2j+1) = -k - d + 2 + 2j`: the exponents produced by
    /// the radial Laplacian in the variable `v = ln r`.
    Harmonic { k: u32, d: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    Explicit,
    Bounded,
    LinearGrowth,
}

/// An exponent sequence together with its growth constants:
/// `|λn| <= bound` (bounded) or `|λn| <= alpha + beta * n` (linear growth).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentSequence {
    rule: ExponentRule,
    kind: SequenceKind,
    beta: f64,
    alpha: f64,
    bound: Option<f64>,
}

impl ExponentSequence {
    pub fn from_rule(rule: ExponentRule) -> Result<Self> {
        let max_abs = |v: &[C64]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let (kind, beta, alpha, bound) = match &rule {
            ExponentRule::Explicit { values } => {
                if values.is_empty() {
                    return Err(Error::InvalidInput("empty exponent list".into()));
                }
                let m = max_abs(values);
                (SequenceKind::Explicit, 0.0, m, Some(m))
            }
            ExponentRule::Constant { value } => {
                (SequenceKind::Bounded, 0.0, value.norm(), Some(value.norm()))
            }
            ExponentRule::Periodic { values } => {
                if values.is_empty() {
                    return Err(Error::InvalidInput("empty period".into()));
                }
                let m = max_abs(values);
                (SequenceKind::Bounded, 0.0, m, Some(m))
            }
            ExponentRule::Affine { offset, step } => {
                if step.norm() == 0.0 {
                    (SequenceKind::Bounded, 0.0, offset.norm(), Some(offset.norm()))
                } else {
                    (SequenceKind::LinearGrowth, step.norm(), offset.norm(), None)
                }
            }
            ExponentRule::Harmonic { k, d } => {
                if *d < 2 {
                    return Err(Error::InvalidInput(format!("dimension {d} < 2")));
                }
                (SequenceKind::LinearGrowth, 1.0, (*k + *d) as f64 - 1.0, None)
            }
        };
        Ok(Self {
            rule,
            kind,
            beta,
            alpha,
            bound,
        })
    }

    pub fn explicit(values: Vec<C64>) -> Result<Self> {
        Self::from_rule(ExponentRule::Explicit { values })
    }

    pub fn explicit_real(values: &[f64]) -> Result<Self> {
        Self::explicit(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn constant(value: C64) -> Self {
        Self::from_rule(ExponentRule::Constant { value }).expect("constant rule is always valid")
    }

    pub fn affine(offset: C64, step: C64) -> Self {
        Self::from_rule(ExponentRule::Affine { offset, step }).expect("affine rule is always valid")
    }

    pub fn harmonic(k: u32, d: u32) -> Result<Self> {
        Self::from_rule(ExponentRule::Harmonic { k, d })
    }

    pub fn rule(&self) -> &ExponentRule {
        &self.rule
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    /// Growth rate `beta`; zero for bounded and explicit sequences.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn bound(&self) -> Option<f64> {
        self.bound
    }

    /// Number of available terms; `None` for infinite rules.
    pub fn len(&self) -> Option<usize> {
        match &self.rule {
            ExponentRule::Explicit { values } => Some(values.len()),
            _ => None,
        }
    }

    pub fn get(&self, n: usize) -> Result<C64> {
        Ok(match &self.rule {
            ExponentRule::Explicit { values } => *values.get(n).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "exponent index {n} beyond explicit list of length {}",
                    values.len()
                ))
            })?,
            ExponentRule::Constant { value } => *value,
            ExponentRule::Periodic { values } => values[n % values.len()],
            ExponentRule::Affine { offset, step } => offset + step * n as f64,
            ExponentRule::Harmonic { k, d } => {
                let (k, d) = (*k as f64, *d as f64);
                let j = (n / 2) as f64;
                if n % 2 == 0 {
                    C64::new(k + 2.0 * j, 0.0)
                } else {
                    C64::new(-k - d + 2.0 + 2.0 * j, 0.0)
                }
            }
        })
    }

    /// `λ0, ..., λn`.
    pub fn prefix(&self, n: usize) -> Result<Vec<C64>> {
        (0..=n).map(|i| self.get(i)).collect()
    }

    /// True when every exponent is an integer, so repeated values can be
    /// detected by exact comparison.
    pub fn is_integer_valued(&self) -> bool {
        let int = |z: &C64| z.im == 0.0 && z.re.fract() == 0.0;
        match &self.rule {
            ExponentRule::Explicit { values } | ExponentRule::Periodic { values } => {
                values.iter().all(int)
            }
            ExponentRule::Constant { value } => int(value),
            ExponentRule::Affine { offset, step } => int(offset) && int(step),
            ExponentRule::Harmonic { .. } => true,
        }
    }

    /// For the harmonic rule with even `d`, the even index that carries the
    /// same value as odd index `n`, if any.
    pub fn collision_partner(&self, n: usize) -> Option<usize> {
        match self.rule {
            ExponentRule::Harmonic { k, d } if d % 2 == 0 && n % 2 == 1 => {
                let j = (n / 2) as i64;
                let l = j - k as i64 - d as i64 / 2 + 1;
                if l >= 0 {
                    Some(2 * l as usize)
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

/// Tolerance used to decide whether two exponents coincide.
pub fn repeat_tolerance(values: &[C64]) -> f64 {
    if values.iter().all(|z| z.im == 0.0 && z.re.fract() == 0.0) {
        0.0
    } else {
        1e-9
    }
}

/// Distinct values with their multiplicities, in order of first appearance.
pub fn multiplicity_table(values: &[C64], tol: f64) -> Vec<(C64, usize)> {
    let mut table: Vec<(C64, usize)> = Vec::new();
    for &v in values {
        match table.iter_mut().find(|(r, _)| (*r - v).norm() <= tol) {
            Some(entry) => entry.1 += 1,
            None => table.push((v, 1)),
        }
    }
    table
}

/// One term group of the partial-fraction expansion of `1/q(z)`:
/// `simple/(z - root) + double/(z - root)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialFraction {
    pub root: C64,
    pub multiplicity: usize,
    pub simple: C64,
    pub double: C64,
}

/// Partial fractions of `1/prod (z - root)^m` for multiplicities 1 and 2.
///
/// For a double root ν with cofactor `P`, the coefficients are `c = 1/P(ν)`
/// and `b = -c * P'(ν)/P(ν)`.
pub fn partial_fractions(table: &[(C64, usize)]) -> Result<Vec<PartialFraction>> {
    table
        .iter()
        .enumerate()
        .map(|(i, &(root, mult))| {
            if mult == 0 || mult > 2 {
                return Err(Error::InvalidInput(format!(
                    "root multiplicity {mult} not supported (1 or 2 only)"
                )));
            }
            let mut p = C64::new(1.0, 0.0);
            let mut log_deriv = C64::new(0.0, 0.0);
            for (j, &(other, m)) in table.iter().enumerate() {
                if j == i {
                    continue;
                }
                let diff = root - other;
                p *= diff.powu(m as u32);
                log_deriv += m as f64 / diff;
            }
            let c = p.inv();
            Ok(if mult == 1 {
                PartialFraction {
                    root,
                    multiplicity: 1,
                    simple: c,
                    double: C64::new(0.0, 0.0),
                }
            } else {
                PartialFraction {
                    root,
                    multiplicity: 2,
                    simple: -c * log_deriv,
                    double: c,
                }
            })
        })
        .collect()
}

/// Coefficients of `prod (s - λj)` in ascending powers of `s`.
pub fn operator_polynomial(lambdas: &[C64]) -> Vec<C64> {
    let mut p = vec![C64::new(1.0, 0.0)];
    for &l in lambdas {
        let mut next = vec![C64::new(0.0, 0.0); p.len() + 1];
        for (i, &c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= l * c;
        }
        p = next;
    }
    p
}

/// `Φ^(k)(0)` for `k = 0..=max_order`: zero below `n`, then the complete
/// homogeneous symmetric polynomials `h_(k-n)(λ0..λn)`.
pub fn fundamental_taylor_coeffs(lambdas: &[C64], max_order: usize) -> Result<Vec<C64>> {
    if lambdas.is_empty() {
        return Err(Error::InvalidInput("empty exponent prefix".into()));
    }
    let n = lambdas.len() - 1;
    if max_order < n {
        return Err(Error::InvalidInput(format!(
            "max order {max_order} below operator order {n}"
        )));
    }
    let m_max = max_order - n;
    let mut h = vec![C64::new(0.0, 0.0); m_max + 1];
    h[0] = C64::new(1.0, 0.0);
    for &l in lambdas {
        for m in 1..=m_max {
            let prev = h[m - 1];
            h[m] += l * prev;
        }
    }
    let mut out = vec![C64::new(0.0, 0.0); n];
    out.extend(h);
    Ok(out)
}

/// Closed form available for a prefix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ClosedForm {
    /// All exponents zero: `x^n / n!`.
    Polynomial,
    /// `λk = alpha + k*omega`: `e^(alpha x) (e^(omega x) - 1)^n / (n! omega^n)`.
    Equidistant { alpha: C64, omega: C64 },
    /// Pairwise distinct exponents: `sum e^(λj x) / q'(λj)`.
    DistinctRoots,
    /// Multiplicities at most two, via partial fractions.
    RepeatedRoots,
    /// Some multiplicity exceeds two.
    Unavailable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Series,
    Contour,
    ClosedForm,
}

pub const SERIES_REL_TOL: f64 = 1e-12;
pub const SERIES_MAX_TERMS: usize = 10_000;
const CONTOUR_START_NODES: usize = 512;
const CONTOUR_MAX_NODES: usize = 1 << 17;
const CONTOUR_TOL: f64 = 1e-13;

/// `Φ_Λn` for a fixed prefix `λ0..λn`.
#[derive(Debug, Clone)]
pub struct FundamentalFunction {
    exponents: Vec<C64>,
    multiplicities: Vec<(C64, usize)>,
    closed_form: ClosedForm,
}

impl FundamentalFunction {
    pub fn new(exponents: Vec<C64>) -> Result<Self> {
        let tol = repeat_tolerance(&exponents);
        Self::with_tolerance(exponents, tol)
    }

    pub fn from_sequence(seq: &ExponentSequence, n: usize) -> Result<Self> {
        let tol = if seq.is_integer_valued() { 0.0 } else { 1e-9 };
        Self::with_tolerance(seq.prefix(n)?, tol)
    }

    pub fn with_tolerance(exponents: Vec<C64>, repeat_tol: f64) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidInput("empty exponent prefix".into()));
        }
        if exponents.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite exponent".into()));
        }
        let multiplicities = multiplicity_table(&exponents, repeat_tol);
        let n = exponents.len() - 1;
        let closed_form = if exponents.iter().all(|z| z.norm() == 0.0) {
            ClosedForm::Polynomial
        } else if let Some((alpha, omega)) = equidistant(&exponents) {
            ClosedForm::Equidistant { alpha, omega }
        } else if multiplicities.len() == n + 1 {
            ClosedForm::DistinctRoots
        } else if multiplicities.iter().all(|&(_, m)| m <= 2) {
            ClosedForm::RepeatedRoots
        } else {
            ClosedForm::Unavailable
        };
        Ok(Self {
            exponents,
            multiplicities,
            closed_form,
        })
    }

    /// Operator order `n` (the prefix has `n + 1` exponents).
    pub fn order(&self) -> usize {
        self.exponents.len() - 1
    }

    pub fn exponents(&self) -> &[C64] {
        &self.exponents
    }

    pub fn multiplicities(&self) -> &[(C64, usize)] {
        &self.multiplicities
    }

    pub fn closed_form(&self) -> ClosedForm {
        self.closed_form
    }

    pub fn max_abs_exponent(&self) -> f64 {
        self.exponents.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn taylor_coeffs(&self, max_order: usize) -> Result<Vec<C64>> {
        fundamental_taylor_coeffs(&self.exponents, max_order)
    }

    /// Default evaluator (power series).
    pub fn eval(&self, z: C64) -> Result<C64> {
        self.eval_series(z, SERIES_REL_TOL, SERIES_MAX_TERMS)
    }

    pub fn eval_with(&self, z: C64, strategy: Strategy) -> Result<C64> {
        match strategy {
            Strategy::Series => self.eval(z),
            Strategy::Contour => self.eval_contour(z, None),
            Strategy::ClosedForm => self.eval_closed(z),
        }
    }

    /// `sum_m h_m z^(m+n)/(m+n)!` with terms built by a scaled form of the
    /// `h_m` recurrence. Stops when the majorant tail
    /// `|z|^n/n! * sum_(i>m) (M|z|)^i/i!` falls below `rel_tol * |sum|`.
    pub fn eval_series(&self, z: C64, rel_tol: f64, max_terms: usize) -> Result<C64> {
        let n = self.order();
        let lam = &self.exponents;
        let mut lead = C64::new(1.0, 0.0);
        for i in 1..=n {
            lead *= z / i as f64;
        }
        // g[j] = h_m(λ0..λj) z^(m+n)/(m+n)!
        let mut g = vec![lead; n + 1];
        let mut sum = lead;
        let u = self.max_abs_exponent() * z.norm();
        let mut base = lead.norm();
        for m in 1..=max_terms {
            // tail bound for terms > m - 1
            let next_base = base * u / m as f64;
            if (m as f64 + 1.0) > u {
                let tail = next_base / (1.0 - u / (m as f64 + 1.0));
                if tail <= rel_tol * sum.norm() || tail < 1e-300 {
                    return Ok(sum);
                }
            }
            base = next_base;
            let scale = z / (m + n) as f64;
            let mut below = C64::new(0.0, 0.0);
            for j in 0..=n {
                g[j] = below + lam[j] * scale * g[j];
                below = g[j];
            }
            sum += g[n];
        }
        let tail = if (max_terms as f64 + 1.0) > u {
            base * u / (max_terms as f64 + 1.0) / (1.0 - u / (max_terms as f64 + 2.0))
        } else {
            f64::INFINITY
        };
        Err(Error::Truncation { achieved: tail })
    }

    /// Contour integral `(1/2πi) ∮ e^(xz)/q(z) dz` on the circle of the given
    /// radius, default `2 max(1, max|λ|)`, with node doubling from 512.
    pub fn eval_contour(&self, x: C64, radius: Option<f64>) -> Result<C64> {
        let m = self.max_abs_exponent();
        let r = radius.unwrap_or(2.0 * m.max(1.0));
        if !(r > m) {
            return Err(Error::Config(format!(
                "contour radius {r} does not enclose all exponents (max |λ| = {m})"
            )));
        }
        let mut nodes = CONTOUR_START_NODES;
        let (mut prev, _) = self.contour_sum_with_mass(x, r, nodes);
        let mut diff = f64::INFINITY;
        while nodes < CONTOUR_MAX_NODES {
            nodes *= 2;
            let (cur, mass) = self.contour_sum_with_mass(x, r, nodes);
            diff = (cur - prev).norm();
            // second test: agreement at the rounding level of the summands
            if diff <= CONTOUR_TOL * cur.norm().max(1.0) || diff <= 64.0 * f64::EPSILON * mass {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(Error::Truncation { achieved: diff })
    }

    /// Trapezoid sum with a fixed node count.
    pub fn contour_sum(&self, x: C64, r: f64, nodes: usize) -> C64 {
        self.contour_sum_with_mass(x, r, nodes).0
    }

    fn contour_sum_with_mass(&self, x: C64, r: f64, nodes: usize) -> (C64, f64) {
        let mut acc = C64::new(0.0, 0.0);
        let mut mass = 0.0;
        for j in 0..nodes {
            let t = 2.0 * PI * j as f64 / nodes as f64;
            let z = C64::from_polar(r, t);
            let mut q = C64::new(1.0, 0.0);
            for &l in &self.exponents {
                q *= z - l;
            }
            let term = (x * z).exp() * z / q;
            mass += term.norm();
            acc += term;
        }
        (acc / nodes as f64, mass / nodes as f64)
    }
    pub fn eval_closed(&self, x: C64) -> Result<C64> {
        let n = self.order();
        match self.closed_form {
            ClosedForm::Polynomial => Ok(x.powu(n as u32) / factorial(n)),
            ClosedForm::Equidistant { alpha, omega } => {
                let w = cexpm1(omega * x) / omega;
                Ok((alpha * x).exp() * w.powu(n as u32) / factorial(n))
            }
            ClosedForm::DistinctRoots | ClosedForm::RepeatedRoots => {
                Ok(self.exp_polynomial()?.value(x))
            }
            ClosedForm::Unavailable => Err(Error::InvalidInput(
                "no closed form for root multiplicity above 2".into(),
            )),
        }
    }

    /// `Φ` as an exponential polynomial, available when every multiplicity
    /// is at most two (or all exponents vanish).
    pub fn exp_polynomial(&self) -> Result<ExpPolynomial> {
        if self.closed_form == ClosedForm::Polynomial {
            let n = self.order();
            return Ok(ExpPolynomial::new(vec![ExpTerm {
                coeff: C64::new(1.0 / factorial(n), 0.0),
                power: n as u32,
                rate: C64::new(0.0, 0.0),
            }]));
        }
        let mut terms = Vec::new();
        for pf in partial_fractions(&self.multiplicities)? {
            terms.push(ExpTerm {
                coeff: pf.simple,
                power: 0,
                rate: pf.root,
            });
            if pf.multiplicity == 2 {
                terms.push(ExpTerm {
                    coeff: pf.double,
                    power: 1,
                    rate: pf.root,
                });
            }
        }
        Ok(ExpPolynomial::new(terms))
    }
}

fn equidistant(l: &[C64]) -> Option<(C64, C64)> {
    if l.len() < 2 {
        return None;
    }
    let omega = l[1] - l[0];
    if omega.norm() == 0.0 {
        return None;
    }
    let scale = l.iter().map(|z| z.norm()).fold(1.0, f64::max);
    l.iter()
        .enumerate()
        .all(|(k, &z)| (z - (l[0] + omega * k as f64)).norm() <= 1e-14 * scale)
        .then_some((l[0], omega))
}

/// `e^w - 1` without cancellation for small `|w|`.
pub fn cexpm1(w: C64) -> C64 {
    if w.norm() < 1e-2 {
        let mut term = w;
        let mut sum = w;
        for k in 2..12 {
            term *= w / k as f64;
            sum += term;
        }
        sum
    } else {
        w.exp() - 1.0
    }
}

/// A function exposing exact ordinary derivatives.
pub trait Differentiable {
    /// `f(x), f'(x), ..., f^(order)(x)`.
    fn derivatives(&self, x: f64, order: usize) -> Result<Vec<C64>>;

    fn value(&self, x: f64) -> Result<C64> {
        Ok(self.derivatives(x, 0)?[0])
    }
}

impl<T: Differentiable + ?Sized> Differentiable for &T {
    fn derivatives(&self, x: f64, order: usize) -> Result<Vec<C64>> {
        (**self).derivatives(x, order)
    }
}

/// `coeff * x^power * e^(rate x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpTerm {
    pub coeff: C64,
    pub power: u32,
    pub rate: C64,
}

/// Finite sum of [`ExpTerm`]s.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ExpPolynomial {
    pub terms: Vec<ExpTerm>,
}

impl ExpPolynomial {
    pub fn new(terms: Vec<ExpTerm>) -> Self {
        Self { terms }
    }

    pub fn constant(c: f64) -> Self {
        Self::exponential(C64::new(c, 0.0), C64::new(0.0, 0.0))
    }

    pub fn exponential(coeff: C64, rate: C64) -> Self {
        Self::new(vec![ExpTerm {
            coeff,
            power: 0,
            rate,
        }])
    }

    pub fn value(&self, x: C64) -> C64 {
        self.terms
            .iter()
            .map(|t| t.coeff * x.powu(t.power) * (t.rate * x).exp())
            .sum()
    }

    pub fn derivatives_at(&self, x: C64, order: usize) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); order + 1];
        for t in &self.terms {
            let e = (t.rate * x).exp() * t.coeff;
            let p = t.power as usize;
            for (i, slot) in out.iter_mut().enumerate() {
                // Leibniz on x^p * e^(rate x)
                let mut acc = C64::new(0.0, 0.0);
                let mut binom = 1.0;
                let mut falling = 1.0;
                for s in 0..=i.min(p) {
                    if s > 0 {
                        binom *= (i - s + 1) as f64 / s as f64;
                        falling *= (p - s + 1) as f64;
                    }
                    acc += x.powu((p - s) as u32) * t.rate.powu((i - s) as u32) * binom * falling;
                }
                *slot += acc * e;
            }
        }
        out
    }
}

impl Differentiable for ExpPolynomial {
    fn derivatives(&self, x: f64, order: usize) -> Result<Vec<C64>> {
        Ok(self.derivatives_at(C64::new(x, 0.0), order))
    }
}

/// Wraps a handle and caps the derivative order it will supply.
pub struct LimitedOrder<F> {
    pub inner: F,
    pub max_order: usize,
}

impl<F: Differentiable> Differentiable for LimitedOrder<F> {
    fn derivatives(&self, x: f64, order: usize) -> Result<Vec<C64>> {
        if order > self.max_order {
            return Err(Error::Capability {
                requested: order,
                available: self.max_order,
            });
        }
        self.inner.derivatives(x, order)
    }
}

/// `D^(0) f(x), ..., D^(n) f(x)`, applying the factors `(d/dx - λj)` one at a
/// time to the jet of ordinary derivatives.
pub fn generalized_derivatives<F: Differentiable + ?Sized>(
    f: &F,
    exponents: &ExponentSequence,
    n: usize,
    x: f64,
) -> Result<Vec<C64>> {
    let mut jet = f.derivatives(x, n)?;
    if jet.len() < n + 1 {
        return Err(Error::Capability {
            requested: n,
            available: jet.len().saturating_sub(1),
        });
    }
    let mut out = Vec::with_capacity(n + 1);
    out.push(jet[0]);
    for j in 0..n {
        let l = exponents.get(j)?;
        for i in 0..jet.len() - 1 {
            jet[i] = jet[i + 1] - l * jet[i];
        }
        jet.pop();
        out.push(jet[0]);
    }
    Ok(out)
}

/// `D^(n) f(x) = prod_(j<n) (d/dx - λj) f (x)`.
pub fn generalized_derivative<F: Differentiable + ?Sized>(
    f: &F,
    exponents: &ExponentSequence,
    n: usize,
    x: f64,
) -> Result<C64> {
    Ok(generalized_derivatives(f, exponents, n, x)?[n])
}

/// Expansion `sum a_n Φ_Λn(x - x0)` with `a_n = D^(n) f(x0)`.
#[derive(Debug, Clone)]
pub struct GeneralizedTaylorSeries {
    pub x0: f64,
    pub coeffs: Vec<C64>,
    pub exponents: ExponentSequence,
    /// Root-test estimate of `R*`; `None` with fewer than 12 coefficients.
    pub r_star: Option<f64>,
    /// `ln(1 + beta R*)/beta`, or `R*` when `beta = 0`.
    pub radius: Option<f64>,
    /// Growth rate of the even-order coefficients, if estimable.
    pub sigma: Option<f64>,
}

impl GeneralizedTaylorSeries {
    /// `a_n Φ_Λn(x - x0)` for `n = 0..=m`.
    pub fn terms(&self, x: C64, m: usize) -> Result<Vec<C64>> {
        let w = x - self.x0;
        (0..=m.min(self.coeffs.len() - 1))
            .map(|n| {
                let phi = FundamentalFunction::from_sequence(&self.exponents, n)?;
                Ok(self.coeffs[n] * phi.eval(w)?)
            })
            .collect()
    }

    pub fn partial_sum(&self, x: C64, m: usize) -> Result<C64> {
        Ok(self.terms(x, m)?.into_iter().sum())
    }
}

pub const MIN_ROOT_TEST_COEFFS: usize = 12;
const ZERO_RATE: f64 = 1e-9;

/// Estimate of `limsup |a_n/n!|^(1/n)` from the top third of the indices.
///
/// When the windowed values decay at least like `n^(-1/2)` the sequence is
/// extrapolated to zero.
pub fn root_test_rate(coeffs: &[C64]) -> Result<f64> {
    if coeffs.len() < MIN_ROOT_TEST_COEFFS {
        return Err(Error::InvalidInput(format!(
            "root test needs at least {MIN_ROOT_TEST_COEFFS} coefficients, got {}",
            coeffs.len()
        )));
    }
    let samples: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(n, a)| (n, ((a.norm().ln() - ln_factorial(n)) / n as f64).exp()))
        .collect();
    Ok(windowed_rate(&samples, coeffs.len()))
}

/// Max over the top third of `(index, value)` samples, with decay
/// extrapolation. `len` is the number of indices the samples were drawn from.
pub(crate) fn windowed_rate(samples: &[(usize, f64)], len: usize) -> f64 {
    let start = len - len / 3;
    let window: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(n, _)| *n >= start)
        .map(|&(n, s)| (n as f64, s))
        .collect();
    if window.is_empty() {
        return 0.0;
    }
    let rate = window.iter().map(|p| p.1).fold(0.0, f64::max);
    if window.len() >= 3 {
        let pts: Vec<(f64, f64)> = window.iter().map(|&(n, s)| (n.ln(), s.ln())).collect();
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        if sxx > 0.0 && sxy / sxx <= -0.5 {
            return 0.0;
        }
    }
    if rate < ZERO_RATE {
        0.0
    } else {
        rate
    }
}

/// `R*` from the root test, mapped through `ln(1 + beta R*)/beta`.
pub fn convergence_radius(coeffs: &[C64], beta: f64) -> Result<f64> {
    if beta < 0.0 || !beta.is_finite() {
        return Err(Error::InvalidInput(format!("beta = {beta}")));
    }
    let rate = root_test_rate(coeffs)?;
    Ok(radius_from_rate(rate, beta))
}

pub fn radius_from_rate(rate: f64, beta: f64) -> f64 {
    if rate == 0.0 {
        return f64::INFINITY;
    }
    let r_star = 1.0 / rate;
    if beta == 0.0 {
        r_star
    } else {
        (beta * r_star).ln_1p() / beta
    }
}

/// Radius `ln(1 + beta/sigma)/beta` guaranteed from an even-order growth
/// rate `sigma`.
pub fn radius_from_sigma(sigma: f64, beta: f64) -> f64 {
    radius_from_rate(sigma, beta)
}

fn even_order_rate(coeffs: &[C64]) -> Option<f64> {
    if coeffs.len() < MIN_ROOT_TEST_COEFFS {
        return None;
    }
    let samples: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .skip(2)
        .step_by(2)
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(n, a)| (n, ((a.norm().ln() - ln_factorial(n)) / n as f64).exp()))
        .collect();
    Some(windowed_rate(&samples, coeffs.len()))
}

/// Coefficients `a_n = D^(n) f(x0)` for `n = 0..=n_max`.
pub fn taylor_expand<F: Differentiable + ?Sized>(
    f: &F,
    exponents: &ExponentSequence,
    x0: f64,
    n_max: usize,
) -> Result<GeneralizedTaylorSeries> {
    if let Some(len) = exponents.len() {
        if n_max >= len {
            return Err(Error::InvalidInput(format!(
                "{} coefficients requested from {len} exponents",
                n_max + 1
            )));
        }
    }
    let coeffs = generalized_derivatives(f, exponents, n_max, x0)?;
    let r_star = root_test_rate(&coeffs).ok().map(|rate| radius_from_rate(rate, 0.0));
    let radius = r_star.map(|r| {
        if r.is_infinite() || exponents.beta() == 0.0 {
            r
        } else {
            (exponents.beta() * r).ln_1p() / exponents.beta()
        }
    });
    let sigma = even_order_rate(&coeffs);
    Ok(GeneralizedTaylorSeries {
        x0,
        coeffs,
        exponents: exponents.clone(),
        r_star,
        radius,
        sigma,
    })
}

/// `R_m(x) = ∫_(x0)^x D^(m+1) f(t) Φ_Λm(x - t) dt`.
pub fn taylor_remainder<F: Differentiable + ?Sized>(
    f: &F,
    exponents: &ExponentSequence,
    x0: f64,
    m: usize,
    x: f64,
) -> Result<C64> {
    if x < x0 {
        return Err(Error::InvalidInput(format!("x = {x} < x0 = {x0}")));
    }
    if x == x0 {
        return Ok(C64::new(0.0, 0.0));
    }
    f.derivatives(x0, m + 1)?;
    let phi = FundamentalFunction::from_sequence(exponents, m)?;
    let failure = std::cell::Cell::new(None);
    let integral = adaptive_integrate(
        |t| {
            let d = generalized_derivative(f, exponents, m + 1, t);
            let p = phi.eval(C64::new(x - t, 0.0));
            match (d, p) {
                (Ok(d), Ok(p)) => d * p,
                (Err(e), _) | (_, Err(e)) => {
                    failure.set(Some(e.to_string()));
                    C64::new(0.0, 0.0)
                }
            }
        },
        x0,
        x,
        1e-10,
        20,
    );
    if let Some(msg) = failure.take() {
        return Err(Error::Invariant(format!("remainder integrand failed: {msg}")));
    }
    if !integral.converged {
        return Err(Error::Truncation {
            achieved: integral.error_estimate,
        });
    }
    Ok(integral.value)
}

/// Residual `|Φ_(n+1)'(z) - λ(n+1) Φ_(n+1)(z) - Φ_n(z)|` with a central
/// difference of step `h`.
pub fn check_recursion(
    next: &FundamentalFunction,
    prev: &FundamentalFunction,
    z: C64,
    h: f64,
) -> Result<f64> {
    let n = prev.order();
    if next.order() != n + 1 || next.exponents[..=n] != prev.exponents[..] {
        return Err(Error::InvalidInput(
            "prefixes do not extend one another".into(),
        ));
    }
    let deriv = (next.eval(z + h)? - next.eval(z - h)?) / (2.0 * h);
    let lam = next.exponents[n + 1];
    Ok((deriv - lam * next.eval(z)? - prev.eval(z)?).norm())
}

/// Modulus bounds for `Φ_Λn` on `|z| = abs_z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum BoundMode {
    /// `|z|^n e^(M|z|)/n!` with `M = max |λj|`.
    MaxBound,
    /// `e^(alpha|z|) ((e^((1+eps) beta |z|) - 1)/((1+eps) beta))^n / n!`.
    LinearGrowth { alpha: f64, beta: f64, eps: f64 },
}

pub fn bound_fundamental(lambdas: &[C64], abs_z: f64, mode: BoundMode) -> Result<f64> {
    if lambdas.is_empty() {
        return Err(Error::InvalidInput("empty exponent prefix".into()));
    }
    if !(abs_z >= 0.0) {
        return Err(Error::InvalidInput(format!("|z| = {abs_z}")));
    }
    let n = lambdas.len() - 1;
    let ln_bound = match mode {
        BoundMode::MaxBound => {
            let m = lambdas.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let ln_pow = if n == 0 { 0.0 } else { n as f64 * abs_z.ln() };
            ln_pow + m * abs_z - ln_factorial(n)
        }
        BoundMode::LinearGrowth { alpha, beta, eps } => {
            if beta == 0.0 {
                return Err(Error::InvalidInput(
                    "beta = 0 in linear-growth mode; use the max bound".into(),
                ));
            }
            let b = (1.0 + eps) * beta;
            for (j, l) in lambdas.iter().enumerate() {
                if l.norm() > alpha + b * j as f64 + 1e-12 {
                    return Err(Error::InvalidInput(format!(
                        "|λ{j}| = {} exceeds alpha + (1+eps) beta j",
                        l.norm()
                    )));
                }
            }
            let ratio = (b * abs_z).exp_m1() / b;
            let ln_pow = if n == 0 { 0.0 } else { n as f64 * ratio.ln() };
            alpha * abs_z + ln_pow - ln_factorial(n)
        }
    };
    Ok(ln_bound.exp())
}

/// `(n! Φ_Λn(x))^(1/n)` for real `x > 0`; tends to `x` for bounded sequences.
pub fn normalized_root(lambdas: &[C64], x: f64) -> Result<f64> {
    let phi = FundamentalFunction::new(lambdas.to_vec())?;
    let n = phi.order();
    if n == 0 {
        return Err(Error::InvalidInput("order 0 has no root".into()));
    }
    let v = phi.eval(C64::new(x, 0.0))?;
    if !(v.re > 0.0) {
        return Err(Error::Domain(format!("Φ({x}) = {v} is not positive")));
    }
    Ok(((v.re.ln() + ln_factorial(n)) / n as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop, prop_assert, prop_assert_eq, proptest, ProptestConfig};
    use proptest::strategy::Strategy as Gen;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn taylor_coeffs_leading_entries() {
        let l = [c(1.0), c(-2.0), C64::new(0.5, 1.0)];
        let t = fundamental_taylor_coeffs(&l, 6).unwrap();
        assert_eq!(t[0], c(0.0));
        assert_eq!(t[1], c(0.0));
        assert_eq!(t[2], c(1.0));
        assert!((t[3] - (c(1.0) + c(-2.0) + C64::new(0.5, 1.0))).norm() < 1e-15);
        assert!(fundamental_taylor_coeffs(&[], 3).is_err());
    }

    #[test]
    fn taylor_coeffs_match_bruteforce_h() {
        // h_m by enumerating multisets of size m.
        fn brute(l: &[f64], m: usize) -> f64 {
            fn rec(l: &[f64], m: usize, start: usize) -> f64 {
                if m == 0 {
                    return 1.0;
                }
                (start..l.len()).map(|i| l[i] * rec(l, m - 1, i)).sum()
            }
            rec(l, m, 0)
        }
        let l = [0.3, -1.2, 2.0, 0.7];
        let lc: Vec<C64> = l.iter().map(|&x| c(x)).collect();
        let t = fundamental_taylor_coeffs(&lc, 10).unwrap();
        for m in 0..=7 {
            assert!((t[3 + m].re - brute(&l, m)).abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn strategies_agree_on_distinct_example() {
        let phi = FundamentalFunction::new(vec![c(1.0), c(2.0), c(3.0)]).unwrap();
        assert_eq!(phi.closed_form(), ClosedForm::Equidistant { alpha: c(1.0), omega: c(1.0) });
        let e = std::f64::consts::E;
        let exact = e / 2.0 - e * e + e.powi(3) / 2.0;
        for s in [Strategy::Series, Strategy::Contour, Strategy::ClosedForm] {
            let v = phi.eval_with(c(1.0), s).unwrap();
            assert!((v.re - exact).abs() < 1e-12, "{s:?}: {v}");
        }
    }

    #[test]
    fn polynomial_case() {
        let phi = FundamentalFunction::new(vec![c(0.0); 4]).unwrap();
        let v = phi.eval(c(2.0)).unwrap();
        assert!((v.re - 8.0 / 6.0).abs() < 1e-14);
        assert_eq!(phi.eval_closed(c(2.0)).unwrap(), c(8.0 / 6.0));
    }

    #[test]
    fn contour_radius_must_enclose_roots() {
        let phi = FundamentalFunction::new(vec![c(3.0)]).unwrap();
        assert!(matches!(phi.eval_contour(c(1.0), Some(3.0)), Err(Error::Config(_))));
        assert!(matches!(phi.eval_contour(c(1.0), Some(2.0)), Err(Error::Config(_))));
        let v = phi.eval_contour(c(1.0), Some(5.0)).unwrap();
        assert!((v.re - 3f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn repeated_roots_closed_form() {
        // 1/((z-1)^2 (z+1)) => Φ = (e^-x - e^x + 2x e^x)/4
        let phi = FundamentalFunction::new(vec![c(1.0), c(-1.0), c(1.0)]).unwrap();
        assert_eq!(phi.closed_form(), ClosedForm::RepeatedRoots);
        let x = 0.7f64;
        let exact = ((-x).exp() - x.exp() + 2.0 * x * x.exp()) / 4.0;
        assert!((phi.eval_closed(c(x)).unwrap().re - exact).abs() < 1e-14);
        assert!((phi.eval(c(x)).unwrap().re - exact).abs() < 1e-14);
        let triple = FundamentalFunction::new(vec![c(1.0); 3]).unwrap();
        assert_eq!(triple.closed_form(), ClosedForm::Unavailable);
        assert!(triple.eval_closed(c(1.0)).is_err());
    }

    #[test]
    fn partial_fraction_fixture() {
        let pf = partial_fractions(&[(c(0.0), 1), (c(2.0), 2)]).unwrap();
        assert_eq!(pf[0].simple, c(0.25));
        assert_eq!(pf[1].simple, c(-0.25));
        assert_eq!(pf[1].double, c(0.5));
        assert!(partial_fractions(&[(c(0.0), 3)]).is_err());
    }

    #[test]
    fn recursion_examples() {
        let ff = |v: &[f64]| FundamentalFunction::new(v.iter().map(|&x| c(x)).collect()).unwrap();
        let r = check_recursion(&ff(&[0.0, 0.0, 0.0]), &ff(&[0.0, 0.0]), c(1.0), 1e-4).unwrap();
        assert!(r <= 1e-7, "{r}");
        let r = check_recursion(&ff(&[1.0, 2.0]), &ff(&[1.0]), c(0.3), 1e-4).unwrap();
        assert!(r <= 1e-6, "{r}");
        let r = check_recursion(&ff(&[1.0, 1.0, 1.0]), &ff(&[1.0, 1.0]), c(0.0), 1e-4).unwrap();
        assert!(r <= 1e-6, "{r}");
        assert!(check_recursion(&ff(&[1.0, 2.0]), &ff(&[2.0]), c(0.3), 1e-4).is_err());
    }

    #[test]
    fn recursion_residual_is_second_order() {
        let next = FundamentalFunction::new(vec![c(0.5), c(-1.0), C64::new(0.2, 0.3)]).unwrap();
        let prev = FundamentalFunction::new(vec![c(0.5), c(-1.0)]).unwrap();
        let z = C64::new(0.4, -0.2);
        let r2 = check_recursion(&next, &prev, z, 1e-2).unwrap();
        let c_fit = r2 / 1e-4;
        for h in [1e-3, 1e-4] {
            let r = check_recursion(&next, &prev, z, h).unwrap();
            assert!(r <= 1.5 * c_fit * h * h + 1e-11, "h={h}: {r}");
        }
    }

    #[test]
    fn bound_examples() {
        let zeros = vec![c(0.0); 5];
        assert!((bound_fundamental(&zeros, 1.0, BoundMode::MaxBound).unwrap() - 1.0 / 24.0).abs() < 1e-15);
        let l = vec![c(1.0), c(2.0), c(3.0)];
        let b = bound_fundamental(&l, 1.0, BoundMode::MaxBound).unwrap();
        let e3 = 3f64.exp();
        assert!((b - e3 / 2.0).abs() < 1e-12);
        let phi = FundamentalFunction::new(l).unwrap();
        for j in 0..100 {
            let z = C64::from_polar(1.0, 2.0 * PI * j as f64 / 100.0);
            assert!(phi.eval(z).unwrap().norm() <= b);
        }
        let lin = BoundMode::LinearGrowth { alpha: 1.0, beta: 0.0, eps: 0.1 };
        assert!(bound_fundamental(&[c(1.0)], 1.0, lin).is_err());
    }

    #[test]
    fn generalized_derivative_examples() {
        let one = ExpPolynomial::constant(1.0);
        let seq = ExponentSequence::affine(c(1.0), c(1.0));
        assert_eq!(generalized_derivative(&one, &seq, 3, 0.2).unwrap(), c(-6.0));
        let e2 = ExpPolynomial::exponential(c(1.0), c(2.0));
        let seq2 = ExponentSequence::explicit_real(&[2.0, 2.0]).unwrap();
        assert_eq!(generalized_derivative(&e2, &seq2, 2, 0.5).unwrap(), c(0.0));
        let capped = LimitedOrder { inner: one, max_order: 2 };
        assert!(matches!(
            generalized_derivative(&capped, &seq, 3, 0.0),
            Err(Error::Capability { requested: 3, available: 2 })
        ));
    }

    #[test]
    fn sequential_matches_expanded_operator() {
        let f = ExpPolynomial::new(vec![
            ExpTerm { coeff: c(1.5), power: 2, rate: c(0.3) },
            ExpTerm { coeff: C64::new(0.0, 1.0), power: 0, rate: C64::new(-0.5, 1.0) },
        ]);
        let l: Vec<C64> = vec![c(0.5), c(-1.0), C64::new(0.0, 2.0), c(1.0), c(3.0)];
        let seq = ExponentSequence::explicit(l.clone()).unwrap();
        let x = 0.37;
        for n in 0..=4 {
            let p = operator_polynomial(&l[..n]);
            let d = f.derivatives(x, n).unwrap();
            let expanded: C64 = p.iter().zip(&d).map(|(a, b)| a * b).sum();
            let seq_val = generalized_derivative(&f, &seq, n, x).unwrap();
            assert!((expanded - seq_val).norm() < 1e-12 * expanded.norm().max(1.0));
        }
    }

    #[test]
    fn expansion_of_constant_with_shifted_exponents() {
        let one = ExpPolynomial::constant(1.0);
        let seq = ExponentSequence::affine(c(1.0), c(1.0));
        let s = taylor_expand(&one, &seq, 0.0, 40).unwrap();
        let mut fact = 1.0;
        for n in 0..=12 {
            if n > 0 {
                fact *= n as f64;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(s.coeffs[n], c(sign * fact));
        }
        let r = s.radius.unwrap();
        assert!((r - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn expansion_of_fundamental_function_is_kronecker() {
        let seq = ExponentSequence::affine(c(1.0), c(1.0));
        let m = 3;
        let phi = FundamentalFunction::from_sequence(&seq, m).unwrap();
        let s = taylor_expand(&phi.exp_polynomial().unwrap(), &seq, 0.0, 8).unwrap();
        for (n, a) in s.coeffs.iter().enumerate() {
            let want = if n == m { 1.0 } else { 0.0 };
            assert!((a - c(want)).norm() < 1e-9, "n={n}: {a}");
        }
    }

    #[test]
    fn exponential_with_zero_exponents_is_entire() {
        let e = ExpPolynomial::exponential(c(1.0), c(1.0));
        let s = taylor_expand(&e, &ExponentSequence::constant(c(0.0)), 0.0, 40).unwrap();
        assert!(s.radius.unwrap().is_infinite());
    }

    #[test]
    fn radius_examples() {
        let mut fact = 1.0;
        let alt: Vec<C64> = (0..=40)
            .map(|n| {
                if n > 0 {
                    fact *= n as f64;
                }
                c(if n % 2 == 0 { fact } else { -fact })
            })
            .collect();
        let r = convergence_radius(&alt, 1.0).unwrap();
        assert!((r / 2f64.ln() - 1.0).abs() < 0.02);
        assert!(convergence_radius(&vec![c(1.0); 41], 0.0).unwrap().is_infinite());
        let mut v = 1.0;
        let grow: Vec<C64> = (0..=40)
            .map(|n| {
                if n > 0 {
                    v *= 2.0 * n as f64;
                }
                c(v)
            })
            .collect();
        assert!((convergence_radius(&grow, 0.0).unwrap() - 0.5).abs() < 1e-12);
        assert!(convergence_radius(&vec![c(0.0); 20], 0.0).unwrap().is_infinite());
        assert!(convergence_radius(&[c(1.0); 5], 0.0).is_err());
    }

    #[test]
    fn remainder_examples() {
        let one = ExpPolynomial::constant(1.0);
        let seq = ExponentSequence::affine(c(1.0), c(1.0));
        let r0 = taylor_remainder(&one, &seq, 0.0, 0, 0.5).unwrap();
        assert!((r0.re - (1.0 - 0.5f64.exp())).abs() < 1e-10);
        assert!(taylor_remainder(&one, &seq, 0.0, 0, -0.5).is_err());
        let e = ExpPolynomial::exponential(c(1.0), c(0.0) + 1.0);
        let zero = ExponentSequence::constant(c(0.0));
        let r2 = taylor_remainder(&e, &zero, 0.0, 2, 1.0).unwrap();
        assert!((r2.re - (std::f64::consts::E - 2.5)).abs() < 1e-10);
    }

    #[test]
    fn collision_partners() {
        let s = ExponentSequence::harmonic(0, 2).unwrap();
        let v: Vec<f64> = s.prefix(5).unwrap().iter().map(|z| z.re).collect();
        assert_eq!(v, vec![0.0, 0.0, 2.0, 2.0, 4.0, 4.0]);
        assert_eq!(s.collision_partner(1), Some(0));
        assert_eq!(s.collision_partner(5), Some(4));
        let s = ExponentSequence::harmonic(1, 4).unwrap();
        assert_eq!(s.get(1).unwrap(), c(-3.0));
        assert_eq!(s.collision_partner(3), None);
        assert_eq!(s.collision_partner(5), Some(0));
        let s3 = ExponentSequence::harmonic(0, 3).unwrap();
        let v: Vec<f64> = s3.prefix(5).unwrap().iter().map(|z| z.re).collect();
        assert_eq!(v, vec![0.0, -1.0, 2.0, 1.0, 4.0, 3.0]);
        assert_eq!(s3.collision_partner(3), None);
    }

    fn lambda_strategy(max_n: usize) -> impl Gen<Value = Vec<C64>> {
        prop::collection::vec((-4.0f64..4.0, -4.0f64..4.0), 1..=max_n + 1)
            .prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b) * 0.7).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn cauchy_data_and_first_moment(l in lambda_strategy(12)) {
            let n = l.len() - 1;
            let t = fundamental_taylor_coeffs(&l, n + 1).unwrap();
            for k in 0..n {
                prop_assert_eq!(t[k], c(0.0));
            }
            prop_assert_eq!(t[n], c(1.0));
            let s: C64 = l.iter().sum();
            prop_assert!((t[n + 1] - s).norm() <= 1e-12 * (1.0 + s.norm()));
        }

        #[test]
        fn series_matches_contour(l in lambda_strategy(6), r in 0.0f64..2.0, th in 0.0f64..6.3) {
            let phi = FundamentalFunction::new(l).unwrap();
            let z = C64::from_polar(r, th);
            let a = phi.eval(z).unwrap();
            let b = phi.eval_contour(z, None).unwrap();
            prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0));
        }

        #[test]
        fn bound_dominates(l in lambda_strategy(8), r in 0.0f64..2.0, th in 0.0f64..6.3) {
            let phi = FundamentalFunction::new(l.clone()).unwrap();
            let v = phi.eval(C64::from_polar(r, th)).unwrap().norm();
            let b = bound_fundamental(&l, r, BoundMode::MaxBound).unwrap();
            prop_assert!(v <= b * (1.0 + 1e-12) + 1e-300);
        }

        #[test]
        fn positivity_and_monotonicity(
            pairs in prop::collection::vec((0.0f64..3.0, 0.0f64..3.0), 1..8),
            x in 0.01f64..2.0,
            th in 0.0f64..6.3,
        ) {
            let lam: Vec<C64> = pairs.iter().map(|p| c(p.0.min(p.1))).collect();
            let mu: Vec<C64> = pairs.iter().map(|p| c(p.0.max(p.1))).collect();
            let pl = FundamentalFunction::new(lam).unwrap();
            let pm = FundamentalFunction::new(mu).unwrap();
            prop_assert!(pl.eval(c(x)).unwrap().re > 0.0);
            let lhs = pl.eval(C64::from_polar(x, th)).unwrap().norm();
            let rhs = pm.eval(c(x)).unwrap().re;
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }
    }
}
