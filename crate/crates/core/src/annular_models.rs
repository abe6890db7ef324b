//! Reference functions on annuli `A(r0, r1)` with closed-form iterated
//! Laplacians, radial derivatives and complex continuations.
//!
//! Families:
//! - `harmonic`: `sum (alpha r^k + beta r^(2-k-d)) Y_(k,l)(θ)`, plus
//!   `log_coeff * ln r * Y_(0,1)` in the plane;
//! - `power`: `|x|^(2 alpha) Y_(k,l)(x)`;
//! - `exponential`: `e^(a·x)`;
//! - `eigen`: `S(λ|x|^2) Y_(k,l)(x)` with `Δf = λf`.

use crate::operator_core::{Differentiable, ExpPolynomial, ExpTerm};
use crate::spherical::{on_branch_cut, HarmonicBasis, HarmonicPolynomial};
use crate::{ln_factorial, Error, Result, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// One `(k, l)` component of the harmonic family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub k: usize,
    pub l: usize,
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Harmonic {
        terms: Vec<HarmonicTerm>,
        #[serde(default)]
        log_coeff: f64,
    },
    Power {
        alpha: f64,
        k: usize,
        l: usize,
    },
    Exponential {
        a: Vec<f64>,
    },
    Eigen {
        lambda: C64,
        k: usize,
        l: usize,
    },
}

/// On-disk form: `{"family": ..., "d": ..., "r0": ..., "r1": ..., "parameters": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDefinition {
    pub family: String,
    pub d: usize,
    pub r0: f64,
    pub r1: f64,
    pub parameters: serde_json::Value,
}

/// `prod_(i<p) (2α - 2i)(2α + d - 2 + 2k - 2i)`, the factor in
/// `Δ^p (|x|^(2α) Y_k) = c |x|^(2α - 2p) Y_k`.
pub fn power_laplacian_coeff(alpha: f64, p: usize, k: usize, d: usize) -> f64 {
    (0..p)
        .map(|i| {
            let i = i as f64;
            (2.0 * alpha - 2.0 * i) * (2.0 * alpha + d as f64 - 2.0 + 2.0 * k as f64 - 2.0 * i)
        })
        .product()
}

/// Smallest `p` with `Δ^p H_(α,k) = 0`, if the power function is
/// polyharmonic of finite order.
pub fn power_vanishing_order(alpha: f64, k: usize, d: usize) -> Option<usize> {
    let shifted = alpha - (1.0 - d as f64 / 2.0 - k as f64);
    let mut best: Option<usize> = None;
    for cand in [alpha, shifted] {
        if cand >= 0.0 && cand.fract() == 0.0 {
            let p = cand as usize + 1;
            best = Some(best.map_or(p, |b| b.min(p)));
        }
    }
    best
}

/// `f_(k,l)(r) = sum c r^mu + log_coeff ln r` when the coefficient has a
/// closed form.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RadialProfile {
    pub powers: Vec<(C64, C64)>,
    pub log_coeff: C64,
}

impl RadialProfile {
    pub fn value(&self, r: f64) -> C64 {
        let mut v = self.log_coeff * r.ln();
        for (c, mu) in &self.powers {
            v += c * C64::new(r, 0.0).powc(*mu);
        }
        v
    }

    /// `g(v) = f_(k,l)(e^v)` as an exponential polynomial in `v`.
    pub fn log_section(&self) -> ExpPolynomial {
        let mut terms: Vec<ExpTerm> = self
            .powers
            .iter()
            .map(|&(coeff, rate)| ExpTerm { coeff, power: 0, rate })
            .collect();
        if self.log_coeff.norm() > 0.0 {
            terms.push(ExpTerm {
                coeff: self.log_coeff,
                power: 1,
                rate: C64::new(0.0, 0.0),
            });
        }
        ExpPolynomial::new(terms)
    }
}

/// `r -> f(r θ)` along a fixed direction, with exact derivatives.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RadialSection {
    /// `(c, mu)` for `c r^mu`.
    pub powers: Vec<(C64, C64)>,
    pub log_coeff: C64,
    /// `(c, s)` for `c e^(s r)`.
    pub exponentials: Vec<(C64, C64)>,
}

impl Differentiable for RadialSection {
    fn derivatives(&self, r: f64, order: usize) -> Result<Vec<C64>> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("radial section at r = {r}")));
        }
        let mut out = vec![C64::new(0.0, 0.0); order + 1];
        let rc = C64::new(r, 0.0);
        for (c, mu) in &self.powers {
            let mut falling = C64::new(1.0, 0.0);
            for (i, slot) in out.iter_mut().enumerate() {
                *slot += c * falling * rc.powc(mu - i as f64);
                falling *= mu - i as f64;
            }
        }
        if self.log_coeff.norm() > 0.0 {
            out[0] += self.log_coeff * r.ln();
            let mut fact = 1.0;
            for (i, slot) in out.iter_mut().enumerate().skip(1) {
                if i > 1 {
                    fact *= (i - 1) as f64;
                }
                let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                *slot += self.log_coeff * sign * fact / r.powi(i as i32);
            }
        }
        for (c, s) in &self.exponentials {
            let e = c * (s * r).exp();
            let mut sp = C64::new(1.0, 0.0);
            for slot in out.iter_mut() {
                *slot += e * sp;
                sp *= s;
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
struct Component {
    k: usize,
    l: usize,
    alpha: f64,
    beta: f64,
    poly: HarmonicPolynomial,
}

/// A model function on `A(r0, r1)` in `R^d`.
#[derive(Debug, Clone)]
pub struct AnnularModel {
    pub family: Family,
    pub d: usize,
    pub r0: f64,
    pub r1: f64,
    /// Claimed type: 0 for families of finite order or exponential type, `1/r0`
    /// for power functions of infinite order.
    pub tau_claimed: f64,
    components: Vec<Component>,
    zonal: f64,
    eigen_series: Vec<C64>,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

impl AnnularModel {
    pub fn new(family: Family, d: usize, r0: f64, r1: f64) -> Result<Self> {
        if !(r0 > 0.0 && r0 < r1 && r1.is_finite()) {
            return Err(Error::Config(format!("annulus ({r0}, {r1}) requires 0 < r0 < r1 < inf")));
        }
        if d != 2 && d != 3 {
            return Err(Error::Config(format!("d = {d}; models are implemented for d = 2, 3")));
        }
        let need_k = match &family {
            Family::Harmonic { terms, .. } => terms.iter().map(|t| t.k).max().unwrap_or(0),
            Family::Power { k, .. } | Family::Eigen { k, .. } => *k,
            Family::Exponential { .. } => 0,
        };
        let basis = HarmonicBasis::new(d, need_k)?;
        let poly = |k: usize, l: usize| -> Result<HarmonicPolynomial> {
            basis
                .poly(k, l)
                .cloned()
                .map_err(|_| Error::Config(format!("no harmonic ({k}, {l}) in d = {d}")))
        };
        let mut components = Vec::new();
        let mut eigen_series = Vec::new();
        let tau_claimed;
        match &family {
            Family::Harmonic { terms, log_coeff } => {
                for t in terms {
                    if d == 2 && t.k == 0 && t.beta != 0.0 {
                        return Err(Error::Config(
                            "d = 2, k = 0: the second solution is ln r; use log_coeff".into(),
                        ));
                    }
                    components.push(Component {
                        k: t.k,
                        l: t.l,
                        alpha: t.alpha,
                        beta: t.beta,
                        poly: poly(t.k, t.l)?,
                    });
                }
                if *log_coeff != 0.0 && d != 2 {
                    return Err(Error::Config("log_coeff is only meaningful for d = 2".into()));
                }
                tau_claimed = 0.0;
            }
            Family::Power { alpha, k, l } => {
                components.push(Component {
                    k: *k,
                    l: *l,
                    alpha: *alpha,
                    beta: 0.0,
                    poly: poly(*k, *l)?,
                });
                tau_claimed = if power_vanishing_order(*alpha, *k, d).is_some() {
                    0.0
                } else {
                    1.0 / r0
                };
            }
            Family::Exponential { a } => {
                if a.len() != d {
                    return Err(Error::Config(format!("a has {} components, expected {d}", a.len())));
                }
                tau_claimed = 0.0;
            }
            Family::Eigen { lambda, k, l } => {
                components.push(Component {
                    k: *k,
                    l: *l,
                    alpha: 0.0,
                    beta: 0.0,
                    poly: poly(*k, *l)?,
                });
                // s_j = λ^j / prod_(i<=j) 2i(2i + d - 2 + 2k), until negligible at r1
                let t = lambda.norm() * r1 * r1;
                let mut s = C64::new(1.0, 0.0);
                let mut mag = 1.0;
                eigen_series.push(s);
                for i in 1..400 {
                    let ci = (2 * i) as f64 * (2.0 * i as f64 + d as f64 - 2.0 + 2.0 * *k as f64);
                    s *= lambda / ci;
                    mag *= t / ci;
                    eigen_series.push(s);
                    if mag < 1e-18 && i > 2 {
                        break;
                    }
                }
                tau_claimed = 0.0;
            }
        }
        Ok(Self {
            family,
            d,
            r0,
            r1,
            tau_claimed,
            components,
            zonal: 1.0 / (2.0 * PI).sqrt(),
            eigen_series,
        })
    }

    pub fn from_definition(def: &ModelDefinition) -> Result<Self> {
        let mut obj = match &def.parameters {
            serde_json::Value::Object(m) => m.clone(),
            _ => return Err(Error::Config("parameters must be an object".into())),
        };
        obj.insert("family".into(), serde_json::Value::String(def.family.clone()));
        let family: Family = serde_json::from_value(serde_json::Value::Object(obj))
            .map_err(|e| Error::Config(format!("model parameters: {e}")))?;
        Self::new(family, def.d, def.r0, def.r1)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let def: ModelDefinition =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("model definition: {e}")))?;
        Self::from_definition(&def)
    }

    pub fn definition(&self) -> ModelDefinition {
        let mut v = serde_json::to_value(&self.family).expect("family serializes");
        let family = v
            .as_object_mut()
            .and_then(|m| m.remove("family"))
            .and_then(|f| f.as_str().map(String::from))
            .unwrap_or_default();
        ModelDefinition {
            family,
            d: self.d,
            r0: self.r0,
            r1: self.r1,
            parameters: v,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let r = norm(x);
        x.len() == self.d && r > self.r0 && r < self.r1
    }

    fn check(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.d {
            return Err(Error::InvalidInput(format!("point of dimension {} for d = {}", x.len(), self.d)));
        }
        let r = norm(x);
        if !(r > self.r0 && r < self.r1) {
            return Err(Error::Domain(format!("|x| = {r} outside ({}, {})", self.r0, self.r1)));
        }
        Ok(r)
    }

    pub fn value(&self, x: &[f64]) -> Result<C64> {
        self.laplacian_iterate(0, x)
    }

    /// `Δ^p f(x)`.
    pub fn laplacian_iterate(&self, p: usize, x: &[f64]) -> Result<C64> {
        let r = self.check(x)?;
        Ok(self.laplacian_unchecked(p, x, r))
    }

    fn laplacian_unchecked(&self, p: usize, x: &[f64], r: f64) -> C64 {
        let d = self.d as f64;
        match &self.family {
            Family::Harmonic { log_coeff, .. } => {
                if p > 0 {
                    return C64::new(0.0, 0.0);
                }
                let mut v = log_coeff * r.ln() * self.zonal;
                for c in &self.components {
                    let mu = 2.0 - c.k as f64 - d;
                    let y = c.poly.eval(x);
                    v += (c.alpha + c.beta * r.powf(mu - c.k as f64)) * y;
                }
                C64::new(v, 0.0)
            }
            Family::Power { alpha, k, .. } => {
                let c = &self.components[0];
                let coef = power_laplacian_coeff(*alpha, p, *k, self.d);
                C64::new(coef * r.powf(2.0 * alpha - 2.0 * p as f64) * c.poly.eval(x), 0.0)
            }
            Family::Exponential { a } => {
                let a2: f64 = a.iter().map(|c| c * c).sum();
                let dot: f64 = a.iter().zip(x).map(|(u, v)| u * v).sum();
                C64::new(a2.powi(p as i32) * dot.exp(), 0.0)
            }
            Family::Eigen { lambda, .. } => {
                let c = &self.components[0];
                lambda.powu(p as u32) * self.eigen_radial(r * r) * c.poly.eval(x)
            }
        }
    }

    fn eigen_radial(&self, t: f64) -> C64 {
        let mut v = C64::new(0.0, 0.0);
        let mut tp = 1.0;
        for s in &self.eigen_series {
            v += s * tp;
            tp *= t;
        }
        v
    }

    /// `∂_r Δ^p f(x)`, the derivative along `x/|x|`.
    pub fn radial_derivative(&self, p: usize, x: &[f64]) -> Result<C64> {
        let r = self.check(x)?;
        let d = self.d as f64;
        Ok(match &self.family {
            Family::Harmonic { log_coeff, .. } => {
                if p > 0 {
                    return Ok(C64::new(0.0, 0.0));
                }
                // f_(k,l)(r) Y(θ) with Y(θ) = Y(x)/r^k
                let mut v = log_coeff / r * self.zonal;
                for c in &self.components {
                    let k = c.k as f64;
                    let mu = 2.0 - k - d;
                    let y = c.poly.eval(x) / r.powf(k);
                    v += (c.alpha * k * r.powf(k - 1.0) + c.beta * mu * r.powf(mu - 1.0)) * y;
                }
                C64::new(v, 0.0)
            }
            Family::Power { alpha, k, .. } => {
                let c = &self.components[0];
                let kf = *k as f64;
                let coef = power_laplacian_coeff(*alpha, p, *k, self.d);
                let s = 2.0 * alpha - 2.0 * p as f64 + kf;
                C64::new(coef * s * r.powf(s - 1.0) * c.poly.eval(x) / r.powf(kf), 0.0)
            }
            Family::Exponential { a } => {
                let a2: f64 = a.iter().map(|c| c * c).sum();
                let dot: f64 = a.iter().zip(x).map(|(u, v)| u * v).sum();
                C64::new(a2.powi(p as i32) * dot / r * dot.exp(), 0.0)
            }
            Family::Eigen { lambda, k, .. } => {
                let c = &self.components[0];
                let kf = *k as f64;
                let y = c.poly.eval(x) / r.powf(kf);
                let mut v = C64::new(0.0, 0.0);
                for (j, s) in self.eigen_series.iter().enumerate() {
                    let e = 2.0 * j as f64 + kf;
                    if e != 0.0 {
                        v += s * e * r.powf(e - 1.0);
                    }
                }
                lambda.powu(p as u32) * v * y
            }
        })
    }

    /// Exact `f_(k,l)(r)` when available (not for the exponential family).
    pub fn radial_profile(&self, k: usize, l: usize) -> Option<RadialProfile> {
        let d = self.d as f64;
        let mut prof = RadialProfile::default();
        match &self.family {
            Family::Harmonic { log_coeff, .. } => {
                for c in self.components.iter().filter(|c| (c.k, c.l) == (k, l)) {
                    let kf = c.k as f64;
                    prof.powers.push((C64::new(c.alpha, 0.0), C64::new(kf, 0.0)));
                    if c.beta != 0.0 {
                        prof.powers.push((C64::new(c.beta, 0.0), C64::new(2.0 - kf - d, 0.0)));
                    }
                }
                if (k, l) == (0, 1) && *log_coeff != 0.0 {
                    prof.log_coeff = C64::new(*log_coeff, 0.0);
                }
            }
            Family::Power { alpha, k: pk, l: pl } => {
                if (k, l) == (*pk, *pl) {
                    prof.powers.push((C64::new(1.0, 0.0), C64::new(2.0 * alpha + k as f64, 0.0)));
                }
            }
            Family::Eigen { k: ek, l: el, .. } => {
                if (k, l) == (*ek, *el) {
                    for (j, s) in self.eigen_series.iter().enumerate() {
                        prof.powers.push((*s, C64::new(2.0 * j as f64 + k as f64, 0.0)));
                    }
                }
            }
            Family::Exponential { .. } => return None,
        }
        Some(prof)
    }

    /// `r -> f(r θ)` for a unit direction `θ`.
    pub fn radial_section(&self, theta: &[f64]) -> Result<RadialSection> {
        if theta.len() != self.d || (norm(theta) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput("direction must be a unit vector in R^d".into()));
        }
        let d = self.d as f64;
        let mut s = RadialSection::default();
        match &self.family {
            Family::Harmonic { log_coeff, .. } => {
                for c in &self.components {
                    let y = c.poly.eval(theta);
                    let kf = c.k as f64;
                    s.powers.push((C64::new(c.alpha * y, 0.0), C64::new(kf, 0.0)));
                    if c.beta != 0.0 {
                        s.powers.push((C64::new(c.beta * y, 0.0), C64::new(2.0 - kf - d, 0.0)));
                    }
                }
                s.log_coeff = C64::new(log_coeff * self.zonal, 0.0);
            }
            Family::Power { alpha, k, .. } => {
                let y = self.components[0].poly.eval(theta);
                s.powers.push((C64::new(y, 0.0), C64::new(2.0 * alpha + *k as f64, 0.0)));
            }
            Family::Exponential { a } => {
                let dot: f64 = a.iter().zip(theta).map(|(u, v)| u * v).sum();
                s.exponentials.push((C64::new(1.0, 0.0), C64::new(dot, 0.0)));
            }
            Family::Eigen { k, .. } => {
                let y = self.components[0].poly.eval(theta);
                for (j, c) in self.eigen_series.iter().enumerate() {
                    s.powers.push((c * y, C64::new(2.0 * j as f64 + *k as f64, 0.0)));
                }
            }
        }
        Ok(s)
    }

    /// Closed-form continuation to complex `z` (principal branches in `q(z)`).
    pub fn closed_form_continuation(&self, z: &[C64]) -> Result<C64> {
        if z.len() != self.d {
            return Err(Error::InvalidInput("complex point has wrong dimension".into()));
        }
        let q: C64 = z.iter().map(|c| c * c).sum();
        let d = self.d as f64;
        let needs_branch = match &self.family {
            Family::Harmonic { log_coeff, .. } => {
                *log_coeff != 0.0 || (self.d % 2 == 1 && self.components.iter().any(|c| c.beta != 0.0))
            }
            Family::Power { alpha, .. } => alpha.fract() != 0.0,
            _ => false,
        };
        if needs_branch && on_branch_cut(q) {
            return Err(Error::Domain("q(z) on the branch cut".into()));
        }
        Ok(match &self.family {
            Family::Harmonic { log_coeff, .. } => {
                let mut v = log_coeff * 0.5 * q.ln() * self.zonal;
                for c in &self.components {
                    let y = c.poly.eval_complex(z);
                    let e = (2.0 - d) / 2.0 - c.k as f64;
                    let second = if c.beta != 0.0 { c.beta * q.powf(e) } else { C64::new(0.0, 0.0) };
                    v += (second + c.alpha) * y;
                }
                v
            }
            Family::Power { alpha, .. } => q.powf(*alpha) * self.components[0].poly.eval_complex(z),
            Family::Exponential { a } => z.iter().zip(a).map(|(u, v)| u * v).sum::<C64>().exp(),
            Family::Eigen { .. } => {
                let mut s = C64::new(0.0, 0.0);
                let mut qp = C64::new(1.0, 0.0);
                for c in &self.eigen_series {
                    s += c * qp;
                    qp *= q;
                }
                s * self.components[0].poly.eval_complex(z)
            }
        })
    }

    /// Type estimates `t_p = (max_K |Δ^p f| / (2p)!)^(1/2p)` for `p = 1..=p_max`
    /// on a fixed grid over `K = {a <= |x| <= b}`.
    pub fn estimate_type(&self, a: f64, b: f64, p_max: usize) -> Result<Vec<f64>> {
        if p_max < 5 {
            return Err(Error::InvalidInput(format!("p_max = {p_max} < 5")));
        }
        if !(self.r0 < a && a < b && b < self.r1) {
            return Err(Error::InvalidInput(format!(
                "K = [{a}, {b}] is not a compact subset of ({}, {})",
                self.r0, self.r1
            )));
        }
        let radii: Vec<f64> = (0..32).map(|i| a + (b - a) * i as f64 / 31.0).collect();
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        if self.d == 2 {
            for j in 0..64 {
                let t = 2.0 * PI * j as f64 / 64.0;
                dirs.push(vec![t.cos(), t.sin()]);
            }
        } else {
            for i in 0..32 {
                let th = PI * (i as f64 + 0.5) / 32.0;
                for j in 0..64 {
                    let ph = 2.0 * PI * j as f64 / 64.0;
                    dirs.push(vec![th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]);
                }
            }
        }
        let mut maxima = vec![0.0f64; p_max + 1];
        for &r in &radii {
            for u in &dirs {
                let x: Vec<f64> = u.iter().map(|c| c * r).collect();
                for (p, m) in maxima.iter_mut().enumerate().skip(1) {
                    let v = self.laplacian_unchecked(p, &x, r).norm();
                    if v > *m {
                        *m = v;
                    }
                }
            }
        }
        Ok((1..=p_max)
            .map(|p| {
                if maxima[p] == 0.0 {
                    0.0
                } else {
                    ((maxima[p].ln() - ln_factorial(2 * p)) / (2 * p) as f64).exp()
                }
            })
            .collect())
    }
}
