//! Real spherical harmonics for `d = 2, 3`, quadrature on the unit sphere,
//! Fourier-Laplace coefficients and the Lie norms of `C^d`.
//!
//! Every basis element is stored as a homogeneous harmonic polynomial
//! `Y_(k,l)(x)` of degree `k`, so the same object evaluates on the sphere and
//! continues to complex points.

use crate::error::LieConstraint;
use crate::operator_core::ExponentSequence;
use crate::quadrature::gauss_legendre;
use crate::{factorial, Error, Result, C64};
use std::collections::BTreeMap;
use std::f64::consts::PI;

type Monomial = [u32; 3];

/// Homogeneous polynomial in up to three variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HarmonicPolynomial {
    pub terms: Vec<(Monomial, f64)>,
}

#[derive(Default)]
struct PolyBuilder(BTreeMap<Monomial, f64>);

impl PolyBuilder {
    fn monomial(e: Monomial, c: f64) -> Self {
        let mut m = BTreeMap::new();
        m.insert(e, c);
        Self(m)
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (a, ca) in &self.0 {
            for (b, cb) in &other.0 {
                let e = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
                *out.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        Self(out)
    }

    fn add_scaled(&mut self, other: &Self, s: f64) {
        for (e, c) in &other.0 {
            *self.0.entry(*e).or_insert(0.0) += s * c;
        }
    }

    fn finish(self, scale: f64) -> HarmonicPolynomial {
        HarmonicPolynomial {
            terms: self
                .0
                .into_iter()
                .filter(|(_, c)| *c != 0.0)
                .map(|(e, c)| (e, c * scale))
                .collect(),
        }
    }
}

impl HarmonicPolynomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let get = |i: usize| x.get(i).copied().unwrap_or(0.0);
        let (a, b, c) = (get(0), get(1), get(2));
        self.terms
            .iter()
            .map(|(e, coef)| coef * a.powi(e[0] as i32) * b.powi(e[1] as i32) * c.powi(e[2] as i32))
            .sum()
    }

    pub fn eval_complex(&self, z: &[C64]) -> C64 {
        let zero = C64::new(0.0, 0.0);
        let get = |i: usize| z.get(i).copied().unwrap_or(zero);
        let (a, b, c) = (get(0), get(1), get(2));
        self.terms
            .iter()
            .map(|(e, coef)| a.powu(e[0]) * b.powu(e[1]) * c.powu(e[2]) * *coef)
            .sum()
    }
}

/// `Re (x + iy)^m` and `Im (x + iy)^m`.
fn xy_power(m: u32) -> (PolyBuilder, PolyBuilder) {
    let mut re = PolyBuilder::default();
    let mut im = PolyBuilder::default();
    let mut binom = 1.0;
    for p in 0..=m {
        if p > 0 {
            binom *= (m - p + 1) as f64 / p as f64;
        }
        // x^(m-p) (iy)^p
        let e = [m - p, p, 0];
        match p % 4 {
            0 => re.add_scaled(&PolyBuilder::monomial(e, binom), 1.0),
            1 => im.add_scaled(&PolyBuilder::monomial(e, binom), 1.0),
            2 => re.add_scaled(&PolyBuilder::monomial(e, binom), -1.0),
            _ => im.add_scaled(&PolyBuilder::monomial(e, binom), -1.0),
        }
    }
    (re, im)
}

fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `sqrt((l-m)!/(l+m)!) * sum_k (-1)^k 2^-l C(l,k) C(2l-2k,l) (l-2k)!/(l-2k-m)! r^2k z^(l-2k-m)`.
fn legendre_part(l: u32, m: u32) -> PolyBuilder {
    let r2 = {
        let mut p = PolyBuilder::monomial([2, 0, 0], 1.0);
        p.add_scaled(&PolyBuilder::monomial([0, 2, 0], 1.0), 1.0);
        p.add_scaled(&PolyBuilder::monomial([0, 0, 2], 1.0), 1.0);
        p
    };
    let norm = (factorial((l - m) as usize) / factorial((l + m) as usize)).sqrt();
    let mut out = PolyBuilder::default();
    let mut r2k = PolyBuilder::monomial([0, 0, 0], 1.0);
    for k in 0..=(l - m) / 2 {
        if k > 0 {
            r2k = r2k.mul(&r2);
        }
        let coef = (-1f64).powi(k as i32) * 2f64.powi(-(l as i32))
            * binomial(l, k)
            * binomial(2 * l - 2 * k, l)
            * factorial((l - 2 * k) as usize)
            / factorial((l - 2 * k - m) as usize);
        let zp = PolyBuilder::monomial([0, 0, l - 2 * k - m], coef);
        out.add_scaled(&r2k.mul(&zp), norm);
    }
    out
}

/// Number of independent harmonics of degree `k` in dimension `d`.
pub fn harmonic_dimension(k: usize, d: usize) -> usize {
    let b = |n: i64, r: i64| -> usize {
        if n < r || n < 0 {
            0
        } else {
            binomial(n as u32, r as u32).round() as usize
        }
    };
    let (k, d) = (k as i64, d as i64);
    b(k + d - 1, d - 1) - b(k + d - 3, d - 1)
}

/// Surface area of the unit sphere in `R^d`.
pub fn sphere_area(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    // 2 π^(d/2) / Γ(d/2), exact for the supported dimensions
    match d {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => 2.0 * PI.powf(h) / gamma_half_integer(h),
    }
}

fn gamma_half_integer(h: f64) -> f64 {
    // h is an integer or half-integer
    let mut g = if h.fract() == 0.0 { 1.0 } else { PI.sqrt() };
    let mut x = if h.fract() == 0.0 { 1.0 } else { 0.5 };
    while x < h {
        g *= x;
        x += 1.0;
    }
    g
}

/// Orthonormal real harmonics `Y_(k,l)`, `l = 1..=a_k`, for `k <= k_max`.
///
/// Ordering for `d = 3`: `l = 1` is the zonal harmonic, then cosine/sine
/// pairs in increasing order `m = 1..=k`. For `d = 2`: `cos kφ` then
/// `sin kφ`.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    d: usize,
    k_max: usize,
    polys: Vec<Vec<HarmonicPolynomial>>,
}

impl HarmonicBasis {
    pub fn new(d: usize, k_max: usize) -> Result<Self> {
        let polys = match d {
            2 => (0..=k_max as u32)
                .map(|k| {
                    if k == 0 {
                        vec![PolyBuilder::monomial([0, 0, 0], 1.0).finish(1.0 / (2.0 * PI).sqrt())]
                    } else {
                        let (re, im) = xy_power(k);
                        let s = 1.0 / PI.sqrt();
                        vec![re.finish(s), im.finish(s)]
                    }
                })
                .collect(),
            3 => (0..=k_max as u32)
                .map(|l| {
                    let mut v = vec![legendre_part(l, 0).finish(((2 * l + 1) as f64 / (4.0 * PI)).sqrt())];
                    let s = ((2 * l + 1) as f64 / (2.0 * PI)).sqrt();
                    for m in 1..=l {
                        let p = legendre_part(l, m);
                        let (re, im) = xy_power(m);
                        v.push(p.mul(&re).finish(s));
                        v.push(p.mul(&im).finish(s));
                    }
                    v
                })
                .collect(),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "spherical harmonics implemented for d = 2, 3 only (got {d})"
                )))
            }
        };
        Ok(Self { d, k_max, polys })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// `a_k`.
    pub fn count(&self, k: usize) -> usize {
        harmonic_dimension(k, self.d)
    }

    /// Surface area `ω_d` of the unit sphere.
    pub fn omega(&self) -> f64 {
        sphere_area(self.d)
    }

    pub fn poly(&self, k: usize, l: usize) -> Result<&HarmonicPolynomial> {
        self.polys
            .get(k)
            .and_then(|v| v.get(l.wrapping_sub(1)))
            .ok_or_else(|| Error::InvalidInput(format!("no basis element ({k}, {l}) with k_max = {}", self.k_max)))
    }

    /// All `(k, l)` pairs in k-then-l order.
    pub fn indices(&self) -> Vec<(usize, usize)> {
        (0..=self.k_max)
            .flat_map(|k| (1..=self.count(k)).map(move |l| (k, l)))
            .collect()
    }

    /// `Y_(k,l)` at a point of the unit sphere, or the solid harmonic at any
    /// real point.
    pub fn eval(&self, k: usize, l: usize, x: &[f64]) -> Result<f64> {
        Ok(self.poly(k, l)?.eval(x))
    }

    pub fn eval_complex(&self, k: usize, l: usize, z: &[C64]) -> Result<C64> {
        Ok(self.poly(k, l)?.eval_complex(z))
    }
}

/// Product quadrature on the unit sphere, exact for polynomials of degree
/// `<= 2 * band + 1` (d = 3) or trigonometric degree `< 4 (band + 1)` (d = 2).
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    pub d: usize,
    pub band: usize,
    pub nodes: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl SphereQuadrature {
    pub fn new(d: usize, band: usize) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        match d {
            2 => {
                let n = 4 * (band + 1);
                for j in 0..n {
                    let t = 2.0 * PI * j as f64 / n as f64;
                    nodes.push([t.cos(), t.sin(), 0.0]);
                    weights.push(2.0 * PI / n as f64);
                }
            }
            3 => {
                let (ct, wt) = gauss_legendre(band + 1);
                let nphi = 2 * (band + 1) + 1;
                for (c, w) in ct.iter().zip(&wt) {
                    let s = (1.0 - c * c).sqrt();
                    for j in 0..nphi {
                        let p = 2.0 * PI * j as f64 / nphi as f64;
                        nodes.push([s * p.cos(), s * p.sin(), *c]);
                        weights.push(w * 2.0 * PI / nphi as f64);
                    }
                }
            }
            _ => {
                return Err(Error::InvalidInput(format!(
                    "sphere quadrature implemented for d = 2, 3 only (got {d})"
                )))
            }
        }
        Ok(Self {
            d,
            band,
            nodes,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `r * θ_i` truncated to the ambient dimension.
    pub fn scaled_node(&self, i: usize, r: f64) -> Vec<f64> {
        self.nodes[i][..self.d].iter().map(|c| c * r).collect()
    }
}

/// Basis values tabulated on a quadrature grid, for projecting many
/// functions at once.
#[derive(Debug, Clone)]
pub struct ProjectionGrid {
    pub basis: HarmonicBasis,
    pub quad: SphereQuadrature,
    indices: Vec<(usize, usize)>,
    table: Vec<Vec<f64>>,
}

impl ProjectionGrid {
    pub fn new(d: usize, k_max: usize, band: usize) -> Result<Self> {
        let basis = HarmonicBasis::new(d, k_max)?;
        let quad = SphereQuadrature::new(d, band.max(k_max))?;
        let indices = basis.indices();
        let table = indices
            .iter()
            .map(|&(k, l)| {
                let p = basis.poly(k, l).expect("index from basis");
                quad.nodes.iter().map(|x| p.eval(&x[..d])).collect()
            })
            .collect();
        Ok(Self {
            basis,
            quad,
            indices,
            table,
        })
    }

    pub fn indices(&self) -> &[(usize, usize)] {
        &self.indices
    }

    pub fn position(&self, k: usize, l: usize) -> Result<usize> {
        self.indices
            .iter()
            .position(|&p| p == (k, l))
            .ok_or_else(|| Error::InvalidInput(format!("({k}, {l}) not in basis")))
    }

    /// Coefficients `∫ g Y_(k,l) dσ` for every basis element, from values of
    /// `g` at the quadrature nodes.
    pub fn project(&self, values: &[C64]) -> Vec<C64> {
        self.table
            .iter()
            .map(|row| {
                row.iter()
                    .zip(values)
                    .zip(&self.quad.weights)
                    .map(|((y, v), w)| v * (y * w))
                    .sum()
            })
            .collect()
    }

    pub fn project_one(&self, values: &[C64], k: usize, l: usize) -> Result<C64> {
        let row = &self.table[self.position(k, l)?];
        Ok(row
            .iter()
            .zip(values)
            .zip(&self.quad.weights)
            .map(|((y, v), w)| v * (y * w))
            .sum())
    }

    /// Values of `f(r θ_i)` at every node.
    pub fn sample<F: Fn(&[f64]) -> C64>(&self, f: F, r: f64) -> Vec<C64> {
        (0..self.quad.len()).map(|i| f(&self.quad.scaled_node(i, r))).collect()
    }
}

fn check_radius(r: f64, annulus: (f64, f64)) -> Result<()> {
    if !(r > annulus.0 && r < annulus.1) {
        return Err(Error::InvalidInput(format!(
            "radius {r} outside ({}, {})",
            annulus.0, annulus.1
        )));
    }
    Ok(())
}

/// Fourier-Laplace coefficient `f_(k,l)(r) = ∫ f(rθ) Y_(k,l)(θ) dθ`.
pub fn flc<F: Fn(&[f64]) -> C64>(
    f: F,
    grid: &ProjectionGrid,
    k: usize,
    l: usize,
    r: f64,
    annulus: (f64, f64),
) -> Result<C64> {
    check_radius(r, annulus)?;
    grid.project_one(&grid.sample(f, r), k, l)
}

/// `(∫ |f(rθ)|^2 dθ, sum_(k <= k_max) |f_(k,l)(r)|^2)` on the grid.
pub fn parseval_check<F: Fn(&[f64]) -> C64>(
    f: F,
    grid: &ProjectionGrid,
    r: f64,
    annulus: (f64, f64),
) -> Result<(f64, f64)> {
    check_radius(r, annulus)?;
    let values = grid.sample(f, r);
    let lhs = values
        .iter()
        .zip(&grid.quad.weights)
        .map(|(v, w)| v.norm_sqr() * w)
        .sum();
    let rhs = grid.project(&values).iter().map(|c| c.norm_sqr()).sum();
    Ok((lhs, rhs))
}

/// `L_k r^mu = coefficient * r^(mu - 2)` with
/// `coefficient = mu(mu-1) + (d-1)mu - k(k+d-2)`.
pub fn apply_lk_power(mu: C64, k: usize, d: usize) -> (C64, C64) {
    let k = k as f64;
    let d = d as f64;
    (mu * (mu - 1.0) + mu * (d - 1.0) - k * (k + d - 2.0), mu - 2.0)
}

/// Exponents of `L_k^p` after `r = e^v`.
pub fn exponent_sequence_for(k: usize, d: usize) -> Result<ExponentSequence> {
    ExponentSequence::harmonic(k as u32, d as u32)
}

/// Pairs `(odd index, even index)` of coinciding exponents among the first
/// `n + 1`, non-empty only for even `d`.
pub fn collision_table(seq: &ExponentSequence, n: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .step_by(2)
        .filter_map(|i| seq.collision_partner(i).map(|p| (i, p)))
        .collect()
}

/// A complex point with its quadratic form and Lie norms.
#[derive(Debug, Clone, PartialEq)]
pub struct LiePoint {
    pub z: Vec<C64>,
    pub q: C64,
    pub l_plus: f64,
    pub l_minus: f64,
}

/// `L±(z) = sqrt(|z|^2 ± sqrt(|z|^4 - |q|^2))`. `L-` is taken as `|q|/L+`
/// to avoid cancellation.
pub fn lie_point(z: &[C64]) -> LiePoint {
    let q: C64 = z.iter().map(|c| c * c).sum();
    let n2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    let mut disc = n2 * n2 - q.norm_sqr();
    if disc < 0.0 {
        // only rounding can push this below zero
        disc = 0.0;
    }
    let l_plus = (n2 + disc.sqrt()).sqrt();
    let l_minus = if l_plus > 0.0 { q.norm() / l_plus } else { 0.0 };
    LiePoint {
        z: z.to_vec(),
        q,
        l_plus,
        l_minus,
    }
}

/// `q` on the closed negative real axis.
pub fn on_branch_cut(q: C64) -> bool {
    q.re <= 0.0 && q.im.abs() <= 1e-12
}

/// First violated constraint of `r0 < L- < L+ < r1` (and the cut when
/// requested), or `None` when the point is inside.
pub fn lie_annulus_violation(p: &LiePoint, r0: f64, r1: f64, exclude_cut: bool) -> Option<LieConstraint> {
    if !(p.l_minus > r0) {
        Some(LieConstraint::InnerNorm)
    } else if !(p.l_plus < r1) {
        Some(LieConstraint::OuterNorm)
    } else if exclude_cut && on_branch_cut(p.q) {
        Some(LieConstraint::BranchCut)
    } else {
        None
    }
}

pub fn lie_annulus_contains(p: &LiePoint, r0: f64, r1: f64, exclude_cut: bool) -> bool {
    lie_annulus_violation(p, r0, r1, exclude_cut).is_none()
}

/// `(sum_l |Y_(k,l)(z)|^2, (a_k/ω) L+(z)^(2k))`.
pub fn harmonic_addition_bound(basis: &HarmonicBasis, z: &[C64], k: usize) -> Result<(f64, f64)> {
    let mut lhs = 0.0;
    for l in 1..=basis.count(k) {
        lhs += basis.eval_complex(k, l, z)?.norm_sqr();
    }
    let p = lie_point(z);
    let rhs = basis.count(k) as f64 / basis.omega() * p.l_plus.powi(2 * k as i32);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn dimensions() {
        assert_eq!(harmonic_dimension(0, 2), 1);
        assert_eq!(harmonic_dimension(5, 2), 2);
        assert_eq!(harmonic_dimension(4, 3), 9);
        assert_eq!(harmonic_dimension(2, 4), 9);
    }

    #[test]
    fn orthonormal_up_to_eight() {
        for d in [2, 3] {
            let g = ProjectionGrid::new(d, 8, 8).unwrap();
            let idx = g.indices().to_vec();
            for (a, &(k1, l1)) in idx.iter().enumerate() {
                let vals: Vec<C64> = g
                    .quad
                    .nodes
                    .iter()
                    .map(|x| c(g.basis.eval(k1, l1, &x[..d]).unwrap()))
                    .collect();
                let proj = g.project(&vals);
                for (b, v) in proj.iter().enumerate() {
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((v.re - want).abs() < 1e-10, "d={d} {:?} {:?}: {v}", idx[a], idx[b]);
                }
            }
        }
    }

    #[test]
    fn basis_is_harmonic() {
        // exact Laplacian of each polynomial
        for d in [2, 3] {
            let b = HarmonicBasis::new(d, 8).unwrap();
            for (k, l) in b.indices() {
                let mut lap: BTreeMap<Monomial, f64> = BTreeMap::new();
                for (e, c) in &b.poly(k, l).unwrap().terms {
                    assert_eq!(e.iter().sum::<u32>() as usize, k);
                    for i in 0..3 {
                        if e[i] >= 2 {
                            let mut f = *e;
                            f[i] -= 2;
                            *lap.entry(f).or_insert(0.0) += c * (e[i] * (e[i] - 1)) as f64;
                        }
                    }
                }
                assert!(lap.values().all(|v| v.abs() < 1e-9), "d={d} ({k},{l})");
            }
        }
    }

    #[test]
    fn flc_of_band_limited_input() {
        let g = ProjectionGrid::new(2, 6, 6).unwrap();
        let f = |x: &[f64]| {
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            let phi = x[1].atan2(x[0]);
            c(2.0 / (2.0 * PI).sqrt() + 3.0 * r.powi(2) * (2.0 * phi).sin() / PI.sqrt())
        };
        let v = flc(f, &g, 2, 2, 1.3, (0.5, 2.0)).unwrap();
        assert!((v.re - 3.0 * 1.69).abs() < 1e-12);
        let (lhs, rhs) = parseval_check(f, &g, 1.0, (0.5, 2.0)).unwrap();
        assert!((lhs - 13.0).abs() < 1e-12 && (rhs - 13.0).abs() < 1e-12);
        assert!(flc(f, &g, 0, 1, 2.5, (0.5, 2.0)).is_err());
    }

    #[test]
    fn log_radius_coefficient() {
        let g = ProjectionGrid::new(2, 4, 4).unwrap();
        let f = |x: &[f64]| c((x[0] * x[0] + x[1] * x[1]).sqrt().ln());
        for r in [0.6, 1.0, 1.7] {
            let v = flc(f, &g, 0, 1, r, (0.5, 2.0)).unwrap();
            assert!((v.re - (2.0 * PI).sqrt() * r.ln()).abs() < 1e-10);
        }
    }

    #[test]
    fn radial_operator_on_powers() {
        let (coef, next) = apply_lk_power(c(2.0 * 0.5 + 1.0), 1, 3);
        assert_eq!(coef, c(4.0));
        assert_eq!(next, c(0.0));
        // iterating reproduces prod (2α - 2i)(2α + d - 2 + 2k - 2i)
        let (alpha, k, d) = (0.37, 2usize, 3usize);
        let mut mu = c(2.0 * alpha + k as f64);
        let mut prod = c(1.0);
        for _ in 0..6 {
            let (cf, m) = apply_lk_power(mu, k, d);
            prod *= cf;
            mu = m;
        }
        let mut want = 1.0;
        for i in 0..6 {
            let i = i as f64;
            want *= (2.0 * alpha - 2.0 * i) * (2.0 * alpha + d as f64 - 2.0 + 2.0 * k as f64 - 2.0 * i);
        }
        assert!((prod.re - want).abs() < 1e-9 * want.abs());
    }

    #[test]
    fn collisions_only_in_even_dimension() {
        let s = exponent_sequence_for(0, 2).unwrap();
        assert_eq!(collision_table(&s, 5), vec![(1, 0), (3, 2), (5, 4)]);
        let s = exponent_sequence_for(2, 3).unwrap();
        assert!(collision_table(&s, 20).is_empty());
    }

    #[test]
    fn lie_norms_of_real_points() {
        let p = lie_point(&[c(0.3), c(-1.2), c(0.4)]);
        let r = (0.09f64 + 1.44 + 0.16).sqrt();
        assert!((p.l_plus - r).abs() < 1e-14 && (p.l_minus - r).abs() < 1e-14);
        let p0 = lie_point(&[c(0.0), c(0.0), c(0.0)]);
        assert_eq!((p0.l_plus, p0.l_minus), (0.0, 0.0));
    }

    #[test]
    fn cut_exclusion() {
        // q = -1 on the cut
        let p = lie_point(&[C64::new(0.0, 1.0), c(0.0), c(0.0)]);
        assert!(lie_annulus_contains(&p, 0.5, 2.0, false));
        assert_eq!(lie_annulus_violation(&p, 0.5, 2.0, true), Some(LieConstraint::BranchCut));
    }

    #[test]
    fn addition_bound_at_origin() {
        let b = HarmonicBasis::new(3, 4).unwrap();
        let z = [c(0.0); 3];
        for k in 1..=4 {
            assert_eq!(harmonic_addition_bound(&b, &z, k).unwrap(), (0.0, 0.0));
        }
    }

    #[test]
    fn addition_theorem_equality_on_real_points() {
        let b = HarmonicBasis::new(3, 6).unwrap();
        let x = [c(0.2), c(0.9), c(-0.7)];
        for k in 0..=6 {
            let (l, r) = harmonic_addition_bound(&b, &x, k).unwrap();
            assert!((l - r).abs() < 1e-12 * r.max(1.0));
        }
    }

    fn cvec(d: usize) -> impl Strategy<Value = Vec<C64>> {
        prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5), d).prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
    }

    proptest! {
        #[test]
        fn lie_norm_product(z in cvec(3)) {
            let p = lie_point(&z);
            prop_assert!((p.l_plus * p.l_minus - p.q.norm()).abs() <= 1e-12 * p.q.norm().max(1.0));
            prop_assert!(p.l_minus <= p.l_plus * (1.0 + 1e-15));
        }

        #[test]
        fn addition_bound_holds(z in cvec(3), k in 0usize..8) {
            let b = HarmonicBasis::new(3, 8).unwrap();
            let (l, r) = harmonic_addition_bound(&b, &z, k).unwrap();
            prop_assert!(l <= r * (1.0 + 1e-10) + 1e-300);
        }

        #[test]
        fn addition_bound_holds_plane(z in cvec(2), k in 0usize..10) {
            let b = HarmonicBasis::new(2, 10).unwrap();
            let (l, r) = harmonic_addition_bound(&b, &z, k).unwrap();
            prop_assert!(l <= r * (1.0 + 1e-10) + 1e-300);
        }
    }
}
