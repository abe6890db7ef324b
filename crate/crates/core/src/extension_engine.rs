//! Continuation of annular functions through their Fourier-Laplace
//! coefficients in the log variable `v = ln r`.
//!
//! For each `(k, l)` the coefficient `g(v) = f_(k,l)(e^v)` is expanded in
//! fundamental functions of the exponents `λ(2j) = k + 2j`,
//! `λ(2j+1) = 2 - k - d + 2j`. Rearranging that expansion gives
//! `f_(k,l)(r) = sum_j a_j r^λj` (times `ln r` for the collided exponents of
//! even `d`), which is evaluated at complex points through `q(z) = z·z`.

use crate::annular_models::AnnularModel;
use crate::operator_core::{multiplicity_table, partial_fractions, windowed_rate, ExponentSequence, FundamentalFunction};
use crate::spherical::{exponent_sequence_for, lie_annulus_violation, lie_point, on_branch_cut, HarmonicBasis, ProjectionGrid};
use crate::{ln_factorial, Error, Result, C64};
use serde::{Deserialize, Serialize};

/// Truncation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtensionOptions {
    /// Highest log-derivative order `N`.
    pub n: usize,
    /// Coefficients per Laurent part: `a_0 .. a_(2J-1)`.
    pub j: usize,
    /// Highest harmonic degree.
    pub k_max: usize,
    /// Quadrature band on the sphere.
    pub band: usize,
    /// Largest accepted tail bound per coefficient, relative to `max(1, |a|)`.
    pub tail_tol: f64,
    /// Expansion point in `v`; defaults to the log of the geometric mean radius.
    pub v0: Option<f64>,
}

impl Default for ExtensionOptions {
    fn default() -> Self {
        Self {
            n: 40,
            j: 20,
            k_max: 12,
            band: 24,
            tail_tol: 1e-8,
            v0: None,
        }
    }
}

impl ExtensionOptions {
    pub fn validate(&self) -> Result<()> {
        if self.j == 0 || self.n == 0 {
            return Err(Error::Config("n and j must be positive".into()));
        }
        if 2 * self.j > self.n + 1 {
            return Err(Error::Config(format!(
                "j = {} needs at least n = {} log-derivatives",
                self.j,
                2 * self.j - 1
            )));
        }
        if self.band < self.k_max {
            return Err(Error::Config(format!("band {} below k_max {}", self.band, self.k_max)));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol.is_finite()) {
            return Err(Error::Config(format!("tail_tol = {}", self.tail_tol)));
        }
        Ok(())
    }
}

/// `D^(n) g(v0)` for `n = 0..=N`, where `g(v) = f_(k,l)(e^v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogCoefficientJet {
    pub k: usize,
    pub l: usize,
    pub d: usize,
    pub v0: f64,
    pub derivs: Vec<C64>,
    pub exponents: ExponentSequence,
    /// Type bound used for disc radii and tail estimates.
    pub tau: f64,
}

/// A value with its truncation estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: C64,
    pub tail_estimate: f64,
    /// The point lies outside the disc where convergence is guaranteed.
    pub outside_guaranteed: bool,
}

impl LogCoefficientJet {
    /// Jet with arbitrary exponents, for synthetic inputs.
    pub fn from_parts(
        k: usize,
        l: usize,
        d: usize,
        v0: f64,
        derivs: Vec<C64>,
        exponents: ExponentSequence,
        tau: f64,
    ) -> Result<Self> {
        if derivs.is_empty() {
            return Err(Error::InvalidInput("empty jet".into()));
        }
        if let Some(len) = exponents.len() {
            if len < derivs.len() {
                return Err(Error::InvalidInput(format!("{len} exponents for {} derivatives", derivs.len())));
            }
        }
        if !(tau >= 0.0) {
            return Err(Error::InvalidInput(format!("tau = {tau}")));
        }
        Ok(Self {
            k,
            l,
            d,
            v0,
            derivs,
            exponents,
            tau,
        })
    }

    pub fn order(&self) -> usize {
        self.derivs.len() - 1
    }

    /// `ln(1 + 1/(e^v0 τ))`, infinite for `τ = 0`.
    pub fn guaranteed_log_radius(&self) -> f64 {
        if self.tau > 0.0 {
            (1.0 / (self.v0.exp() * self.tau)).ln_1p()
        } else {
            f64::INFINITY
        }
    }

    /// Root-test rate of the jet divided by `e^v0`: an empirical type.
    pub fn empirical_type(&self) -> Result<f64> {
        Ok(crate::operator_core::root_test_rate(&self.derivs)? / self.v0.exp())
    }

    /// `sum_n D^(n) g(v0) Φ_n(v - v0)`.
    pub fn taylor_in_log(&self, v: C64) -> Result<SeriesValue> {
        let x = v - self.v0;
        let lam = self.exponents.prefix(self.order())?;
        let mut value = C64::new(0.0, 0.0);
        let mut last = [0.0f64; 2];
        for (n, dn) in self.derivs.iter().enumerate() {
            let term = if dn.norm() == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                dn * FundamentalFunction::new(lam[..=n].to_vec())?.eval(x)?
            };
            value += term;
            last = [last[1], term.norm()];
        }
        let radius = self.guaranteed_log_radius();
        let rho = x.norm() / radius;
        let tail = if rho < 1.0 { last[0].max(last[1]) / (1.0 - rho) } else { f64::INFINITY };
        Ok(SeriesValue {
            value,
            tail_estimate: tail,
            outside_guaranteed: x.norm() >= radius,
        })
    }
}

/// Jets of every `(k, l)` of `grid`, in the grid's order.
pub fn log_jets(model: &AnnularModel, grid: &ProjectionGrid, v0: f64, n: usize) -> Result<Vec<LogCoefficientJet>> {
    if grid.basis.dim() != model.d {
        return Err(Error::InvalidInput(format!(
            "grid for d = {}, model in d = {}",
            grid.basis.dim(),
            model.d
        )));
    }
    let r = v0.exp();
    if !(r > model.r0 && r < model.r1) {
        return Err(Error::InvalidInput(format!(
            "v0 = {v0} outside (ln {}, ln {})",
            model.r0, model.r1
        )));
    }
    let idx = grid.indices();
    let mut derivs = vec![vec![C64::new(0.0, 0.0); n + 1]; idx.len()];
    let mut vals = Vec::with_capacity(grid.quad.len());
    let mut dvals = Vec::with_capacity(grid.quad.len());
    for p in 0..=n / 2 {
        vals.clear();
        dvals.clear();
        let odd = 2 * p + 1 <= n;
        for i in 0..grid.quad.len() {
            let x = grid.quad.scaled_node(i, r);
            vals.push(model.laplacian_iterate(p, &x)?);
            if odd {
                dvals.push(model.radial_derivative(p, &x)?);
            }
        }
        let even_part = grid.project(&vals);
        let scale = (2.0 * p as f64 * v0).exp();
        for (t, c) in even_part.into_iter().enumerate() {
            derivs[t][2 * p] = c * scale;
        }
        if odd {
            // (d/dv - λ(2p)) e^(2pv) L^p f(e^v) with λ(2p) = k + 2p
            let scale = ((2 * p + 1) as f64 * v0).exp();
            for (t, c) in grid.project(&dvals).into_iter().enumerate() {
                derivs[t][2 * p + 1] = c * scale - idx[t].0 as f64 * derivs[t][2 * p];
            }
        }
    }
    idx.iter()
        .zip(derivs)
        .map(|(&(k, l), derivs)| {
            Ok(LogCoefficientJet {
                k,
                l,
                d: model.d,
                v0,
                derivs,
                exponents: exponent_sequence_for(k, model.d)?,
                tau: model.tau_claimed,
            })
        })
        .collect()
}

/// Jet of a single `(k, l)`.
pub fn log_jet(model: &AnnularModel, k: usize, l: usize, v0: f64, n: usize) -> Result<LogCoefficientJet> {
    let grid = ProjectionGrid::new(model.d, k, k.max(24))?;
    let t = grid.position(k, l)?;
    Ok(log_jets(model, &grid, v0, n)?.swap_remove(t))
}

/// Coefficients `a_j`, `j = 0..2J`, of `f_(k,l)(r) = sum a_j r^λj`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionSeries {
    pub k: usize,
    pub l: usize,
    pub d: usize,
    pub tau: f64,
    pub coeffs: Vec<C64>,
    /// `true` where the basis element is `ln r · r^λj` (even `d` only).
    pub log_flags: Vec<bool>,
    pub trunc_error: f64,
}

impl ExtensionSeries {
    /// `λ_j` for this `(k, d)`.
    pub fn exponent(&self, j: usize) -> i64 {
        let (k, d) = (self.k as i64, self.d as i64);
        if j % 2 == 0 {
            k + j as i64
        } else {
            2 - k - d + j as i64 - 1
        }
    }

    pub fn coeffs_even(&self) -> Vec<C64> {
        self.coeffs.iter().step_by(2).copied().collect()
    }

    pub fn coeffs_odd(&self) -> Vec<C64> {
        self.coeffs.iter().skip(1).step_by(2).copied().collect()
    }

    pub fn j_count(&self) -> usize {
        self.coeffs.len() / 2
    }
}

fn geometric_ratio(jet: &LogCoefficientJet) -> Result<f64> {
    let eps = if jet.tau > 0.0 { 0.05 * jet.tau } else { 1e-3 };
    let rho = 2.0 * jet.v0.exp() * (jet.tau + eps);
    if rho >= 1.0 {
        return Err(Error::Truncation { achieved: f64::INFINITY });
    }
    Ok(rho)
}

fn check_count(jet: &LogCoefficientJet, j_count: usize) -> Result<usize> {
    let count = 2 * j_count;
    if j_count == 0 || count > jet.derivs.len() {
        return Err(Error::Config(format!(
            "{count} coefficients need a jet of order {}, got {}",
            count - 1,
            jet.order()
        )));
    }
    Ok(count)
}

fn finish(jet: &LogCoefficientJet, coeffs: Vec<C64>, errs: Vec<f64>, log_flags: Vec<bool>, tol: f64) -> Result<ExtensionSeries> {
    let mut trunc = 0.0f64;
    for (a, e) in coeffs.iter().zip(&errs) {
        if *e > tol * a.norm().max(1.0) {
            return Err(Error::Truncation { achieved: *e });
        }
        trunc = trunc.max(*e);
    }
    Ok(ExtensionSeries {
        k: jet.k,
        l: jet.l,
        d: jet.d,
        tau: jet.tau,
        coeffs,
        log_flags,
        trunc_error: trunc,
    })
}

/// Odd `d`: `a_j = e^(-λj v0) sum_(n >= j) D^(n)g(v0) / q_n'(λj)`.
pub fn extension_coeffs(jet: &LogCoefficientJet, j_count: usize, tail_tol: f64) -> Result<ExtensionSeries> {
    if jet.d % 2 == 0 {
        return Err(Error::WrongBranch("odd-d coefficient formula for even d".into()));
    }
    let count = check_count(jet, j_count)?;
    let n = jet.order();
    let lam = jet.exponents.prefix(n)?;
    if multiplicity_table(&lam, 0.0).len() != lam.len() {
        return Err(Error::Invariant("repeated exponent for odd d".into()));
    }
    let rho = geometric_ratio(jet)?;
    let mut coeffs = Vec::with_capacity(count);
    let mut errs = Vec::with_capacity(count);
    for j in 0..count {
        let mut q: C64 = lam[..j].iter().map(|&li| lam[j] - li).product();
        let mut sum = C64::new(0.0, 0.0);
        let mut tail = 0.0f64;
        for m in j..=n {
            if m > j {
                q *= lam[j] - lam[m];
            }
            let floor = ln_factorial(m) - m as f64 * std::f64::consts::LN_2;
            if q.norm().ln() < floor - 1e-9 {
                return Err(Error::Invariant(format!("|q'_{m}(λ{j})| below m!/2^m")));
            }
            let t = jet.derivs[m] / q;
            sum += t;
            tail = tail.max(t.norm() * rho.powi((n + 1 - m) as i32));
        }
        let scale = (-lam[j] * jet.v0).exp();
        coeffs.push(sum * scale);
        errs.push(tail / (1.0 - rho) * scale.norm());
    }
    finish(jet, coeffs, errs, vec![false; count], tail_tol)
}

/// Even `d`: partial fractions of `1/q_n` with double roots where an odd
/// exponent repeats an even one. The odd index of such a pair carries
/// `v e^(λv)`.
pub fn extension_coeffs_even(jet: &LogCoefficientJet, j_count: usize, tail_tol: f64) -> Result<ExtensionSeries> {
    if jet.d % 2 == 1 {
        return Err(Error::WrongBranch("even-d coefficient formula for odd d".into()));
    }
    let count = check_count(jet, j_count)?;
    let n = jet.order();
    let lam = jet.exponents.prefix(n)?;
    let rho = geometric_ratio(jet)?;
    let zero = C64::new(0.0, 0.0);
    // plain and log parts, with tail majorants
    let mut plain = vec![zero; n + 1];
    let mut logp = vec![zero; n + 1];
    let mut plain_tail = vec![0.0f64; n + 1];
    let mut log_tail = vec![0.0f64; n + 1];
    let mut flags = vec![false; n + 1];
    for m in 0..=n {
        let table = multiplicity_table(&lam[..=m], 0.0);
        let pf = partial_fractions(&table).map_err(|e| Error::Invariant(e.to_string()))?;
        let bound = if m >= 2 {
            m as f64 * std::f64::consts::LN_2 - ln_factorial(m - 2)
        } else {
            f64::INFINITY
        };
        let weight = rho.powi((n + 1 - m) as i32);
        for f in &pf {
            for c in [f.simple, f.double] {
                if c.norm() > 0.0 && c.norm().ln() > bound + 1e-9 {
                    return Err(Error::Invariant(format!("partial-fraction coefficient {c} above 2^{m}/({m}-2)!")));
                }
            }
            let mut at = (0..=m).filter(|&i| lam[i] == f.root);
            let first = at.next().expect("root from the prefix");
            let t = jet.derivs[m] * f.simple;
            plain[first] += t;
            plain_tail[first] = plain_tail[first].max(t.norm() * weight);
            if let Some(second) = at.next() {
                flags[second] = true;
                let t = jet.derivs[m] * f.double;
                logp[second] += t;
                log_tail[second] = log_tail[second].max(t.norm() * weight);
            }
        }
    }
    let mut coeffs = vec![zero; count];
    let mut errs = vec![0.0; count];
    for (o, &flag) in flags.iter().enumerate() {
        if !flag {
            continue;
        }
        let p = (0..o).find(|&i| lam[i] == lam[o]).expect("collided pair");
        // (v - v0) e^(λ(v - v0)) = e^(-λ v0) (v e^(λv) - v0 e^(λv))
        plain[p] -= jet.v0 * logp[o];
        plain_tail[p] += jet.v0.abs() * log_tail[o];
    }
    for j in 0..count {
        let scale = (-lam[j] * jet.v0).exp();
        let (s, t) = if flags[j] { (logp[j], log_tail[j]) } else { (plain[j], plain_tail[j]) };
        coeffs[j] = s * scale;
        errs[j] = t / (1.0 - rho) * scale.norm();
    }
    flags.truncate(count);
    finish(jet, coeffs, errs, flags, tail_tol)
}

/// Dispatches on the parity of `d`.
pub fn extension_series(jet: &LogCoefficientJet, j_count: usize, tail_tol: f64) -> Result<ExtensionSeries> {
    if jet.d % 2 == 1 {
        extension_coeffs(jet, j_count, tail_tol)
    } else {
        extension_coeffs_even(jet, j_count, tail_tol)
    }
}

/// `sum_j a_j z^λj`, with `Log z` on flagged terms.
pub fn eval_fkl(series: &ExtensionSeries, z: C64) -> Result<SeriesValue> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("z = 0".into()));
    }
    if series.d % 2 == 0 && on_branch_cut(z) {
        return Err(Error::Domain(format!("z = {z} on the branch cut")));
    }
    let log_z = z.ln();
    let mut value = C64::new(0.0, 0.0);
    let mut mass = 0.0;
    for (j, (a, &flag)) in series.coeffs.iter().zip(&series.log_flags).enumerate() {
        let mut basis = z.powi(series.exponent(j) as i32);
        if flag {
            basis *= log_z;
        }
        value += a * basis;
        mass += basis.norm();
    }
    Ok(SeriesValue {
        value,
        tail_estimate: series.trunc_error * mass,
        outside_guaranteed: series.tau > 0.0 && z.norm() >= 0.5 / series.tau,
    })
}

/// A power series in `w = z^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaurentPart {
    pub coeffs: Vec<C64>,
    pub log_flags: Vec<bool>,
    /// Root-test radius in `z`; infinite when the coefficients vanish fast.
    pub radius: f64,
}

/// `f_(k,l)(z) = z^k f1(z^2) + z^(2-k-d) f2(z^2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaurentSplit {
    pub k: usize,
    pub l: usize,
    pub d: usize,
    pub f1: LaurentPart,
    pub f2: LaurentPart,
}

impl LaurentSplit {
    /// Both radii at least `(1 - slack)/(2τ)`, or infinite for `τ = 0`.
    pub fn meets_guarantee(&self, tau: f64, slack: f64) -> bool {
        let need = if tau > 0.0 { (1.0 - slack) / (2.0 * tau) } else { f64::INFINITY };
        self.f1.radius >= need && self.f2.radius >= need
    }
}

const NOISE_FLOOR: f64 = 1e-14;

fn part_radius(coeffs: &[C64], floor: f64) -> f64 {
    let samples: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, a)| a.norm() > floor)
        .map(|(j, a)| (j, a.norm().powf(0.5 / j as f64)))
        .collect();
    let rate = windowed_rate(&samples, coeffs.len());
    if rate == 0.0 {
        f64::INFINITY
    } else {
        1.0 / rate
    }
}

pub fn laurent_split(series: &ExtensionSeries) -> LaurentSplit {
    let floor = NOISE_FLOOR * series.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let part = |offset: usize| {
        let coeffs: Vec<C64> = series.coeffs.iter().skip(offset).step_by(2).copied().collect();
        let log_flags = series.log_flags.iter().skip(offset).step_by(2).copied().collect();
        let radius = part_radius(&coeffs, floor);
        LaurentPart {
            coeffs,
            log_flags,
            radius,
        }
    };
    LaurentSplit {
        k: series.k,
        l: series.l,
        d: series.d,
        f1: part(0),
        f2: part(1),
    }
}

/// One row of the coefficient dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRecord {
    pub k: usize,
    pub l: usize,
    pub j: usize,
    pub re: f64,
    pub im: f64,
    pub log_flag: bool,
}

/// The assembled extension `F = f1 + q^((2-d)/2) f2` on the Lie annulus.
#[derive(Debug, Clone)]
pub struct AnnularExtension {
    pub d: usize,
    pub r0: f64,
    pub r1: f64,
    pub tau: f64,
    pub series: Vec<ExtensionSeries>,
    basis: HarmonicBasis,
}

impl AnnularExtension {
    pub fn build(model: &AnnularModel, opts: &ExtensionOptions) -> Result<Self> {
        opts.validate()?;
        let grid = ProjectionGrid::new(model.d, opts.k_max, opts.band)?;
        let v0 = opts.v0.unwrap_or(0.5 * (model.r0.ln() + model.r1.ln()));
        let series = log_jets(model, &grid, v0, opts.n)?
            .iter()
            .map(|jet| extension_series(jet, opts.j, opts.tail_tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            d: model.d,
            r0: model.r0,
            r1: model.r1,
            tau: model.tau_claimed,
            series,
            basis: grid.basis,
        })
    }

    /// Rebuilds an extension from dumped coefficients.
    pub fn from_records(d: usize, r0: f64, r1: f64, tau: f64, records: &[CoefficientRecord]) -> Result<Self> {
        let k_max = records.iter().map(|r| r.k).max().unwrap_or(0);
        let count = records.iter().map(|r| r.j + 1).max().unwrap_or(0).div_ceil(2) * 2;
        let basis = HarmonicBasis::new(d, k_max)?;
        let mut series: Vec<ExtensionSeries> = basis
            .indices()
            .into_iter()
            .map(|(k, l)| ExtensionSeries {
                k,
                l,
                d,
                tau,
                coeffs: vec![C64::new(0.0, 0.0); count],
                log_flags: vec![false; count],
                trunc_error: 0.0,
            })
            .collect();
        for r in records {
            let s = series
                .iter_mut()
                .find(|s| (s.k, s.l) == (r.k, r.l))
                .ok_or_else(|| Error::InvalidInput(format!("no harmonic ({}, {}) in d = {d}", r.k, r.l)))?;
            if r.log_flag && d % 2 == 1 {
                return Err(Error::InvalidInput("log terms only occur for even d".into()));
            }
            s.coeffs[r.j] = C64::new(r.re, r.im);
            s.log_flags[r.j] = r.log_flag;
        }
        if !(r0 > 0.0 && r0 < r1) || !(tau >= 0.0) {
            return Err(Error::InvalidInput(format!("annulus ({r0}, {r1}), tau = {tau}")));
        }
        Ok(Self {
            d,
            r0,
            r1,
            tau,
            series,
            basis,
        })
    }

    /// Outer radius of the region where the extension is claimed.
    pub fn outer_radius(&self) -> f64 {
        if self.tau > 0.0 {
            self.r1.min(0.5 / self.tau)
        } else {
            self.r1
        }
    }

    pub fn records(&self) -> Vec<CoefficientRecord> {
        let mut out = Vec::new();
        for s in &self.series {
            for (j, (a, &log_flag)) in s.coeffs.iter().zip(&s.log_flags).enumerate() {
                out.push(CoefficientRecord {
                    k: s.k,
                    l: s.l,
                    j,
                    re: a.re,
                    im: a.im,
                    log_flag,
                });
            }
        }
        out
    }

    pub fn series_for(&self, k: usize, l: usize) -> Option<&ExtensionSeries> {
        self.series.iter().find(|s| (s.k, s.l) == (k, l))
    }

    /// `F(z)` for `z` in the Lie annulus minus `q^(-1)((-inf, 0])`.
    pub fn eval(&self, z: &[C64]) -> Result<C64> {
        if z.len() != self.d {
            return Err(Error::InvalidInput(format!("point of dimension {} for d = {}", z.len(), self.d)));
        }
        let p = lie_point(z);
        let outer = self.outer_radius();
        if let Some(constraint) = lie_annulus_violation(&p, self.r0, outer, true) {
            return Err(Error::LieDomain {
                constraint,
                detail: format!(
                    "L- = {}, L+ = {}, q = {} against ({}, {})",
                    p.l_minus, p.l_plus, p.q, self.r0, outer
                ),
            });
        }
        let q = p.q;
        let half_log_q = 0.5 * q.ln();
        let mut f1 = C64::new(0.0, 0.0);
        let mut f2 = C64::new(0.0, 0.0);
        for s in &self.series {
            let y = self.basis.eval_complex(s.k, s.l, z)?;
            let mut qj = C64::new(1.0, 0.0);
            let mut even = C64::new(0.0, 0.0);
            for a in s.coeffs.iter().step_by(2) {
                even += a * qj;
                qj *= q;
            }
            let mut odd = C64::new(0.0, 0.0);
            for (i, (a, &flag)) in s.coeffs.iter().zip(&s.log_flags).skip(1).step_by(2).enumerate() {
                let mut t = a * q.powi(i as i32 - s.k as i32);
                if flag {
                    t *= half_log_q;
                }
                odd += t;
            }
            f1 += even * y;
            f2 += odd * y;
        }
        let weight = if self.d % 2 == 1 {
            q.powf((2.0 - self.d as f64) / 2.0)
        } else {
            C64::new(1.0, 0.0)
        };
        Ok(f1 + weight * f2)
    }
}

/// Builds the extension with default truncations except `K_max` and `J`,
/// then evaluates it at `z`.
pub fn eval_extension(model: &AnnularModel, z: &[C64], k_max: usize, j: usize) -> Result<C64> {
    let defaults = ExtensionOptions::default();
    let opts = ExtensionOptions {
        k_max,
        j,
        n: defaults.n.max(2 * j - 1),
        band: defaults.band.max(k_max),
        ..defaults
    };
    AnnularExtension::build(model, &opts)?.eval(z)
}
