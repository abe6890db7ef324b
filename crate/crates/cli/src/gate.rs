//! The acceptance gate run by `polyharm verify`: twelve numbered criteria,
//! each a pass/fail with a short detail string, plus the witness reports
//! behind criterion 11. Corpora are drawn from fixed seeds, so the report is
//! reproducible byte for byte.

use polyharm::annular_models::{power_laplacian_coeff, AnnularModel, Family, HarmonicTerm};
use polyharm::extension_engine::{
    extension_coeffs_even, log_jet, AnnularExtension, ExtensionOptions,
};
use polyharm::operator_core::{
    bound_fundamental, fundamental_taylor_coeffs, multiplicity_table, normalized_root, partial_fractions,
    taylor_expand, taylor_remainder, BoundMode, ClosedForm, Differentiable, ExpPolynomial, ExpTerm,
    ExponentSequence, FundamentalFunction, Strategy,
};
use polyharm::spherical::{flc, lie_annulus_contains, lie_point, parseval_check, ProjectionGrid};
use polyharm::verify_suite::{
    check_even_to_odd, check_odd_derivative_bound, exp_ratio_sweep, mean_value_point, rolle_point, WitnessReport,
};
use polyharm::{Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::{LN_2, PI};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(1.0)
}

fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |acc, i| acc * i as f64)
}

fn term(k: usize, l: usize, alpha: f64, beta: f64) -> HarmonicTerm {
    HarmonicTerm { k, l, alpha, beta }
}

fn harmonic(d: usize, terms: Vec<HarmonicTerm>, log_coeff: f64) -> Result<AnnularModel> {
    AnnularModel::new(Family::Harmonic { terms, log_coeff }, d, 0.5, 2.0)
}

fn unit_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Exponents with `|λ| <= 4`; every third draw is real and every fourth
/// repeats one entry.
fn random_lambdas(rng: &mut ChaCha8Rng, i: usize, max_n: usize) -> Vec<C64> {
    let n = rng.gen_range(1..=max_n);
    let real = i % 3 == 0;
    let mut v: Vec<C64> = (0..=n)
        .map(|_| {
            let r = rng.gen_range(0.0..4.0);
            if real {
                c(if rng.gen_bool(0.5) { r } else { -r })
            } else {
                C64::from_polar(r, rng.gen_range(0.0..2.0 * PI))
            }
        })
        .collect();
    if i % 4 == 1 && n >= 2 {
        v[n] = v[0];
    }
    v
}

fn record(id: u32, title: &str, outcome: Result<(bool, String)>) -> Criterion {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    Criterion {
        id,
        title: title.into(),
        passed,
        detail,
    }
}

fn fundamental_agreement() -> Result<(bool, String)> {
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let l = random_lambdas(&mut r, i, 8);
        let phi = FundamentalFunction::new(l)?;
        let closed = phi.closed_form() != ClosedForm::Unavailable;
        for _ in 0..20 {
            let z = C64::from_polar(r.gen_range(0.0..2.0), r.gen_range(0.0..2.0 * PI));
            let s = phi.eval_with(z, Strategy::Series)?;
            let k = phi.eval_with(z, Strategy::Contour)?;
            worst = worst.max(rel(s, k));
            if closed {
                let f = phi.eval_with(z, Strategy::ClosedForm)?;
                worst = worst.max(rel(s, f)).max(rel(k, f));
            }
        }
    }
    Ok((worst <= 1e-9, format!("max pairwise deviation {worst:.3e}")))
}

fn cauchy_data() -> Result<(bool, String)> {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    let mut exact = true;
    for i in 0..50 {
        let l = random_lambdas(&mut r, i, 12);
        let n = l.len() - 1;
        let t = fundamental_taylor_coeffs(&l, n + 1)?;
        exact &= t[..n].iter().all(|x| *x == c(0.0)) && t[n] == c(1.0);
        let s: C64 = l.iter().sum();
        worst = worst.max((t[n + 1] - s).norm() / (1.0 + s.norm()));
    }
    Ok((
        exact && worst <= 1e-12,
        format!("leading data exact: {exact}; first moment deviation {worst:.3e}"),
    ))
}

fn ln2_example() -> Result<(bool, String)> {
    let one = ExpPolynomial::constant(1.0);
    let seq = ExponentSequence::affine(c(1.0), c(1.0));
    let s = taylor_expand(&one, &seq, 0.0, 40)?;
    let exact = (0..=12).all(|n| {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        s.coeffs[n] == c(sign * factorial(n))
    });
    let radius = s.radius.unwrap_or(f64::NAN);
    let radius_ok = (radius / LN_2 - 1.0).abs() <= 0.02;
    let err = (s.partial_sum(c(0.5), 40)? - 1.0).norm();
    let mags: Vec<f64> = s.terms(c(0.8), 40)?.iter().map(|t| t.norm()).collect();
    let growing = mags[20..].windows(2).all(|w| w[1] >= w[0]);
    Ok((
        exact && radius_ok && err <= 1e-6 && growing,
        format!("coefficients exact: {exact}; radius {radius:.6}; |s_40(0.5) - 1| = {err:.3e}; terms at 0.8 non-decreasing: {growing}"),
    ))
}

fn taylor_identity() -> Result<(bool, String)> {
    let seq = ExponentSequence::explicit_real(&[0.5, -1.0, 1.5, 0.0, 2.0, -0.5, 1.0, 0.25])?;
    let h3 = harmonic(3, vec![term(0, 1, 1.0, 0.2), term(2, 3, 0.4, -0.3)], 0.0)?;
    let ex = AnnularModel::new(Family::Exponential { a: vec![0.6, -0.8, 0.0] }, 3, 0.5, 2.0)?;
    let theta = [0.48, 0.6, 0.64];
    let handles: Vec<(Box<dyn Differentiable>, f64, f64)> = vec![
        (Box::new(ExpPolynomial::exponential(c(1.0), c(1.0))), 0.0, 0.8),
        (Box::new(h3.radial_section(&theta)?), 1.0, 1.4),
        (Box::new(ex.radial_section(&theta)?), 1.0, 1.4),
    ];
    let mut worst = 0.0f64;
    for (f, x0, x) in &handles {
        let s = taylor_expand(f.as_ref(), &seq, *x0, 7)?;
        let fx = f.value(*x)?;
        for m in 0..=6 {
            let rm = taylor_remainder(f.as_ref(), &seq, *x0, m, *x)?;
            worst = worst.max((fx - s.partial_sum(c(*x), m)? - rm).norm());
        }
    }
    Ok((worst <= 1e-8, format!("max |f - s_m - R_m| = {worst:.3e}")))
}

fn bounds_suite() -> Result<(bool, String)> {
    let mut r = rng(5);
    let mut violations = Vec::new();
    for i in 0..50 {
        let l = random_lambdas(&mut r, i, 8);
        let phi = FundamentalFunction::new(l.clone())?;
        for _ in 0..20 {
            let rad = r.gen_range(0.0..2.0);
            let v = phi.eval(C64::from_polar(rad, r.gen_range(0.0..2.0 * PI)))?.norm();
            if v > bound_fundamental(&l, rad, BoundMode::MaxBound)? * (1.0 + 1e-12) {
                violations.push(format!("max bound, draw {i}"));
            }
        }
    }
    for i in 0..30 {
        let offset = C64::from_polar(r.gen_range(0.0..1.0), r.gen_range(0.0..2.0 * PI));
        let step = C64::from_polar(r.gen_range(0.2..1.0), r.gen_range(0.0..2.0 * PI));
        let mode = BoundMode::LinearGrowth { alpha: offset.norm(), beta: step.norm(), eps: 0.1 };
        let n = 1 + i % 8;
        let l: Vec<C64> = (0..=n).map(|j| offset + step * j as f64).collect();
        let phi = FundamentalFunction::new(l.clone())?;
        for _ in 0..10 {
            let rad = r.gen_range(0.0..2.0);
            let v = phi.eval(C64::from_polar(rad, r.gen_range(0.0..2.0 * PI)))?.norm();
            if v > bound_fundamental(&l, rad, mode)? * (1.0 + 1e-12) {
                violations.push(format!("linear-growth bound, draw {i}"));
            }
        }
    }
    // equality for a constant positive exponent on the positive axis
    for (m, x, n) in [(1.5, 0.7, 4usize), (3.0, 1.9, 7)] {
        let l = vec![c(m); n + 1];
        let v = FundamentalFunction::new(l.clone())?.eval(c(x))?.re;
        let b = bound_fundamental(&l, x, BoundMode::MaxBound)?;
        if (v - b).abs() > 1e-12 * b {
            violations.push(format!("equality case m = {m}"));
        }
    }
    for i in 0..40 {
        let n = rng_len(&mut r);
        let pairs: Vec<(f64, f64)> = (0..n).map(|_| (r.gen_range(0.0..3.0), r.gen_range(0.0..3.0))).collect();
        let lam: Vec<C64> = pairs.iter().map(|p| c(p.0.min(p.1))).collect();
        let mu: Vec<C64> = pairs.iter().map(|p| c(p.0.max(p.1))).collect();
        let pl = FundamentalFunction::new(lam)?;
        let pm = FundamentalFunction::new(mu)?;
        let x = r.gen_range(0.01..2.0);
        if !(pl.eval(c(x))?.re > 0.0) {
            violations.push(format!("positivity, draw {i}"));
        }
        let lhs = pl.eval(C64::from_polar(x, r.gen_range(0.0..2.0 * PI)))?.norm();
        if lhs > pm.eval(c(x))?.re * (1.0 + 1e-12) {
            violations.push(format!("monotonicity, draw {i}"));
        }
    }
    for k in 0..=12u32 {
        let lam = ExponentSequence::harmonic(k, 3)?.prefix(14)?;
        for n in 1..=14 {
            for j in 0..=n {
                let q: C64 = (0..=n).filter(|&i| i != j).map(|i| lam[j] - lam[i]).product();
                if q.norm() < factorial(n) / 2f64.powi(n as i32) * (1.0 - 1e-12) {
                    violations.push(format!("q' bound k = {k}, n = {n}"));
                }
            }
        }
    }
    for k in 0..=12u32 {
        let lam = ExponentSequence::harmonic(k, 2)?.prefix(14)?;
        for n in 2..=14 {
            let bound = 2f64.powi(n as i32) / factorial(n - 2);
            for f in partial_fractions(&multiplicity_table(&lam[..=n], 0.0))? {
                if f.simple.norm().max(f.double.norm()) > bound * (1.0 + 1e-12) {
                    violations.push(format!("d_j bound k = {k}, n = {n}"));
                }
            }
        }
    }
    let detail = if violations.is_empty() {
        "no violations".to_string()
    } else {
        format!("{} violations, first: {}", violations.len(), violations[0])
    };
    Ok((violations.is_empty(), detail))
}

fn rng_len(r: &mut ChaCha8Rng) -> usize {
    r.gen_range(1..8)
}

fn flc_exactness() -> Result<(bool, String)> {
    let grid2 = ProjectionGrid::new(2, 12, 24)?;
    let mut log_err = 0.0f64;
    for r in [0.6, 1.0, 1.5, 1.9] {
        let v = flc(|x| c(x[0].hypot(x[1]).ln()), &grid2, 0, 1, r, (0.5, 2.0))?;
        log_err = log_err.max((v - (2.0 * PI).sqrt() * r.ln()).norm());
    }
    let h3 = harmonic(3, vec![term(0, 1, 1.0, 0.2), term(2, 3, 0.4, -0.3), term(4, 5, 0.1, 0.05)], 0.0)?;
    let h2 = harmonic(2, vec![term(0, 1, 0.7, 0.0), term(1, 2, 0.6, -0.5), term(3, 1, 0.2, 0.1)], 0.8)?;
    let grid3 = ProjectionGrid::new(3, 12, 24)?;
    let mut prof_err = 0.0f64;
    let mut pars_err = 0.0f64;
    for (m, grid) in [(&h3, &grid3), (&h2, &grid2)] {
        let f = |x: &[f64]| m.value(x).unwrap_or(C64::new(f64::NAN, 0.0));
        for r in [0.6, 1.0, 1.5, 1.9] {
            for &(k, l) in grid.indices() {
                let want = m.radial_profile(k, l).map_or(c(0.0), |p| p.value(r));
                prof_err = prof_err.max((flc(f, grid, k, l, r, (0.5, 2.0))? - want).norm());
            }
            let (lhs, rhs) = parseval_check(f, grid, r, (0.5, 2.0))?;
            pars_err = pars_err.max((lhs - rhs).abs() / lhs.max(1.0));
        }
    }
    Ok((
        log_err <= 1e-10 && prof_err <= 1e-10 && pars_err <= 1e-8,
        format!("log example {log_err:.3e}; profiles {prof_err:.3e}; Parseval {pars_err:.3e}"),
    ))
}

fn restriction_identity() -> Result<(bool, String)> {
    let terms = vec![
        term(0, 1, 1.0, 0.2),
        term(1, 2, 0.5, -0.3),
        term(2, 3, 0.4, -0.3),
        term(3, 1, -0.2, 0.1),
        term(4, 5, 0.1, 0.05),
    ];
    let m = harmonic(3, terms.clone(), 0.0)?;
    let ext = AnnularExtension::build(&m, &ExtensionOptions { k_max: 12, j: 20, ..Default::default() })?;
    let mut r = rng(7);
    let mut real_err = 0.0f64;
    for _ in 0..50 {
        let rad = r.gen_range(0.55..1.95);
        let x: Vec<f64> = unit_vector(&mut r, 3).iter().map(|u| u * rad).collect();
        let z: Vec<C64> = x.iter().map(|&v| c(v)).collect();
        real_err = real_err.max((ext.eval(&z)? - m.value(&x)?).norm());
    }
    let mut coeff_err = 0.0f64;
    for s in &ext.series {
        let t = terms.iter().find(|t| (t.k, t.l) == (s.k, s.l));
        for (j, a) in s.coeffs.iter().enumerate() {
            let want = match (t, j) {
                (Some(t), 0) => t.alpha,
                (Some(t), 1) => t.beta,
                _ => 0.0,
            };
            coeff_err = coeff_err.max((a - want).norm());
        }
    }
    let mut conj_err = 0.0f64;
    let mut oracle_err = 0.0f64;
    let mut found = 0;
    while found < 20 {
        let rad = r.gen_range(0.8..1.5);
        let x = unit_vector(&mut r, 3);
        let y = unit_vector(&mut r, 3);
        let h = r.gen_range(0.0..0.2);
        let z: Vec<C64> = x.iter().zip(&y).map(|(a, b)| C64::new(a * rad, b * h)).collect();
        if !lie_annulus_contains(&lie_point(&z), m.r0, ext.outer_radius(), true) {
            continue;
        }
        found += 1;
        let f = ext.eval(&z)?;
        let zc: Vec<C64> = z.iter().map(|v| v.conj()).collect();
        conj_err = conj_err.max((ext.eval(&zc)? - f.conj()).norm());
        oracle_err = oracle_err.max((f - m.closed_form_continuation(&z)?).norm());
    }
    Ok((
        real_err <= 1e-6 && coeff_err <= 1e-6 && conj_err <= 1e-8 && oracle_err <= 1e-5,
        format!(
            "real points {real_err:.3e}; coefficients {coeff_err:.3e}; conjugation {conj_err:.3e}; closed form {oracle_err:.3e}"
        ),
    ))
}

fn even_branch() -> Result<(bool, String)> {
    let (a0, b0) = (1.5, -0.7);
    let m = harmonic(2, vec![term(0, 1, a0, 0.0), term(2, 2, 0.3, 0.2)], b0)?;
    let mut err = 0.0f64;
    for v0 in [0.0, 0.2] {
        let s = extension_coeffs_even(&log_jet(&m, 0, 1, v0, 40)?, 20, 1e-8)?;
        err = err.max((s.coeffs[0] - a0).norm()).max((s.coeffs[1] - b0).norm());
        err = s.coeffs[2..].iter().fold(err, |e, a| e.max(a.norm()));
    }
    let pf = partial_fractions(&multiplicity_table(&[c(0.0), c(2.0), c(2.0)], 0.0))?;
    let fixture = pf.len() == 2 && pf[0].simple == c(0.25) && pf[1].simple == c(-0.25) && pf[1].double == c(0.5);
    Ok((
        err <= 1e-6 && fixture,
        format!("log-branch round trip {err:.3e}; fixture exact: {fixture}"),
    ))
}

fn v0_independence() -> Result<(bool, String)> {
    let models = [
        (
            "eigen",
            AnnularModel::new(Family::Eigen { lambda: C64::new(-1.5, 0.4), k: 2, l: 1 }, 3, 0.5, 2.0)?,
            3,
        ),
        (
            "exponential",
            AnnularModel::new(Family::Exponential { a: vec![0.6, -0.8, 0.0] }, 3, 0.5, 2.0)?,
            6,
        ),
        ("log", harmonic(2, vec![term(0, 1, 1.5, 0.0), term(2, 2, 0.3, 0.2)], -0.7)?, 4),
    ];
    let mut worst = 0.0f64;
    for (_, m, k_max) in &models {
        let build = |v0: f64| {
            AnnularExtension::build(m, &ExtensionOptions { k_max: *k_max, v0: Some(v0), ..Default::default() })
        };
        let a = build(0.1)?;
        let b = build(0.3)?;
        for (x, y) in a.records().iter().zip(b.records()) {
            worst = worst.max((C64::new(x.re, x.im) - C64::new(y.re, y.im)).norm());
        }
    }
    Ok((worst <= 1e-7, format!("max coefficient difference {worst:.3e} (eigen, exponential, d = 2 log)")))
}

fn non_increasing(t: &[f64]) -> bool {
    t.windows(2).all(|w| w[1] <= w[0])
}

fn type_trends() -> Result<(bool, String)> {
    let (r0, r1, a, b) = (0.5, 2.5, 1.0, 2.0);
    let h = AnnularModel::new(
        Family::Harmonic { terms: vec![term(0, 1, 1.0, 0.2), term(2, 3, 0.4, -0.3)], log_coeff: 0.0 },
        3,
        r0,
        r1,
    )?;
    let e = AnnularModel::new(Family::Exponential { a: vec![0.6, -0.8, 0.0] }, 3, r0, r1)?;
    let p = AnnularModel::new(Family::Power { alpha: 0.5, k: 0, l: 1 }, 3, r0, r1)?;
    let th = h.estimate_type(a, b, 30)?;
    let te = e.estimate_type(a, b, 30)?;
    let tp = p.estimate_type(a, b, 30)?;
    let finite_ok = non_increasing(&th) && th[29] < 0.25 && non_increasing(&te) && te[29] < 0.25;
    let power_ok = (tp[29] - 1.0).abs() <= 0.15 && tp.windows(2).all(|w| w[1] >= w[0]) && tp[29] > tp[0];
    Ok((
        finite_ok && power_ok,
        format!(
            "harmonic t_30 = {:.3e}, exponential t_30 = {:.4}, power (alpha = 0.5) t_30 = {:.4}",
            th[29], te[29], tp[29]
        ),
    ))
}

/// `scale * sin(ωx) e^(μx)`.
fn weighted_sine(omega: f64, mu: f64, scale: f64) -> ExpPolynomial {
    let half = C64::new(0.0, -0.5 * scale);
    ExpPolynomial::new(vec![
        ExpTerm { coeff: half, power: 0, rate: C64::new(mu, omega) },
        ExpTerm { coeff: -half, power: 0, rate: C64::new(mu, -omega) },
    ])
}

/// Rolle, mean-value, odd-derivative and envelope reports.
fn witness_reports() -> Result<Vec<WitnessReport>> {
    let mut r = rng(11);
    let mut out = Vec::new();
    for _ in 0..40 {
        let (omega, mu, scale) = (r.gen_range(1.0..8.0), r.gen_range(-2.0..2.0), r.gen_range(0.2..3.0));
        out.push(rolle_point(&weighted_sine(omega, mu, scale), mu, 0.0, PI / omega)?);
    }
    for _ in 0..40 {
        let f = ExpPolynomial::new(vec![
            ExpTerm { coeff: c(1.0), power: 0, rate: c(r.gen_range(-2.0..2.0)) },
            ExpTerm { coeff: c(0.5), power: 2, rate: c(0.0) },
        ]);
        let mut lambda: f64 = r.gen_range(-2.0..2.0);
        if lambda.abs() < 1e-3 {
            lambda = 1e-3;
        }
        out.push(mean_value_point(&f, lambda, 0.0, r.gen_range(0.2..2.0))?);
    }
    for _ in 0..40 {
        let f = ExpPolynomial::new(
            (0..4)
                .map(|p| ExpTerm { coeff: c(r.gen_range(-2.0..2.0)), power: p, rate: c(0.0) })
                .collect(),
        );
        let (l0, l1, a) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0), r.gen_range(-1.0..1.0));
        out.push(check_odd_derivative_bound(&f, l0, l1, a, a + r.gen_range(0.1..2.0))?);
    }
    out.push(exp_ratio_sweep(50));
    let v0 = 0.8f64.ln();
    for k in 0..=6usize {
        let mut models = vec![
            (harmonic(2, vec![term(k, 1, 1.0, if k == 0 { 0.0 } else { 0.5 })], if k == 0 { 0.5 } else { 0.0 })?, 2),
            (harmonic(3, vec![term(k, 1, 1.0, 0.5)], 0.0)?, 3),
            (AnnularModel::new(Family::Eigen { lambda: C64::new(-1.5, 0.4), k, l: 1 }, 3, 0.5, 2.0)?, 3),
            (AnnularModel::new(Family::Power { alpha: 0.25, k, l: 1 }, 3, 0.5, 2.0)?, 3),
        ];
        for (m, d) in models.drain(..) {
            let g = m
                .radial_profile(k, 1)
                .expect("closed-form profile")
                .log_section();
            let seq = ExponentSequence::harmonic(k as u32, d as u32)?;
            for delta in [0.1, 0.25] {
                out.push(check_even_to_odd(&g, &seq, v0, delta, 10)?.0);
            }
        }
    }
    Ok(out)
}

/// σ fitted from a power-function jet against `e^(v0)` times the scaled type
/// `(|c_n| r^(2α+k-2n)/(2n)!)^(1/2n)` at `r = e^(v0)`.
fn power_sigma() -> Result<(f64, f64)> {
    let (alpha, k, d, n) = (0.25, 0usize, 3usize, 10usize);
    let v0 = 1.5f64.ln();
    let m = AnnularModel::new(Family::Power { alpha, k, l: 1 }, d, 1.0, 2.0)?;
    let g = m.radial_profile(k, 1).expect("power profile").log_section();
    let seq = ExponentSequence::harmonic(k as u32, d as u32)?;
    let (_, fit) = check_even_to_odd(&g, &seq, v0, 0.1, n)?;
    let r = v0.exp();
    let cn = power_laplacian_coeff(alpha, n, k, d).abs();
    let mu = 2.0 * alpha + k as f64 - 2.0 * n as f64;
    let t = ((cn.ln() + mu * r.ln() - (2..=2 * n).map(|i| (i as f64).ln()).sum::<f64>()) / (2 * n) as f64).exp();
    Ok((fit.sigma, r * t))
}

fn normalized_root_trend() -> Result<(bool, String)> {
    let mut r = rng(13);
    let (mut dev30, mut dev60) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let l: Vec<C64> = (0..=60).map(|_| c(r.gen_range(-1.0..1.0))).collect();
        for x in [0.5, 1.0, 2.0] {
            dev30 = dev30.max((normalized_root(&l[..=30], x)? / x - 1.0).abs());
            dev60 = dev60.max((normalized_root(&l, x)? / x - 1.0).abs());
        }
    }
    Ok((dev60 <= 0.1 && dev60 < dev30, format!("max relative deviation n = 30: {dev30:.4}, n = 60: {dev60:.4}")))
}

fn appendix(reports: &[WitnessReport]) -> Result<(bool, String)> {
    let failed: Vec<&WitnessReport> = reports.iter().filter(|w| !w.passed).collect();
    let (root_ok, root_detail) = normalized_root_trend()?;
    let (sigma, scaled) = power_sigma()?;
    let sigma_ok = (sigma / scaled - 1.0).abs() <= 0.1;
    let mut detail = format!(
        "{} witnesses, {} failed; {root_detail}; power sigma {sigma:.4} vs {scaled:.4}",
        reports.len(),
        failed.len()
    );
    if let Some(w) = failed.first() {
        detail.push_str(&format!("; first failure {} {}", w.theorem_id, w.inputs));
    }
    Ok((failed.is_empty() && root_ok && sigma_ok, detail))
}

/// Criteria 1 to 12 and the witness reports. Criterion 12 records whether
/// the others all passed; byte stability of the CLI output is checked by
/// running the binary twice.
pub fn evaluate() -> (Vec<Criterion>, Vec<WitnessReport>) {
    let reports = witness_reports();
    let mut out = vec![
        record(1, "fundamental function strategies agree", fundamental_agreement()),
        record(2, "Cauchy data and first moment", cauchy_data()),
        record(3, "ln 2 example", ln2_example()),
        record(4, "Taylor identity with remainder", taylor_identity()),
        record(5, "bounds suite", bounds_suite()),
        record(6, "Fourier-Laplace exactness", flc_exactness()),
        record(7, "extension restriction identity", restriction_identity()),
        record(8, "even-dimension branch", even_branch()),
        record(9, "independence of the expansion point", v0_independence()),
        record(10, "type estimator trends", type_trends()),
        record(
            11,
            "Rolle, mean-value and derivative-bound witnesses",
            reports.as_ref().map_err(|e| e.to_string()).map_or_else(
                |e| Ok((false, format!("error: {e}"))),
                |r| appendix(r),
            ),
        ),
    ];
    let all = out.iter().all(|c| c.passed);
    let failing: Vec<String> = out.iter().filter(|c| !c.passed).map(|c| c.id.to_string()).collect();
    out.push(Criterion {
        id: 12,
        title: "verify gate".into(),
        passed: all,
        detail: if all {
            "all criteria passed".into()
        } else {
            format!("failing: {}", failing.join(", "))
        },
    });
    (out, reports.unwrap_or_default())
}

pub fn report_json(criteria: &[Criterion], witnesses: &[WitnessReport]) -> Value {
    json!({
        "criteria": criteria,
        "witnesses": witnesses,
    })
}
