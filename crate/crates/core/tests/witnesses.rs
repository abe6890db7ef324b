use polyharm::annular_models::{AnnularModel, Family};
use polyharm::operator_core::{ExpPolynomial, ExpTerm, ExponentSequence};
use polyharm::verify_suite::{check_even_to_odd, exp_ratio_bound, mean_value_point, rolle_point};
use polyharm::C64;
use proptest::prelude::*;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `(x - a)(b - x) e^(λx)`.
fn bump(a: f64, b: f64, lambda: f64) -> ExpPolynomial {
    let r = c(lambda);
    ExpPolynomial::new(vec![
        ExpTerm { coeff: c(-a * b), power: 0, rate: r },
        ExpTerm { coeff: c(a + b), power: 1, rate: r },
        ExpTerm { coeff: c(-1.0), power: 2, rate: r },
    ])
}

#[test]
fn envelope_for_model_jets() {
    let v0 = 0.8f64.ln();
    for k in 0..=6 {
        let m = AnnularModel::new(Family::Eigen { lambda: C64::new(2.0, -0.5), k, l: 1 }, 3, 0.5, 2.0).unwrap();
        let g = m.radial_profile(k, 1).unwrap().log_section();
        let seq = ExponentSequence::harmonic(k as u32, 3).unwrap();
        for delta in [0.1, 0.25] {
            let (r, fit) = check_even_to_odd(&g, &seq, v0, delta, 10).unwrap();
            assert!(r.passed, "k = {k}: {r:?}");
            assert!(fit.max_ratio <= 1.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rolle_point_is_the_midpoint(a in -2.0f64..1.0, len in 0.2f64..2.0, lambda in -2.0f64..2.0) {
        // D_λ f = (a + b - 2x) e^(λx)
        let b = a + len;
        let r = rolle_point(&bump(a, b, lambda), lambda, a, b).unwrap();
        prop_assert!(r.passed);
        prop_assert!((r.witness["xi"].as_f64().unwrap() - 0.5 * (a + b)).abs() < 1e-8);
    }

    #[test]
    fn mean_value_point_for_exponentials(mu in 0.3f64..2.0, lambda in -2.0f64..-0.1, len in 0.2f64..2.0) {
        // D_λ e^(μx) = (μ - λ) e^(μx) is monotone, so ξ = ln(t/(μ - λ))/μ
        let f = ExpPolynomial::exponential(c(1.0), c(mu));
        let r = mean_value_point(&f, lambda, 0.0, len).unwrap();
        prop_assert!(r.passed);
        let t = r.witness["target"].as_f64().unwrap();
        let xi = (t / (mu - lambda)).ln() / mu;
        prop_assert!((r.witness["xi"].as_f64().unwrap() - xi).abs() < 1e-7);
    }

    #[test]
    fn exp_ratio_bound_holds(lambda in -3.0f64..3.0, a in -1.0f64..1.0, h in 1e-3f64..3.0) {
        prop_assume!(lambda.abs() > 1e-6);
        let (lhs, rhs) = exp_ratio_bound(lambda, a, a + h);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }
}
