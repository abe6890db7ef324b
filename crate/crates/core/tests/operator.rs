use polyharm::operator_core::{
    bound_fundamental, check_recursion, taylor_expand, taylor_remainder, BoundMode, ExpPolynomial, ExpTerm,
    ExponentSequence, FundamentalFunction, Strategy as Eval,
};
use polyharm::C64;
use proptest::prelude::*;
use std::f64::consts::E;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn fact(n: usize) -> f64 {
    (2..=n).fold(1.0, |a, i| a * i as f64)
}

#[test]
fn bound_for_one_two_three() {
    let l = [c(1.0), c(2.0), c(3.0)];
    let b = bound_fundamental(&l, 1.0, BoundMode::MaxBound).unwrap();
    assert!((b - E.powi(3) / 2.0).abs() < 1e-12);
    // e^x (e^x - 1)^2 / 2
    let phi = FundamentalFunction::new(l.to_vec()).unwrap();
    let want = E * (E - 1.0).powi(2) / 2.0;
    assert!((phi.eval(c(1.0)).unwrap().re - want).abs() < 1e-12);
    assert!((want - 4.0129).abs() < 1e-4);
}

#[test]
fn constant_expansion_sums_to_one_inside_ln2() {
    let s = taylor_expand(&ExpPolynomial::constant(1.0), &ExponentSequence::affine(c(1.0), c(1.0)), 0.0, 40).unwrap();
    for x in [0.1, 0.3, 0.5] {
        assert!((s.partial_sum(c(x), 40).unwrap() - 1.0).norm() < 1e-6, "x = {x}");
    }
    assert!((s.partial_sum(c(0.8), 40).unwrap() - 1.0).norm() > 1.0);
}

#[test]
fn exp_polynomial_derivatives() {
    // x^2 e^(2x): second derivative (2 + 8x + 4x^2) e^(2x)
    let f = ExpPolynomial::new(vec![ExpTerm { coeff: c(1.0), power: 2, rate: c(2.0) }]);
    let x = 0.3f64;
    let d = f.derivatives_at(c(x), 2);
    assert!((d[2].re - (2.0 + 8.0 * x + 4.0 * x * x) * (2.0 * x).exp()).abs() < 1e-12);
}

fn lambdas() -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..8)
        .prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn zero_exponents_give_monomials(n in 0usize..10, r in 0.0f64..2.0, th in 0.0f64..6.3) {
        let phi = FundamentalFunction::new(vec![c(0.0); n + 1]).unwrap();
        let z = C64::from_polar(r, th);
        let want = z.powu(n as u32) / fact(n);
        prop_assert!((phi.eval(z).unwrap() - want).norm() <= 1e-13 * want.norm().max(1.0));
    }

    #[test]
    fn distinct_roots_match_residue_sum(l in lambdas(), r in 0.0f64..2.0, th in 0.0f64..6.3) {
        // sum_j e^(λj z) / prod_(i != j) (λj - λi), computed here directly
        let min_gap = l.iter().enumerate()
            .flat_map(|(i, a)| l.iter().skip(i + 1).map(move |b| (a - b).norm()))
            .fold(f64::INFINITY, f64::min);
        prop_assume!(min_gap > 0.3);
        let z = C64::from_polar(r, th);
        let want: C64 = l.iter().enumerate().map(|(j, lj)| {
            let q: C64 = l.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, li)| lj - li).product();
            (lj * z).exp() / q
        }).sum();
        let phi = FundamentalFunction::new(l).unwrap();
        let got = phi.eval_with(z, Eval::Series).unwrap();
        prop_assert!((got - want).norm() <= 1e-9 * want.norm().max(1.0));
    }

    #[test]
    fn recursion_holds(l in lambdas(), extra in (-2.0f64..2.0, -2.0f64..2.0), r in 0.0f64..1.5, th in 0.0f64..6.3) {
        let prev = FundamentalFunction::new(l.clone()).unwrap();
        let mut m = l;
        m.push(C64::new(extra.0, extra.1));
        let next = FundamentalFunction::new(m).unwrap();
        let res = check_recursion(&next, &prev, C64::from_polar(r, th), 1e-4).unwrap();
        prop_assert!(res < 1e-5, "{}", res);
    }

    #[test]
    fn linear_growth_bound_dominates(
        off in (-1.0f64..1.0, -1.0f64..1.0),
        step in (0.2f64..1.0, -1.0f64..1.0),
        n in 1usize..9,
        r in 0.0f64..2.0,
        th in 0.0f64..6.3,
    ) {
        let (o, s) = (C64::new(off.0, off.1), C64::new(step.0, step.1));
        let l: Vec<C64> = (0..=n).map(|j| o + s * j as f64).collect();
        let mode = BoundMode::LinearGrowth { alpha: o.norm(), beta: s.norm(), eps: 0.05 };
        let v = FundamentalFunction::new(l.clone()).unwrap().eval(C64::from_polar(r, th)).unwrap().norm();
        prop_assert!(v <= bound_fundamental(&l, r, mode).unwrap() * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn taylor_identity_with_remainder(rate in -1.5f64..1.5, x in 0.05f64..1.0, m in 0usize..6) {
        let f = ExpPolynomial::new(vec![
            ExpTerm { coeff: c(1.0), power: 0, rate: c(rate) },
            ExpTerm { coeff: c(0.3), power: 1, rate: c(-0.5) },
        ]);
        let seq = ExponentSequence::explicit_real(&[0.5, -1.0, 1.5, 0.0, 2.0, -0.5, 1.0]).unwrap();
        let s = taylor_expand(&f, &seq, 0.0, 6).unwrap();
        let rm = taylor_remainder(&f, &seq, 0.0, m, x).unwrap();
        let fx = f.derivatives_at(c(x), 0)[0];
        prop_assert!((fx - s.partial_sum(c(x), m).unwrap() - rm).norm() < 1e-8);
    }
}
