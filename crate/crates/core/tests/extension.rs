use polyharm::annular_models::{AnnularModel, Family, HarmonicTerm};
use polyharm::extension_engine::{laurent_split, AnnularExtension, CoefficientRecord, ExtensionOptions};
use polyharm::spherical::{lie_annulus_contains, lie_point};
use polyharm::{Error, C64};
use proptest::prelude::*;
use std::sync::OnceLock;

fn term(k: usize, l: usize, alpha: f64, beta: f64) -> HarmonicTerm {
    HarmonicTerm { k, l, alpha, beta }
}

fn model3() -> &'static (AnnularModel, AnnularExtension) {
    static M: OnceLock<(AnnularModel, AnnularExtension)> = OnceLock::new();
    M.get_or_init(|| {
        let terms = vec![term(0, 1, 1.0, 0.2), term(1, 3, 0.5, -0.3), term(3, 2, -0.2, 0.1), term(5, 7, 0.05, 0.02)];
        let m = AnnularModel::new(Family::Harmonic { terms, log_coeff: 0.0 }, 3, 0.5, 2.0).unwrap();
        let ext = AnnularExtension::build(&m, &ExtensionOptions::default()).unwrap();
        (m, ext)
    })
}

fn model2() -> &'static (AnnularModel, AnnularExtension) {
    static M: OnceLock<(AnnularModel, AnnularExtension)> = OnceLock::new();
    M.get_or_init(|| {
        let terms = vec![term(0, 1, 0.4, 0.0), term(1, 2, 0.6, -0.5), term(4, 1, 0.1, 0.03)];
        let m = AnnularModel::new(Family::Harmonic { terms, log_coeff: 0.8 }, 2, 0.5, 2.0).unwrap();
        let ext = AnnularExtension::build(&m, &ExtensionOptions::default()).unwrap();
        (m, ext)
    })
}

#[test]
fn default_truncation_builds_in_both_dimensions() {
    assert_eq!(model3().1.series.len(), 13 * 13);
    assert_eq!(model2().1.series.len(), 25);
    let s = model2().1.series_for(0, 1).unwrap();
    assert!(s.log_flags[1]);
    assert!((s.coeffs[1].re - 0.8).abs() < 1e-8);
}

#[test]
fn harmonic_series_split_into_single_terms() {
    let s = model3().1.series_for(1, 3).unwrap();
    let split = laurent_split(s);
    assert!((split.f1.coeffs[0].re - 0.5).abs() < 1e-8);
    assert!((split.f2.coeffs[0].re + 0.3).abs() < 1e-8);
    assert!(split.meets_guarantee(0.0, 0.0));
}

#[test]
fn dump_is_an_array_of_records() {
    let ext = &model2().1;
    let text = serde_json::to_string(&ext.records()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let first = &v[0];
    for key in ["k", "l", "j", "re", "im", "log_flag"] {
        assert!(first.get(key).is_some(), "{key}");
    }
    let back: Vec<CoefficientRecord> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, ext.records());
}

#[test]
fn cut_points_are_rejected() {
    let ext = &model3().1;
    // q = -0.64 + 0i
    let z = [C64::new(0.0, 0.8), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    assert!(matches!(ext.eval(&z), Err(Error::LieDomain { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn restriction_in_three_dimensions(r in 0.55f64..1.95, th in 0.05f64..3.1, ph in 0.0f64..6.28) {
        let (m, ext) = model3();
        let x = [r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos()];
        let z: Vec<C64> = x.iter().map(|&v| C64::new(v, 0.0)).collect();
        prop_assert!((ext.eval(&z).unwrap() - m.value(&x).unwrap()).norm() < 1e-6);
    }

    #[test]
    fn restriction_in_two_dimensions(r in 0.55f64..1.95, ph in 0.0f64..6.28) {
        let (m, ext) = model2();
        let x = [r * ph.cos(), r * ph.sin()];
        let z: Vec<C64> = x.iter().map(|&v| C64::new(v, 0.0)).collect();
        prop_assert!((ext.eval(&z).unwrap() - m.value(&x).unwrap()).norm() < 1e-6);
    }

    #[test]
    fn complex_points_match_closed_form(
        x in prop::array::uniform3(-1.2f64..1.2),
        y in prop::array::uniform3(-0.15f64..0.15),
    ) {
        let (m, ext) = model3();
        let z: Vec<C64> = x.iter().zip(&y).map(|(a, b)| C64::new(*a, *b)).collect();
        prop_assume!(lie_annulus_contains(&lie_point(&z), m.r0, m.r1, true));
        let got = ext.eval(&z).unwrap();
        let want = m.closed_form_continuation(&z).unwrap();
        prop_assert!((got - want).norm() < 1e-6 * want.norm().max(1.0));
        let zc: Vec<C64> = z.iter().map(|v| v.conj()).collect();
        prop_assert!((ext.eval(&zc).unwrap() - got.conj()).norm() < 1e-8);
    }
}
