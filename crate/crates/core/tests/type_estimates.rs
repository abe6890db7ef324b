use polyharm::annular_models::{power_laplacian_coeff, AnnularModel, Family, HarmonicTerm};

fn non_increasing(t: &[f64]) -> bool {
    t.windows(2).all(|w| w[1] <= w[0])
}

#[test]
fn finite_type_families_decay() {
    let terms = vec![HarmonicTerm { k: 2, l: 3, alpha: 0.4, beta: -0.3 }];
    let h = AnnularModel::new(Family::Harmonic { terms, log_coeff: 0.0 }, 3, 0.5, 2.5).unwrap();
    let t = h.estimate_type(1.0, 2.0, 30).unwrap();
    assert!(t.iter().all(|&x| x == 0.0));

    let a = [0.6, -0.8, 0.0];
    let e = AnnularModel::new(Family::Exponential { a: a.to_vec() }, 3, 0.5, 2.5).unwrap();
    let t = e.estimate_type(1.0, 2.0, 30).unwrap();
    assert!(non_increasing(&t) && t[29] < 0.25);
    // |Δ^p e^(a.x)| = |a|^(2p) e^(a.x) <= e^(2|a|) on |x| <= 2
    for (i, &tp) in t.iter().enumerate() {
        let p = i + 1;
        let ln_fact: f64 = (2..=2 * p).map(|j| (j as f64).ln()).sum();
        assert!(tp <= ((2.0 - ln_fact) / (2 * p) as f64).exp() * (1.0 + 1e-12));
    }
}

#[test]
fn biharmonic_power_has_zero_type() {
    // |x| in R^3 is biharmonic
    assert_eq!(power_laplacian_coeff(0.5, 2, 0, 3), 0.0);
    let p = AnnularModel::new(Family::Power { alpha: 0.5, k: 0, l: 1 }, 3, 0.5, 2.5).unwrap();
    let t = p.estimate_type(1.0, 2.0, 30).unwrap();
    assert!(t[0] > 0.0);
    assert!(t[1..].iter().all(|&x| x == 0.0));
}

#[test]
fn infinite_order_power_approaches_inner_radius() {
    let p = AnnularModel::new(Family::Power { alpha: -0.25, k: 0, l: 1 }, 3, 0.5, 2.5).unwrap();
    let t = p.estimate_type(1.0, 2.0, 30).unwrap();
    assert!((t[29] - 1.0).abs() <= 0.15, "{}", t[29]);
    assert!(t[29] > t[9] && t[9] > t[4]);
}
