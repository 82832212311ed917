use std::f64::consts::{FRAC_PI_2, PI};

use hgamma::{
    dependence_angle_gap, gnk_expand, independence_check, q_binomial, validate_curve_params,
    FamilySpec, GuardViolation, Verdict,
};
use num_complex::Complex64;
use proptest::prelude::*;

const BAND: f64 = 0.05;

fn grid() -> impl Iterator<Item = f64> {
    (0..200).map(|i| -2.0 + 4.0 * (i as f64 + 0.5) / 200.0)
}

#[test]
fn degree_two_rotation_determinant() {
    let fam = FamilySpec::trig();
    for i in 0..200 {
        let h = -PI + 2.0 * PI * i as f64 / 199.0;
        let det = gnk_expand(&fam, 2, h).det();
        assert!((det - 2.0 * h.cos()).abs() <= 1e-9, "h={h}");
    }
    for k in -2..=1 {
        let h = FRAC_PI_2 + k as f64 * PI;
        assert_eq!(independence_check(&fam, 2, h).unwrap().verdict, Verdict::Dependent);
        for off in [-0.1, 0.1] {
            assert_eq!(independence_check(&fam, 2, h + off).unwrap().verdict, Verdict::Independent);
        }
    }
}

#[test]
fn verdicts_agree_outside_bands() {
    for fam in [FamilySpec::polynomial(), FamilySpec::trig(), FamilySpec::hyperbolic(), FamilySpec::trig_discrete(0.5).unwrap()] {
        for n in 1..=5 {
            for h in grid() {
                let r = independence_check(&fam, n, h).unwrap();
                if r.verdict == Verdict::Independent {
                    continue;
                }
                let gap = dependence_angle_gap(&fam, n, h);
                assert!(
                    matches!(gap, Some(g) if g <= BAND),
                    "{fam} n={n} h={h}: {} with gap {gap:?}",
                    r.verdict
                );
            }
        }
    }
}

#[test]
fn hyperbolic_and_polynomial_never_lose_independence() {
    for fam in [FamilySpec::hyperbolic(), FamilySpec::polynomial(), FamilySpec::hyperbolic_discrete(0.7).unwrap()] {
        for n in 1..=6 {
            for h in grid() {
                assert_eq!(independence_check(&fam, n, h).unwrap().verdict, Verdict::Independent, "{fam} n={n} h={h}");
            }
        }
    }
}

#[test]
fn degree_four_quarter_turn() {
    let r = independence_check(&FamilySpec::trig(), 4, PI / 4.0).unwrap();
    assert_eq!(r.verdict, Verdict::Dependent);
    // 1 + i + i² + i³ = 0 as well, so k = 1 and k = 3 vanish too
    assert_eq!(r.vanishing_qbinomials(), vec![1, 2, 3]);
    assert!(q_binomial(4, 2, Complex64::i()).norm() <= 1e-15);
    assert!(gnk_expand(&FamilySpec::trig(), 4, PI / 4.0).det().abs() <= 1e-10);
}

#[test]
fn validation_examples() {
    assert!(validate_curve_params(&FamilySpec::polynomial(), 3, 0.1, 0.0, 1.0).is_empty());
    let v = validate_curve_params(&FamilySpec::trig(), 2, FRAC_PI_2, 0.0, 1.0);
    assert!(v.iter().any(|g| matches!(g, GuardViolation::QBinomial { .. })));
    let v = validate_curve_params(&FamilySpec::trig(), 2, 0.1, 0.0, PI);
    assert!(v.iter().any(|g| matches!(g, GuardViolation::Guard { i: 0, j: 0, .. })));
}

#[test]
fn angle_gap() {
    let trig = FamilySpec::trig();
    assert!(dependence_angle_gap(&trig, 2, FRAC_PI_2).unwrap() < 1e-15);
    assert!((dependence_angle_gap(&trig, 2, 0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
    assert!(dependence_angle_gap(&FamilySpec::hyperbolic(), 4, 1.0).is_none());
    let weighted = FamilySpec::exp_weighted(trig.clone(), None).unwrap();
    assert!(dependence_angle_gap(&weighted, 3, PI / 3.0).unwrap() < 1e-15);
    // q = -1 and n = 3: [3 1]_q = [3 2]_q = 1 - 1 + 1, so the nearest steps are the cube roots
    let minus_one = Complex64::new(-1.0, 0.0);
    assert!((1..3).all(|k| q_binomial(3, k, minus_one).norm() > 0.5));
    assert!((dependence_angle_gap(&trig, 3, FRAC_PI_2).unwrap() - PI / 6.0).abs() < 1e-15);
    assert_eq!(independence_check(&trig, 3, FRAC_PI_2).unwrap().verdict, Verdict::Independent);
}

proptest! {
    #[test]
    fn eigenvalue_product_is_determinant(h in -3.0..3.0f64, which in 0usize..4) {
        let fam = [
            FamilySpec::polynomial(),
            FamilySpec::trig(),
            FamilySpec::hyperbolic(),
            FamilySpec::exp_weighted(FamilySpec::trig(), None).unwrap(),
        ][which].clone();
        let c = fam.translation_matrix(h);
        let e = hgamma::eigen2(&c).unwrap();
        let prod = e.lambda1 * e.lambda2;
        prop_assert!((prod.re - c.det()).abs() <= 1e-12 * (1.0 + c.det().abs()));
        prop_assert!(prod.im.abs() <= 1e-12);
    }

    #[test]
    fn gaussian_binomial_matches_product_formula(re in -1.5..1.5f64, im in -1.5..1.5f64, n in 1usize..7) {
        // oracle: (q;q)_n / ((q;q)_k (q;q)_{n-k}) where the denominator is safe
        let q = Complex64::new(re, im);
        let poch = |m: usize| (1..=m).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (Complex64::new(1.0, 0.0) - q.powu(j as u32)));
        for k in 0..=n {
            let den = poch(k) * poch(n - k);
            prop_assume!(den.norm() > 1e-3);
            let expect = poch(n) / den;
            let got = q_binomial(n, k, q);
            prop_assert!((got - expect).norm() <= 1e-9 * (1.0 + expect.norm()));
        }
    }
}
