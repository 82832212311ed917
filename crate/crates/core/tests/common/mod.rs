#![allow(dead_code)]

use hgamma::{FamilySpec, HGammaCurve};
use proptest::prelude::*;
use rand::Rng;

/// One representative of every family kind.
pub fn families() -> Vec<FamilySpec> {
    vec![
        FamilySpec::polynomial(),
        FamilySpec::trig(),
        FamilySpec::hyperbolic(),
        FamilySpec::trig_discrete(0.5).unwrap(),
        FamilySpec::hyperbolic_discrete(-0.3).unwrap(),
        FamilySpec::exp_weighted(FamilySpec::trig(), None).unwrap(),
        FamilySpec::exp_weighted(FamilySpec::hyperbolic(), Some(0.4)).unwrap(),
    ]
}

/// A valid curve with random shape parameters and controls.
pub fn random_curve(rng: &mut impl Rng, family: &FamilySpec, n: usize, dim: usize) -> HGammaCurve {
    loop {
        let h = rng.random_range(-0.3..0.3);
        let a = rng.random_range(-1.0..0.5);
        let b = a + rng.random_range(0.4..1.4);
        let controls = (0..=n)
            .map(|_| (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        if let Ok(c) = HGammaCurve::new(family.clone(), h, a, b, controls) {
            return c;
        }
    }
}

pub fn arb_family() -> impl Strategy<Value = FamilySpec> {
    (0..families().len()).prop_map(|i| families()[i].clone())
}

pub fn arb_curve(max_n: usize) -> impl Strategy<Value = HGammaCurve> {
    (arb_family(), 1..=max_n, -0.3..0.3f64, -1.0..0.5f64, 0.4..1.4f64)
        .prop_flat_map(|(fam, n, h, a, len)| {
            let pts = proptest::collection::vec(proptest::collection::vec(-2.0..2.0f64, 2), n + 1);
            (Just(fam), Just(h), Just(a), Just(a + len), pts)
        })
        .prop_filter_map("invalid configuration", |(fam, h, a, b, pts)| {
            HGammaCurve::new(fam, h, a, b, pts).ok()
        })
}

pub fn max_diff(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    p.iter().zip(q).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
