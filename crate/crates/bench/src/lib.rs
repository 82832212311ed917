//! Fixed inputs shared by the criterion benches.

use hgamma::{FamilySpec, HGammaCurve};

/// A planar trigonometric curve of degree `n` on `[0, 1.2]` with `h = 0.05`.
pub fn sample_curve(n: usize) -> HGammaCurve {
    let controls = (0..=n)
        .map(|k| {
            let t = k as f64 / n as f64;
            vec![t, (3.0 * t).sin()]
        })
        .collect();
    HGammaCurve::new(FamilySpec::trig(), 0.05, 0.0, 1.2, controls).expect("valid bench curve")
}
