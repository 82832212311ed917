//! Blossoming and Bézier curves over two-dimensional translation-invariant
//! spaces `span{γ₁, γ₂}` with a step size `h`.
//!
//! The polynomial, trigonometric and hyperbolic families (plus their discrete
//! and exponentially weighted variants) are described by [`FamilySpec`].
//! [`HGammaCurve`] evaluates curves through a de Casteljau-style tableau,
//! [`BernsteinBasis`] exposes the basis functions, and [`independence_check`]
//! decides whether a step size gives a usable basis at all.

pub mod basis;
pub mod blossom;
pub mod curve;
pub mod error;
pub mod family;
pub mod independence;
pub mod tol;

pub use basis::{
    degree_elevate, dual_control_points, elevation_matrix, gamma_closed_form, marsden_coefficients,
    marsden_gamma_sides, marsden_poly_sides, marsden_residual, poly_closed_form, unity_controls,
    BernsteinBasis,
};
pub use blossom::{
    blossom_diagonal_check, blossom_from_controls, d_pochhammer, gnk_coordinates, gnk_expand,
    pairings, symmetric_blossom, unity_normalizer, Blossom, BlossomArg, GnkMatrix, HomogBlossom,
    HomogCoeffs, MarsdenBlossom, UnityBlossom,
};
pub use curve::{
    make_interpolating_curve, CurveSpec, HGammaCurve, Point, SegmentTree, Sigma, Subdivision,
    Tableau,
};
pub use error::{Error, Result};
pub use family::{discrete_rate, FamilyJson, FamilyKind, FamilySpec, Mat2};
pub use independence::{
    dependence_angle_gap, eigen2, guard_violations, independence_check, independence_violations,
    q_binomial, q_binomial_row,
    validate_curve_params, GuardViolation, IndependenceReport, Verdict,
};
pub use tol::{Tolerance, DEPENDENCE_RTOL, GUARD_RTOL};
