//! The h–γ blossom.
//!
//! Two independent constructions live here. The first expands a function in the
//! shifted basis `G_n,k(t; h)` and evaluates the elementary-symmetric multilinear
//! form with the same coefficients. The second (in [`crate::curve`]) runs the
//! de Casteljau-style tableau on a curve's control points. Closed-form blossoms of
//! the constant function and of `(d(t, x))ⁿ_h` are provided as [`Blossom`] values.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::curve::{HGammaCurve, Point};
use crate::error::{Error, Result};
use crate::family::{FamilyKind, FamilySpec};
use crate::tol::max_abs_diff;

/// One blossom argument: either `Γ(t)` or a raw pair `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BlossomArg {
    OnCurve { t: f64 },
    Raw { u: f64, v: f64 },
}

impl BlossomArg {
    pub fn on_curve(t: f64) -> Self {
        BlossomArg::OnCurve { t }
    }

    pub fn raw(u: f64, v: f64) -> Self {
        BlossomArg::Raw { u, v }
    }

    pub fn resolve(&self, family: &FamilySpec) -> (f64, f64) {
        match *self {
            BlossomArg::OnCurve { t } => family.eval(t),
            BlossomArg::Raw { u, v } => (u, v),
        }
    }

    /// `(Γ(t), Γ(t − h), …, Γ(t − (n−1)h))`.
    pub fn diagonal(t: f64, h: f64, n: usize) -> Vec<BlossomArg> {
        (0..n).map(|j| BlossomArg::on_curve(t - j as f64 * h)).collect()
    }

    /// Dual-functional arguments `(Γ(a−kh), …, Γ(a−(n−1)h), Γ(b), …, Γ(b−(k−1)h))`.
    pub fn dual(a: f64, b: f64, h: f64, n: usize, k: usize) -> Vec<BlossomArg> {
        (k..n)
            .map(|j| BlossomArg::on_curve(a - j as f64 * h))
            .chain((0..k).map(|j| BlossomArg::on_curve(b - j as f64 * h)))
            .collect()
    }
}

/// Coefficients of a degree-`n` homogeneous form in `(γ₁(t), γ₂(t))`.
/// Index `j` multiplies `γ₁(t)^j γ₂(t)^{n−j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogCoeffs {
    pub degree: usize,
    pub coeffs: Vec<f64>,
}

impl HomogCoeffs {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "homogeneous coefficients must be nonempty and finite".into(),
            ));
        }
        Ok(HomogCoeffs {
            degree: coeffs.len() - 1,
            coeffs,
        })
    }

    pub fn eval(&self, family: &FamilySpec, t: f64) -> f64 {
        let (g1, g2) = family.eval(t);
        let n = self.degree as i32;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * g1.powi(j as i32) * g2.powi(n - j as i32))
            .sum()
    }
}

/// Row `k` holds the expansion of `G_n,k(t; h)` in the monomials `γ₁^j γ₂^{n−j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GnkMatrix {
    pub n: usize,
    pub h: f64,
    pub rows: Vec<HomogCoeffs>,
}

impl GnkMatrix {
    fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n + 1, self.n + 1, |k, j| self.rows[k].coeffs[j])
    }

    pub fn det(&self) -> f64 {
        self.to_dmatrix().determinant()
    }
}

/// `(d(t, x))ⁿ_h = ∏_{j<n} d(t − jh, x)`.
pub fn d_pochhammer(family: &FamilySpec, t: f64, x: f64, n: usize, h: f64) -> f64 {
    (0..n).map(|j| family.d(t - j as f64 * h, x)).product()
}

/// Expands every `G_n,k(t; h)` at once through the generating product
/// `∏_{j<n} (y·γ₁(t − jh) + γ₂(t − jh))`, rewriting each shifted value with
/// `Γ(t − jh) = C(jh) Γ(t)`. The coefficient of `yᵏ` is row `k`.
pub fn gnk_expand(family: &FamilySpec, n: usize, h: f64) -> GnkMatrix {
    // poly[k][j]: coefficient of y^k γ₁^j γ₂^{deg−j}
    let mut poly = vec![vec![0.0; n + 1]; n + 1];
    poly[0][0] = 1.0;
    for step in 0..n {
        let [[c00, c01], [c10, c11]] = family.translation_matrix(step as f64 * h).0;
        let mut next = vec![vec![0.0; n + 1]; n + 1];
        for k in 0..=step {
            for j in 0..=step {
                let p = poly[k][j];
                if p == 0.0 {
                    continue;
                }
                next[k + 1][j + 1] += p * c00;
                next[k + 1][j] += p * c01;
                next[k][j + 1] += p * c10;
                next[k][j] += p * c11;
            }
        }
        poly = next;
    }
    GnkMatrix {
        n,
        h,
        rows: poly
            .into_iter()
            .map(|coeffs| HomogCoeffs { degree: n, coeffs })
            .collect(),
    }
}

/// Coordinates `c` of a homogeneous form in the `G_n,k` basis, so that
/// `G = Σₖ cₖ G_n,k(·; h)`.
pub fn gnk_coordinates(family: &FamilySpec, h: f64, form: &HomogCoeffs) -> Result<Vec<f64>> {
    let gnk = gnk_expand(family, form.degree, h);
    let m = gnk.to_dmatrix().transpose();
    let rhs = DVector::from_column_slice(&form.coeffs);
    let sol = m.lu().solve(&rhs).ok_or_else(|| Error::DependentBasis {
        detail: format!("G_n,k matrix is singular for n = {}, h = {h}", form.degree),
        guards: Vec::new(),
    })?;
    Ok(sol.iter().copied().collect())
}

/// `Σₖ cₖ eₖ(args)` where `eₖ` sums `u_{i₁}⋯u_{iₖ} v_{iₖ₊₁}⋯v_{iₙ}` over all
/// `k`-subsets. Computed as the coefficients of `∏ᵢ (y uᵢ + vᵢ)`.
pub fn symmetric_blossom(coeffs: &[f64], pairs: &[(f64, f64)]) -> Result<f64> {
    if coeffs.len() != pairs.len() + 1 {
        return Err(Error::ArityMismatch {
            expected: coeffs.len().saturating_sub(1),
            found: pairs.len(),
        });
    }
    let mut e = vec![0.0; pairs.len() + 1];
    e[0] = 1.0;
    for (deg, &(u, v)) in pairs.iter().enumerate() {
        for k in (0..=deg + 1).rev() {
            let carry = if k > 0 { e[k - 1] * u } else { 0.0 };
            e[k] = e[k] * v + carry;
        }
    }
    Ok(coeffs.iter().zip(&e).map(|(c, s)| c * s).sum())
}

/// A symmetric multilinear form of fixed arity with point values.
pub trait Blossom {
    fn arity(&self) -> usize;
    fn eval(&self, args: &[BlossomArg]) -> Result<Point>;
}

pub(crate) fn check_arity(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::ArityMismatch { expected, found });
    }
    Ok(())
}

impl Blossom for HGammaCurve {
    fn arity(&self) -> usize {
        self.degree()
    }

    fn eval(&self, args: &[BlossomArg]) -> Result<Point> {
        blossom_from_controls(self, args)
    }
}

/// The blossom of `Σₖ cₖ G_n,k(·; h)` in elementary-symmetric form.
#[derive(Debug, Clone)]
pub struct HomogBlossom {
    family: FamilySpec,
    coeffs: Vec<f64>,
}

impl HomogBlossom {
    /// Blossom with explicit `G_n,k` coordinates.
    pub fn from_gnk(family: FamilySpec, coeffs: Vec<f64>) -> Self {
        HomogBlossom { family, coeffs }
    }

    /// Blossom of the homogeneous form `form` for step `h`.
    pub fn from_form(family: FamilySpec, h: f64, form: &HomogCoeffs) -> Result<Self> {
        let coeffs = gnk_coordinates(&family, h, form)?;
        Ok(HomogBlossom { family, coeffs })
    }

    pub fn gnk_coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

impl Blossom for HomogBlossom {
    fn arity(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn eval(&self, args: &[BlossomArg]) -> Result<Point> {
        check_arity(self.arity(), args.len())?;
        let pairs: Vec<_> = args.iter().map(|a| a.resolve(&self.family)).collect();
        Ok(vec![symmetric_blossom(&self.coeffs, &pairs)?])
    }
}

/// Blossom of `G(t) = (d(t, x))ⁿ_h`: `∏ₖ (γ₂(x) uₖ − γ₁(x) vₖ)`.
#[derive(Debug, Clone)]
pub struct MarsdenBlossom {
    pub family: FamilySpec,
    pub n: usize,
    pub x: f64,
}

impl Blossom for MarsdenBlossom {
    fn arity(&self) -> usize {
        self.n
    }

    fn eval(&self, args: &[BlossomArg]) -> Result<Point> {
        check_arity(self.n, args.len())?;
        Ok(vec![args
            .iter()
            .map(|a| self.family.d_pair(a.resolve(&self.family), self.x))
            .product()])
    }
}

/// All perfect matchings of `{1, …, n}`. Each matching lists its pairs with
/// the smaller index first; matchings come out with the smallest free index
/// paired first and partners ascending.
pub fn pairings(n: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    if n % 2 == 1 {
        return Err(Error::OddArity(n));
    }
    if n > 12 {
        return Err(Error::InvalidParameter(format!(
            "pairings are enumerated for n <= 12, got {n}"
        )));
    }
    fn rec(free: &[usize], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&first, rest)) = free.split_first() else {
            out.push(cur.clone());
            return;
        };
        for (idx, &partner) in rest.iter().enumerate() {
            let remaining: Vec<usize> = rest
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != idx)
                .map(|(_, &p)| p)
                .collect();
            cur.push((first, partner));
            rec(&remaining, cur, out);
            cur.pop();
        }
    }
    let free: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    rec(&free, &mut Vec::with_capacity(n / 2), &mut out);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum UnityKind {
    /// `uᵢuⱼ + vᵢvⱼ = cos(ω(sᵢ − sⱼ))` on the curve.
    Circular,
    /// `uᵢuⱼ − vᵢvⱼ = cosh(ω(sᵢ − sⱼ))` on the curve.
    Hyperbolic,
}

fn unity_kind(family: &FamilySpec) -> Result<UnityKind> {
    match family.kind() {
        FamilyKind::Trig | FamilyKind::TrigDiscrete => Ok(UnityKind::Circular),
        FamilyKind::Hyperbolic | FamilyKind::HyperbolicDiscrete => Ok(UnityKind::Hyperbolic),
        other => Err(Error::UnsupportedFamily(format!(
            "no pairing form of the constant function for {other}"
        ))),
    }
}

fn kappa(kind: UnityKind, x: f64) -> f64 {
    match kind {
        UnityKind::Circular => x.cos(),
        UnityKind::Hyperbolic => x.cosh(),
    }
}

/// `Σ_P ∏_{(i,j)∈P} κ(ω(sᵢ − sⱼ))` for parameters `s` (1-based pairs).
pub(crate) fn pairing_sum(
    matchings: &[Vec<(usize, usize)>],
    family: &FamilySpec,
    s: &[f64],
) -> Result<f64> {
    let kind = unity_kind(family)?;
    let omega = family.omega();
    Ok(matchings
        .iter()
        .map(|m| {
            m.iter()
                .map(|&(i, j)| kappa(kind, omega * (s[i - 1] - s[j - 1])))
                .product::<f64>()
        })
        .sum())
}

/// `c_n(h) = (Σ_P ∏ κ((i − j)h))⁻¹` with `κ = cos` (trigonometric kinds) or
/// `cosh` (hyperbolic kinds), arguments scaled by `ω` for the discrete kinds.
pub fn unity_normalizer(family: &FamilySpec, n: usize, h: f64) -> Result<f64> {
    unity_kind(family)?;
    let matchings = pairings(n)?;
    normalizer_from(&matchings, family, n, h)
}

fn normalizer_from(
    matchings: &[Vec<(usize, usize)>],
    family: &FamilySpec,
    n: usize,
    h: f64,
) -> Result<f64> {
    let s: Vec<f64> = (0..n).map(|i| -(i as f64) * h).collect();
    let sum = pairing_sum(matchings, family, &s)?;
    if sum.abs() <= 1e-10 * matchings.len() as f64 {
        return Err(Error::UnityUndefined { n, h, sum });
    }
    Ok(1.0 / sum)
}

/// Blossom of the constant function 1.
///
/// Polynomial: `u₁⋯uₙ`. Trigonometric kinds (even `n`):
/// `c_n(h) Σ_P ∏ (uᵢuⱼ + vᵢvⱼ)`; hyperbolic kinds use `uᵢuⱼ − vᵢvⱼ`.
#[derive(Debug, Clone)]
pub struct UnityBlossom {
    family: FamilySpec,
    n: usize,
    normalizer: f64,
    matchings: Vec<Vec<(usize, usize)>>,
}

impl UnityBlossom {
    pub fn new(family: FamilySpec, n: usize, h: f64) -> Result<Self> {
        if family.kind() == FamilyKind::Polynomial {
            return Ok(UnityBlossom {
                family,
                n,
                normalizer: 1.0,
                matchings: Vec::new(),
            });
        }
        unity_kind(&family)?;
        if n % 2 == 1 {
            return Err(Error::UnsupportedFamily(format!(
                "the constant function is not in the odd-order space for {family}"
            )));
        }
        let matchings = pairings(n)?;
        let normalizer = normalizer_from(&matchings, &family, n, h)?;
        Ok(UnityBlossom {
            family,
            n,
            normalizer,
            matchings,
        })
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }
}

impl Blossom for UnityBlossom {
    fn arity(&self) -> usize {
        self.n
    }

    fn eval(&self, args: &[BlossomArg]) -> Result<Point> {
        check_arity(self.n, args.len())?;
        let pairs: Vec<_> = args.iter().map(|a| a.resolve(&self.family)).collect();
        if self.family.kind() == FamilyKind::Polynomial {
            return Ok(vec![pairs.iter().map(|p| p.0).product()]);
        }
        let sign = match unity_kind(&self.family)? {
            UnityKind::Circular => 1.0,
            UnityKind::Hyperbolic => -1.0,
        };
        let sum: f64 = self
            .matchings
            .iter()
            .map(|m| {
                m.iter()
                    .map(|&(i, j)| {
                        let (ui, vi) = pairs[i - 1];
                        let (uj, vj) = pairs[j - 1];
                        ui * uj + sign * vi * vj
                    })
                    .product::<f64>()
            })
            .sum();
        Ok(vec![self.normalizer * sum])
    }
}

/// Blossom value from a curve's control points via the Q-tableau: the
/// control points seed level 0 and each argument is inserted in turn.
pub fn blossom_from_controls(curve: &HGammaCurve, args: &[BlossomArg]) -> Result<Point> {
    check_arity(curve.degree(), args.len())?;
    curve.run_tableau(args).map(|mut levels| {
        levels
            .pop()
            .and_then(|mut apex| apex.pop())
            .expect("tableau has an apex")
    })
}

/// `‖g(Γ(t), Γ(t−h), …, Γ(t−(n−1)h)) − G(t)‖∞`.
pub fn blossom_diagonal_check(curve: &HGammaCurve, t: f64) -> Result<f64> {
    let diag = BlossomArg::diagonal(t, curve.h(), curve.degree());
    let g = blossom_from_controls(curve, &diag)?;
    let direct = curve.eval(t)?;
    Ok(max_abs_diff(&g, &direct))
}
