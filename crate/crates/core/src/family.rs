//! Translation-invariant `(γ₁, γ₂)` families.
//!
//! Every family satisfies `Γ(x − h) = C(h) Γ(x)` for an invertible 2×2 matrix
//! `C(h)`. The discrete trigonometric and hyperbolic kinds are evaluated through
//! their real reduction: with `ω = ln(1 + d) / d`, `cos_d x = cos(ωx)` and so on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The catalog of supported families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Polynomial,
    Trig,
    TrigDiscrete,
    Hyperbolic,
    HyperbolicDiscrete,
    ExpWeighted,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 6] = [
        FamilyKind::Polynomial,
        FamilyKind::Trig,
        FamilyKind::TrigDiscrete,
        FamilyKind::Hyperbolic,
        FamilyKind::HyperbolicDiscrete,
        FamilyKind::ExpWeighted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Polynomial => "polynomial",
            FamilyKind::Trig => "trig",
            FamilyKind::TrigDiscrete => "trig_discrete",
            FamilyKind::Hyperbolic => "hyperbolic",
            FamilyKind::HyperbolicDiscrete => "hyperbolic_discrete",
            FamilyKind::ExpWeighted => "exp_weighted",
        }
    }

    pub fn is_discrete(self) -> bool {
        matches!(self, FamilyKind::TrigDiscrete | FamilyKind::HyperbolicDiscrete)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Polynomial,
    Trig { omega: f64, d: Option<f64> },
    Hyperbolic { omega: f64, d: Option<f64> },
    ExpWeighted {
        inner: Box<FamilySpec>,
        omega: f64,
        d: Option<f64>,
    },
}

/// A validated `(γ₁, γ₂)` family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct FamilySpec(Repr);

/// Wire form: `{"kind":"trig_discrete","d":0.5}`,
/// `{"kind":"exp_weighted","inner":{"kind":"hyperbolic"}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub kind: FamilyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<Box<FamilyJson>>,
}

/// `ω = ln(1 + d) / d`, the exponent rate of `e_d^x = (1 + d)^{x/d}`.
pub fn discrete_rate(d: f64) -> Result<f64> {
    if !d.is_finite() || d <= -1.0 || d == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "discrete parameter must satisfy d > -1 and d != 0, got {d}"
        )));
    }
    Ok(d.ln_1p() / d)
}

impl FamilySpec {
    pub fn polynomial() -> Self {
        FamilySpec(Repr::Polynomial)
    }

    pub fn trig() -> Self {
        FamilySpec(Repr::Trig { omega: 1.0, d: None })
    }

    pub fn hyperbolic() -> Self {
        FamilySpec(Repr::Hyperbolic { omega: 1.0, d: None })
    }

    pub fn trig_discrete(d: f64) -> Result<Self> {
        let omega = discrete_rate(d)?;
        Ok(FamilySpec(Repr::Trig { omega, d: Some(d) }))
    }

    pub fn hyperbolic_discrete(d: f64) -> Result<Self> {
        let omega = discrete_rate(d)?;
        Ok(FamilySpec(Repr::Hyperbolic { omega, d: Some(d) }))
    }

    /// `e^x · Γ(x)`, or `e_d^x · Γ(x)` when `d` is given.
    pub fn exp_weighted(inner: FamilySpec, d: Option<f64>) -> Result<Self> {
        if inner.kind() == FamilyKind::ExpWeighted {
            return Err(Error::InvalidParameter(
                "exp_weighted must wrap a non-exp_weighted family".into(),
            ));
        }
        let omega = match d {
            Some(d) => discrete_rate(d)?,
            None => 1.0,
        };
        Ok(FamilySpec(Repr::ExpWeighted {
            inner: Box::new(inner),
            omega,
            d,
        }))
    }

    pub fn kind(&self) -> FamilyKind {
        match &self.0 {
            Repr::Polynomial => FamilyKind::Polynomial,
            Repr::Trig { d: None, .. } => FamilyKind::Trig,
            Repr::Trig { d: Some(_), .. } => FamilyKind::TrigDiscrete,
            Repr::Hyperbolic { d: None, .. } => FamilyKind::Hyperbolic,
            Repr::Hyperbolic { d: Some(_), .. } => FamilyKind::HyperbolicDiscrete,
            Repr::ExpWeighted { .. } => FamilyKind::ExpWeighted,
        }
    }

    pub fn d_param(&self) -> Option<f64> {
        match &self.0 {
            Repr::Polynomial => None,
            Repr::Trig { d, .. } | Repr::Hyperbolic { d, .. } | Repr::ExpWeighted { d, .. } => *d,
        }
    }

    pub fn inner(&self) -> Option<&FamilySpec> {
        match &self.0 {
            Repr::ExpWeighted { inner, .. } => Some(inner),
            _ => None,
        }
    }

    /// Frequency of the trigonometric/hyperbolic kinds (1 for the classical
    /// ones, `ln(1+d)/d` for the discrete ones). For `exp_weighted` this is the
    /// weight's exponent rate.
    pub fn omega(&self) -> f64 {
        match &self.0 {
            Repr::Polynomial => 1.0,
            Repr::Trig { omega, .. }
            | Repr::Hyperbolic { omega, .. }
            | Repr::ExpWeighted { omega, .. } => *omega,
        }
    }

    /// `(γ₁(x), γ₂(x))`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        match &self.0 {
            Repr::Polynomial => (1.0, x),
            Repr::Trig { omega, .. } => {
                let (s, c) = (omega * x).sin_cos();
                (c, s)
            }
            Repr::Hyperbolic { omega, .. } => {
                let y = omega * x;
                (y.cosh(), y.sinh())
            }
            Repr::ExpWeighted { inner, omega, .. } => {
                let w = (omega * x).exp();
                let (g1, g2) = inner.eval(x);
                (w * g1, w * g2)
            }
        }
    }

    /// `C(h)` with `Γ(x − h) = C(h) Γ(x)`.
    pub fn translation_matrix(&self, h: f64) -> Mat2 {
        match &self.0 {
            Repr::Polynomial => Mat2::new(1.0, 0.0, -h, 1.0),
            Repr::Trig { omega, .. } => {
                let (s, c) = (omega * h).sin_cos();
                Mat2::new(c, s, -s, c)
            }
            Repr::Hyperbolic { omega, .. } => {
                let y = omega * h;
                let (c, s) = (y.cosh(), y.sinh());
                Mat2::new(c, -s, -s, c)
            }
            Repr::ExpWeighted { inner, omega, .. } => {
                inner.translation_matrix(h).scale((-omega * h).exp())
            }
        }
    }

    /// `d(u, v) = γ₁(u)γ₂(v) − γ₂(u)γ₁(v)` via the family's closed form.
    pub fn d(&self, u: f64, v: f64) -> f64 {
        match &self.0 {
            Repr::Polynomial => v - u,
            Repr::Trig { omega, .. } => (omega * (v - u)).sin(),
            Repr::Hyperbolic { omega, .. } => (omega * (v - u)).sinh(),
            Repr::ExpWeighted { inner, omega, .. } => (omega * (u + v)).exp() * inner.d(u, v),
        }
    }

    /// `d(u, v)` as the plain 2×2 determinant of two evaluations.
    pub fn d_generic(&self, u: f64, v: f64) -> f64 {
        let (a1, a2) = self.eval(u);
        let (b1, b2) = self.eval(v);
        a1 * b2 - a2 * b1
    }

    /// Multilinear extension `w₁γ₂(v) − w₂γ₁(v)`; equals `d(u, v)` for `w = Γ(u)`.
    pub fn d_pair(&self, w: (f64, f64), v: f64) -> f64 {
        let (g1, g2) = self.eval(v);
        w.0 * g2 - w.1 * g1
    }

    /// Size of the two products in `d(u, v)`; scales the guard threshold.
    pub fn d_magnitude(&self, u: f64, v: f64) -> f64 {
        let (a1, a2) = self.eval(u);
        let (b1, b2) = self.eval(v);
        (a1 * b2).abs() + (a2 * b1).abs()
    }

    /// `max_x ‖Γ(x − h) − C(h)Γ(x)‖∞ / (1 + ‖Γ(x − h)‖∞)` over `grid`.
    pub fn translation_residual(&self, h: f64, grid: &[f64]) -> f64 {
        let c = self.translation_matrix(h);
        grid.iter()
            .map(|&x| {
                let (s1, s2) = self.eval(x - h);
                let (t1, t2) = c.apply(self.eval(x));
                (s1 - t1).abs().max((s2 - t2).abs()) / (1.0 + s1.abs().max(s2.abs()))
            })
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::ExpWeighted { inner, d, .. } => match d {
                Some(d) => write!(f, "exp_weighted[d={d}]({inner})"),
                None => write!(f, "exp_weighted({inner})"),
            },
            _ => match self.d_param() {
                Some(d) => write!(f, "{}[d={d}]", self.kind()),
                None => write!(f, "{}", self.kind()),
            },
        }
    }
}

impl TryFrom<FamilyJson> for FamilySpec {
    type Error = Error;

    fn try_from(j: FamilyJson) -> Result<Self> {
        let no_inner = |j: &FamilyJson| {
            if j.inner.is_some() {
                Err(Error::InvalidParameter(format!(
                    "family {} takes no inner family",
                    j.kind
                )))
            } else {
                Ok(())
            }
        };
        let need_d = |j: &FamilyJson| {
            j.d.ok_or_else(|| {
                Error::InvalidParameter(format!("family {} requires parameter d", j.kind))
            })
        };
        let no_d = |j: &FamilyJson| {
            if j.d.is_some() {
                Err(Error::InvalidParameter(format!(
                    "family {} takes no parameter d",
                    j.kind
                )))
            } else {
                Ok(())
            }
        };
        match j.kind {
            FamilyKind::Polynomial | FamilyKind::Trig | FamilyKind::Hyperbolic => {
                no_inner(&j)?;
                no_d(&j)?;
                Ok(match j.kind {
                    FamilyKind::Polynomial => FamilySpec::polynomial(),
                    FamilyKind::Trig => FamilySpec::trig(),
                    _ => FamilySpec::hyperbolic(),
                })
            }
            FamilyKind::TrigDiscrete => {
                no_inner(&j)?;
                FamilySpec::trig_discrete(need_d(&j)?)
            }
            FamilyKind::HyperbolicDiscrete => {
                no_inner(&j)?;
                FamilySpec::hyperbolic_discrete(need_d(&j)?)
            }
            FamilyKind::ExpWeighted => {
                let inner = j.inner.ok_or_else(|| {
                    Error::InvalidParameter("exp_weighted requires an inner family".into())
                })?;
                FamilySpec::exp_weighted(FamilySpec::try_from(*inner)?, j.d)
            }
        }
    }
}

impl From<FamilySpec> for FamilyJson {
    fn from(f: FamilySpec) -> Self {
        FamilyJson {
            kind: f.kind(),
            d: f.d_param(),
            inner: f.inner().map(|i| Box::new(FamilyJson::from(i.clone()))),
        }
    }
}

/// Row-major 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn det(&self) -> f64 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn apply(&self, v: (f64, f64)) -> (f64, f64) {
        let [[a, b], [c, d]] = self.0;
        (a * v.0 + b * v.1, c * v.0 + d * v.1)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = o.0;
        Mat2::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2::new(s * a, s * b, s * c, s * d)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(o.0.iter().flatten())
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }
}
