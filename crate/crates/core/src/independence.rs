//! Linear independence of `{G_n,k(t; h)}` and the tableau guards.
//!
//! With `λ₁, λ₂` the eigenvalues of `C(h)`: a non-diagonalizable `C(h)` always
//! yields an independent set, and a diagonalizable one does so whenever
//! `q = λ₁/λ₂` is not a zero of any Gaussian binomial `[n k]_q`, `0 < k < n`.
//! The determinant of the `G_n,k` expansion matrix is computed alongside as an
//! independent check.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blossom::gnk_expand;
use crate::error::{Error, Result};
use crate::family::{FamilyKind, FamilySpec, Mat2};
use crate::tol::{DEPENDENCE_RTOL, GUARD_RTOL};

/// Eigen-data of a 2×2 matrix, ordered so that `|λ₁| ≥ |λ₂|` (ties broken by
/// the larger argument first).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigen2 {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    pub diagonalizable: bool,
}

pub fn eigen2(c: &Mat2) -> Result<Eigen2> {
    let det = c.det();
    let scale = c.max_abs();
    if !det.is_finite() || det.abs() <= 1e-12 * (scale * scale).max(f64::MIN_POSITIVE) {
        return Err(Error::SingularMatrix(det));
    }
    let tr = c.trace();
    let disc = tr * tr - 4.0 * det;
    let (l1, l2) = if disc >= 0.0 {
        let root = disc.sqrt();
        let big = 0.5 * (tr + tr.signum() * root);
        let big = if big == 0.0 { 0.5 * root } else { big };
        (Complex64::new(big, 0.0), Complex64::new(det / big, 0.0))
    } else {
        let im = 0.5 * (-disc).sqrt();
        (Complex64::new(0.5 * tr, im), Complex64::new(0.5 * tr, -im))
    };
    let (l1, l2) = order_eigen(l1, l2);

    let [[a, b], [cc, d]] = c.0;
    let scalar_tol = 1e-12 * (1.0 + scale);
    let is_scalar = b.abs() <= scalar_tol && cc.abs() <= scalar_tol && (a - d).abs() <= scalar_tol;
    let repeated = disc.abs() <= 1e-10 * (1.0 + tr * tr);
    Ok(Eigen2 {
        lambda1: l1,
        lambda2: l2,
        diagonalizable: !repeated || is_scalar,
    })
}

fn order_eigen(x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let (nx, ny) = (x.norm(), y.norm());
    let tie = (nx - ny).abs() <= 1e-14 * nx.max(ny);
    if (!tie && nx >= ny) || (tie && x.arg() >= y.arg()) {
        (x, y)
    } else {
        (y, x)
    }
}

/// Row `[n 0]_q, …, [n n]_q` via the division-free recurrence
/// `[n k] = [n−1 k−1] + q^k [n−1 k]`.
pub fn q_binomial_row(n: usize, q: Complex64) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let mut row = vec![one];
    for m in 1..=n {
        let mut next = vec![one; m + 1];
        let mut qk = one;
        for k in 1..m {
            qk *= q;
            next[k] = row[k - 1] + qk * row[k];
        }
        row = next;
    }
    row
}

pub fn q_binomial(n: usize, k: usize, q: Complex64) -> Complex64 {
    if k > n {
        return Complex64::new(0.0, 0.0);
    }
    q_binomial_row(n, q)[k]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Independent,
    Dependent,
    Borderline,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Independent => "independent",
            Verdict::Dependent => "dependent",
            Verdict::Borderline => "borderline",
        })
    }
}

/// `{"re": …, "im": …}` on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for C64 {
    fn from(z: Complex64) -> Self {
        C64 { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceReport {
    pub n: usize,
    pub h: f64,
    pub verdict: Verdict,
    pub eigenvalues: [C64; 2],
    pub diagonalizable: bool,
    /// `λ₁/λ₂`, only for diagonalizable `C(h)`.
    pub q: Option<C64>,
    /// `[n k]_q` for `k = 1..n−1`.
    pub qbinomials: Vec<C64>,
    /// `|[n k]_q| / Σ|coefficients|·|q|^i`, the normalized q-binomial sizes.
    pub qbinomial_relative: Vec<f64>,
    pub q_verdict: Verdict,
    /// Determinant of the `G_n,k` expansion matrix.
    pub det: f64,
    /// `∏ₘ |λ₂|^{n(n−1)/2} |q|^{m(m−1)/2} [n m]_{|q|}`: the determinant's
    /// magnitude with every Gaussian binomial replaced by its value at `|q|`.
    pub det_scale: f64,
    pub det_verdict: Verdict,
}

impl IndependenceReport {
    /// Indices `k` whose q-binomial vanishes within tolerance.
    pub fn vanishing_qbinomials(&self) -> Vec<usize> {
        self.qbinomial_relative
            .iter()
            .enumerate()
            .filter(|(_, r)| **r <= DEPENDENCE_RTOL)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// Up to sign, `det G = ∏ₘ λ₂^{n(n−1)/2} q^{m(m−1)/2} [n m]_q` in the monomial
/// basis (the eigenvector factors cancel). The same product at `|λ₂|`, `|q|`
/// is the scale the computed determinant is compared against.
fn det_scale(n: usize, lambda2: f64, q_abs: f64) -> f64 {
    let row = q_binomial_row(n, Complex64::new(q_abs, 0.0));
    let tri = (n * n.saturating_sub(1) / 2) as f64;
    let log: f64 = row
        .iter()
        .enumerate()
        .map(|(m, g)| {
            let mm = (m * m.saturating_sub(1) / 2) as f64;
            tri * lambda2.ln() + mm * q_abs.ln() + g.re.ln()
        })
        .sum();
    log.exp()
}

pub fn independence_check(family: &FamilySpec, n: usize, h: f64) -> Result<IndependenceReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    if !h.is_finite() {
        return Err(Error::InvalidParameter(format!("step h must be finite, got {h}")));
    }
    let eig = eigen2(&family.translation_matrix(h))?;

    let (q, qbinomials, qbinomial_relative) = if eig.diagonalizable {
        let q = eig.lambda1 / eig.lambda2;
        let row = q_binomial_row(n, q);
        let scales = q_binomial_row(n, Complex64::new(q.norm(), 0.0));
        let inner = 1..n;
        let rel = inner
            .clone()
            .map(|k| row[k].norm() / scales[k].re)
            .collect::<Vec<_>>();
        (
            Some(q.into()),
            inner.map(|k| row[k].into()).collect::<Vec<C64>>(),
            rel,
        )
    } else {
        (None, Vec::new(), Vec::new())
    };
    let q_verdict = if qbinomial_relative.iter().any(|r| *r <= DEPENDENCE_RTOL) {
        Verdict::Dependent
    } else {
        Verdict::Independent
    };

    let gnk = gnk_expand(family, n, h);
    let det = gnk.det();
    let q_abs = if eig.diagonalizable {
        (eig.lambda1 / eig.lambda2).norm()
    } else {
        1.0
    };
    let det_scale = det_scale(n, eig.lambda2.norm(), q_abs);
    // a NaN determinant counts as dependent
    let det_verdict = if det.abs() > DEPENDENCE_RTOL * det_scale {
        Verdict::Independent
    } else {
        Verdict::Dependent
    };

    let verdict = if q_verdict == det_verdict {
        q_verdict
    } else {
        Verdict::Borderline
    };
    Ok(IndependenceReport {
        n,
        h,
        verdict,
        eigenvalues: [eig.lambda1.into(), eig.lambda2.into()],
        diagonalizable: eig.diagonalizable,
        q,
        qbinomials,
        qbinomial_relative,
        q_verdict,
        det,
        det_scale,
        det_verdict,
    })
}

/// Angular distance `|ωh − πp/m|` from the nearest step at which a rotation
/// family loses independence. There `q = e^{2iωh}` is a primitive `m`-th
/// root of unity (`gcd(p, m) = 1`, `2 ≤ m ≤ n`), and by the q-Lucas theorem
/// some `[n k]_q` vanishes exactly when `n mod m ≠ m − 1`. `None` for the
/// families without such steps.
pub fn dependence_angle_gap(family: &FamilySpec, n: usize, h: f64) -> Option<f64> {
    let rotation = family.inner().unwrap_or(family);
    if !matches!(rotation.kind(), FamilyKind::Trig | FamilyKind::TrigDiscrete) || n < 2 {
        return None;
    }
    let angle = rotation.omega() * h;
    let mut best = f64::INFINITY;
    for m in 2..=n as i64 {
        if n as i64 % m == m - 1 {
            continue;
        }
        let centre = (angle * m as f64 / PI).round() as i64;
        for p in centre - m..=centre + m {
            if gcd(p.unsigned_abs(), m as u64) == 1 {
                best = best.min((angle - PI * p as f64 / m as f64).abs());
            }
        }
    }
    Some(best)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// One reason a `(family, n, h, a, b)` configuration cannot carry a curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GuardViolation {
    /// `d(a − jh, b − ih)` vanishes (`0 ≤ i ≤ j ≤ n−1`).
    Guard {
        i: usize,
        j: usize,
        a: f64,
        b: f64,
        value: f64,
    },
    /// `[n k]_q` vanishes.
    QBinomial { k: usize, relative: f64 },
    /// The `G_n,k` determinant vanishes.
    Determinant { det: f64, scale: f64 },
    /// The q-binomial test and the determinant test disagree.
    Borderline { q_verdict: Verdict, det_verdict: Verdict },
    /// `C(h)` is singular.
    SingularTranslation { det: f64 },
    /// The interval has coincident endpoints.
    Interval { a: f64, b: f64 },
    /// A parameter is not a finite number, or the degree is zero.
    Parameter { name: String, value: f64 },
}

impl fmt::Display for GuardViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuardViolation::Guard { i, j, a, b, value } => write!(
                f,
                "guard d(a-{j}h, b-{i}h) = d({a}, {b}) = {value:e} vanishes (i={i}, j={j})"
            ),
            GuardViolation::QBinomial { k, relative } => {
                write!(f, "q-binomial [n {k}]_q vanishes (relative size {relative:e})")
            }
            GuardViolation::Determinant { det, scale } => {
                write!(f, "G_n,k determinant {det:e} vanishes against scale {scale:e}")
            }
            GuardViolation::Borderline {
                q_verdict,
                det_verdict,
            } => write!(
                f,
                "borderline: q-binomial test says {q_verdict}, determinant test says {det_verdict}"
            ),
            GuardViolation::SingularTranslation { det } => {
                write!(f, "translation matrix is singular (det = {det:e})")
            }
            GuardViolation::Interval { a, b } => write!(f, "interval [{a}, {b}] is degenerate"),
            GuardViolation::Parameter { name, value } => {
                write!(f, "parameter {name} = {value} is invalid")
            }
        }
    }
}

/// Whether `d(u, v)` is numerically zero for tableau purposes.
pub fn guard_fails(family: &FamilySpec, u: f64, v: f64) -> Option<f64> {
    let d = family.d(u, v);
    let mag = family.d_magnitude(u, v);
    if d.is_finite() && d.abs() > GUARD_RTOL * (1.0 + mag) {
        None
    } else {
        Some(d)
    }
}

/// Every failing guard `d(a − jh, b − ih)`, `0 ≤ i ≤ j ≤ n−1`.
pub fn guard_violations(family: &FamilySpec, n: usize, h: f64, a: f64, b: f64) -> Vec<GuardViolation> {
    let mut out = Vec::new();
    for j in 0..n {
        for i in 0..=j {
            let (u, v) = (a - j as f64 * h, b - i as f64 * h);
            if let Some(value) = guard_fails(family, u, v) {
                out.push(GuardViolation::Guard { i, j, a: u, b: v, value });
            }
        }
    }
    out
}

/// Independence violations only (no interval guards).
pub fn independence_violations(family: &FamilySpec, n: usize, h: f64) -> Vec<GuardViolation> {
    if n == 0 {
        return vec![GuardViolation::Parameter {
            name: "n".into(),
            value: 0.0,
        }];
    }
    if !h.is_finite() {
        return vec![GuardViolation::Parameter {
            name: "h".into(),
            value: h,
        }];
    }
    match independence_check(family, n, h) {
        Ok(report) => report_violations(&report),
        Err(Error::SingularMatrix(det)) => vec![GuardViolation::SingularTranslation { det }],
        Err(e) => vec![GuardViolation::Parameter {
            name: e.to_string(),
            value: h,
        }],
    }
}

pub fn report_violations(report: &IndependenceReport) -> Vec<GuardViolation> {
    let mut out = Vec::new();
    match report.verdict {
        Verdict::Independent => {}
        Verdict::Dependent => {
            out.extend(report.qbinomial_relative.iter().enumerate().filter_map(|(i, r)| {
                (*r <= DEPENDENCE_RTOL).then_some(GuardViolation::QBinomial {
                    k: i + 1,
                    relative: *r,
                })
            }));
            out.push(GuardViolation::Determinant {
                det: report.det,
                scale: report.det_scale,
            });
        }
        Verdict::Borderline => out.push(GuardViolation::Borderline {
            q_verdict: report.q_verdict,
            det_verdict: report.det_verdict,
        }),
    }
    out
}

/// All reasons `(family, n, h, a, b)` is unusable; empty iff the basis is
/// independent and every tableau guard passes.
pub fn validate_curve_params(
    family: &FamilySpec,
    n: usize,
    h: f64,
    a: f64,
    b: f64,
) -> Vec<GuardViolation> {
    let mut out = Vec::new();
    for (name, value) in [("a", a), ("b", b)] {
        if !value.is_finite() {
            out.push(GuardViolation::Parameter {
                name: name.into(),
                value,
            });
        }
    }
    out.extend(independence_violations(family, n, h));
    if !out.is_empty() {
        return out;
    }
    if a == b {
        out.push(GuardViolation::Interval { a, b });
    }
    out.extend(guard_violations(family, n, h, a, b));
    out
}
