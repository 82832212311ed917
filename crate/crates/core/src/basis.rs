//! h–γ Bernstein bases, dual functionals, Marsden coefficients, partition of
//! unity and degree elevation.

use std::collections::HashMap;

use serde::Serialize;

use crate::blossom::{pairing_sum, pairings, unity_normalizer, Blossom, BlossomArg};
use crate::curve::{violations_error, Frame, HGammaCurve, Point, Sigma};
use crate::error::{Error, Result};
use crate::family::{FamilyKind, FamilySpec};
use crate::independence::{guard_fails, validate_curve_params, GuardViolation};

/// `Bₖⁿ(x, [a, b]; γ, h)` for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernsteinBasis {
    family: FamilySpec,
    n: usize,
    h: f64,
    a: f64,
    b: f64,
}

impl BernsteinBasis {
    pub fn new(family: FamilySpec, n: usize, h: f64, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("basis degree must be >= 1".into()));
        }
        let violations = validate_curve_params(&family, n, h, a, b);
        if !violations.is_empty() {
            return Err(violations_error(
                &format!("basis on [{a}, {b}] with n = {n}, h = {h}"),
                violations,
            ));
        }
        Ok(BernsteinBasis { family, n, h, a, b })
    }

    pub fn family(&self) -> &FamilySpec {
        &self.family
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    fn frame(&self) -> Frame<'_> {
        Frame {
            family: &self.family,
            h: self.h,
            a: self.a,
            b: self.b,
        }
    }

    /// All `n + 1` basis values at `x`, read off the evaluation tableau.
    pub fn eval_all(&self, x: f64) -> Result<Vec<f64>> {
        self.eval_all_sigma(x, &Sigma::identity(self.n))
    }

    /// Basis values for the tableau with insertion order `sigma`. The
    /// coefficient of each control point in the apex is pushed down level by
    /// level, so the cost is `O(n²)`.
    pub fn eval_all_sigma(&self, x: f64, sigma: &Sigma) -> Result<Vec<f64>> {
        let n = self.n;
        if sigma.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: sigma.len(),
            });
        }
        let args: Vec<BlossomArg> = sigma
            .as_slice()
            .iter()
            .map(|&s| BlossomArg::on_curve(x - s as f64 * self.h))
            .collect();
        let weights = self.frame().weights(n, &args)?;
        let mut coef = vec![1.0];
        for k in (0..n).rev() {
            let mut below = vec![0.0; n - k + 1];
            for (i, &(l, r)) in weights[k].iter().enumerate() {
                below[i] += l * coef[i];
                below[i + 1] += r * coef[i];
            }
            coef = below;
        }
        Ok(coef)
    }

    /// Basis values from the two-term recurrence that lowers the degree by one
    /// while shifting `x` and `a` by `−h`.
    pub fn eval_recurrence(&self, x: f64) -> Result<Vec<f64>> {
        let mut memo = HashMap::new();
        (0..=self.n)
            .map(|k| self.recur(self.n, k, x, &mut memo))
            .collect()
    }

    fn recur(&self, m: usize, k: usize, x: f64, memo: &mut HashMap<(usize, usize), f64>) -> Result<f64> {
        if k > m {
            return Ok(0.0);
        }
        if m == 0 {
            return Ok(1.0);
        }
        if let Some(&v) = memo.get(&(m, k)) {
            return Ok(v);
        }
        let shift = (self.n - m) as f64 * self.h;
        let (xs, a, b, h) = (x - shift, self.a - shift, self.b, self.h);
        let fam = &self.family;
        let ratio = |num: f64, lo: f64, hi: f64| -> Result<f64> {
            if let Some(value) = guard_fails(fam, lo, hi) {
                return Err(Error::degenerate(
                    format!("recurrence denominator d({lo}, {hi}) vanishes"),
                    vec![GuardViolation::Guard {
                        i: 0,
                        j: 0,
                        a: lo,
                        b: hi,
                        value,
                    }],
                ));
            }
            Ok(num / fam.d(lo, hi))
        };
        let mut v = 0.0;
        if k >= 1 {
            let s = (k - 1) as f64 * h;
            v += ratio(fam.d(a - s, xs), a - s, b - s)? * self.recur(m - 1, k - 1, x, memo)?;
        }
        if k < m {
            let s = k as f64 * h;
            v += ratio(fam.d(xs, b - s), a - s, b - s)? * self.recur(m - 1, k, x, memo)?;
        }
        memo.insert((m, k), v);
        Ok(v)
    }

    /// Basis values at `samples` equally spaced points of `[a, b]`.
    pub fn sample(&self, samples: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let xs = crate::curve::linspace(self.a, self.b, samples);
        let vals = xs.iter().map(|&x| self.eval_all(x)).collect::<Result<_>>()?;
        Ok((xs, vals))
    }

    /// Control points `bₖ = g(Γ(a−kh), …, Γ(a−(n−1)h), Γ(b), …, Γ(b−(k−1)h))`
    /// of the function whose blossom is `g`.
    pub fn dual_control_points(&self, blossom: &dyn Blossom) -> Result<Vec<Point>> {
        dual_control_points(blossom, self.h, self.a, self.b)
    }
}

/// `bₖ = g(Γ(a−kh), …, Γ(a−(n−1)h), Γ(b), …, Γ(b−(k−1)h))` for `k = 0..=n`,
/// `n` being the arity of `g`.
pub fn dual_control_points(blossom: &dyn Blossom, h: f64, a: f64, b: f64) -> Result<Vec<Point>> {
    let n = blossom.arity();
    (0..=n)
        .map(|k| blossom.eval(&BlossomArg::dual(a, b, h, n, k)))
        .collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Polynomial-family basis in product form:
/// `C(n,k) ∏_{j<k}(x−a+jh) ∏_{j<n−k}(b−x+jh) / ∏_{j<n}(b−a+jh)`.
pub fn poly_closed_form(n: usize, k: usize, h: f64, a: f64, b: f64, x: f64) -> f64 {
    let up: f64 = (0..k).map(|j| x - a + j as f64 * h).product();
    let down: f64 = (0..n - k).map(|j| b - x + j as f64 * h).product();
    let den: f64 = (0..n).map(|j| b - a + j as f64 * h).product();
    binomial(n, k) * up * down / den
}

/// Basis at `h = 0`: `C(n,k) (d(a,x)/d(a,b))ᵏ (d(x,b)/d(a,b))ⁿ⁻ᵏ`.
pub fn gamma_closed_form(family: &FamilySpec, n: usize, k: usize, a: f64, b: f64, x: f64) -> f64 {
    let dab = family.d(a, b);
    let l = family.d(a, x) / dab;
    let r = family.d(x, b) / dab;
    binomial(n, k) * l.powi(k as i32) * r.powi((n - k) as i32)
}

/// Coefficients of `(d(t, x))ⁿ_h` in the basis over `[a, b]`:
/// `∏_{j<k} d(b−jh, x) · ∏_{j=k}^{n−1} d(a−jh, x)`.
pub fn marsden_coefficients(family: &FamilySpec, n: usize, h: f64, a: f64, b: f64, x: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let from_b: f64 = (0..k).map(|j| family.d(b - j as f64 * h, x)).product();
            let from_a: f64 = (k..n).map(|j| family.d(a - j as f64 * h, x)).product();
            from_b * from_a
        })
        .collect()
}

/// Relative residual of `(d(t, x))ⁿ_h = Σₖ mₖ(x) Bₖⁿ(t)`, measured against
/// `max(|lhs|, Σₖ |mₖ(x) Bₖⁿ(t)|)` so that cancellation near a root of `d`
/// does not inflate it.
pub fn marsden_residual(basis: &BernsteinBasis, x: f64, t: f64) -> Result<f64> {
    let fam = &basis.family;
    let m = marsden_coefficients(fam, basis.n, basis.h, basis.a, basis.b, x);
    let bt = basis.eval_all(t)?;
    let terms: Vec<f64> = m.iter().zip(&bt).map(|(m, b)| m * b).collect();
    let rhs: f64 = terms.iter().sum();
    let lhs = crate::blossom::d_pochhammer(fam, t, x, basis.n, basis.h);
    let scale = terms.iter().map(|v| v.abs()).sum::<f64>().max(lhs.abs());
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok((lhs - rhs).abs() / scale)
}

/// Both sides of the polynomial Marsden identity written in two bases:
/// `∏_{i<n}(x−t+ih)/(b−a+ih)` and
/// `Σⱼ (−1)ʲ Bₙ₋ⱼⁿ(x; [a−(n−1)h, b]; −h) Bⱼⁿ(t; [a, b]; h) / C(n, j)`.
pub fn marsden_poly_sides(n: usize, h: f64, a: f64, b: f64, x: f64, t: f64) -> Result<(f64, f64)> {
    let fam = FamilySpec::polynomial();
    let in_t = BernsteinBasis::new(fam.clone(), n, h, a, b)?.eval_all(t)?;
    let in_x = BernsteinBasis::new(fam, n, -h, a - (n as f64 - 1.0) * h, b)?.eval_all(x)?;
    let lhs: f64 = (0..n)
        .map(|i| (x - t + i as f64 * h) / (b - a + i as f64 * h))
        .product();
    let rhs: f64 = (0..=n)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * in_x[n - j] * in_t[j] / binomial(n, j)
        })
        .sum();
    Ok((lhs, rhs))
}

/// Both sides of `(d(t, x)/d(a, b))ⁿ = Σₖ (−1)ᵏ Bₙ₋ₖⁿ(x) Bₖⁿ(t) / C(n, k)` at `h = 0`.
pub fn marsden_gamma_sides(family: &FamilySpec, n: usize, a: f64, b: f64, x: f64, t: f64) -> Result<(f64, f64)> {
    let basis = BernsteinBasis::new(family.clone(), n, 0.0, a, b)?;
    let bx = basis.eval_all(x)?;
    let bt = basis.eval_all(t)?;
    let lhs = (family.d(t, x) / family.d(a, b)).powi(n as i32);
    let rhs: f64 = (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * bx[n - k] * bt[k] / binomial(n, k)
        })
        .sum();
    Ok((lhs, rhs))
}

/// Control values `bₖ` with `Σₖ bₖ Bₖⁿ ≡ 1`. Polynomial family: all ones.
/// Trigonometric and hyperbolic kinds (even `n`):
/// `bₖ = c_n(h) Σ_P ∏_{(i,j)∈P} κ(ω(t_{i,k} − t_{j,k}))` where
/// `t_{i,k} = a − (k+i−1)h` for `i ≤ n−k` and `b − (i−n+k−1)h` otherwise.
pub fn unity_controls(family: &FamilySpec, n: usize, h: f64, a: f64, b: f64) -> Result<Vec<f64>> {
    if family.kind() == FamilyKind::Polynomial {
        return Ok(vec![1.0; n + 1]);
    }
    if n % 2 == 1 {
        return Err(Error::UnsupportedFamily(format!(
            "the constant function is not in the odd-order space for {family}"
        )));
    }
    let c = unity_normalizer(family, n, h)?;
    let matchings = pairings(n)?;
    (0..=n)
        .map(|k| {
            let t: Vec<f64> = (1..=n)
                .map(|i| {
                    if i <= n - k {
                        a - (k + i - 1) as f64 * h
                    } else {
                        b - (i + k - n - 1) as f64 * h
                    }
                })
                .collect();
            Ok(c * pairing_sum(&matchings, family, &t)?)
        })
        .collect()
}

/// Matrix `E` with `Qⱼ = Σₖ E[j][k] Pₖ` for the degree-raised curve.
///
/// Polynomial family (any `h`), degree `n → n+1`:
/// `Qⱼ = j/(n+1) Pⱼ₋₁ + (n+1−j)/(n+1) Pⱼ`.
///
/// Trigonometric family at `h = 0`, degree `n → n+2`:
/// `Qⱼ = Aⱼ Pⱼ + Mⱼ₋₁ Pⱼ₋₁ + Cⱼ₋₂ Pⱼ₋₂` with
/// `Aₖ = (n+2−k)(n+1−k)/((n+1)(n+2))`,
/// `Mₖ = 2cos(b−a)(k+1)(n+1−k)/((n+1)(n+2))`,
/// `Cₖ = (k+1)(k+2)/((n+1)(n+2))`.
pub fn elevation_matrix(family: &FamilySpec, n: usize, h: f64, a: f64, b: f64) -> Result<Vec<Vec<f64>>> {
    let nf = n as f64;
    match family.kind() {
        FamilyKind::Polynomial => Ok((0..=n + 1)
            .map(|j| {
                let mut row = vec![0.0; n + 1];
                let jf = j as f64;
                if j >= 1 {
                    row[j - 1] = jf / (nf + 1.0);
                }
                if j <= n {
                    row[j] = (nf + 1.0 - jf) / (nf + 1.0);
                }
                row
            })
            .collect()),
        FamilyKind::Trig if h == 0.0 => {
            let den = (nf + 1.0) * (nf + 2.0);
            let c = 2.0 * (b - a).cos();
            Ok((0..=n + 2)
                .map(|j| {
                    let mut row = vec![0.0; n + 1];
                    if j <= n {
                        let k = j as f64;
                        row[j] = (nf + 2.0 - k) * (nf + 1.0 - k) / den;
                    }
                    if (1..=n + 1).contains(&j) {
                        let k = (j - 1) as f64;
                        row[j - 1] = c * (k + 1.0) * (nf + 1.0 - k) / den;
                    }
                    if j >= 2 {
                        let k = (j - 2) as f64;
                        row[j - 2] = (k + 1.0) * (k + 2.0) / den;
                    }
                    row
                })
                .collect())
        }
        FamilyKind::Trig => Err(Error::UnsupportedElevation(format!(
            "trig elevation is implemented for h = 0 only, got h = {h}"
        ))),
        other => Err(Error::UnsupportedElevation(format!(
            "no elevation formula for the {other} family"
        ))),
    }
}

/// Same curve expressed in the next space up: degree `n+1` (polynomial) or
/// `n+2` (trigonometric, `h = 0`).
pub fn degree_elevate(curve: &HGammaCurve) -> Result<HGammaCurve> {
    let (a, b) = curve.interval();
    let e = elevation_matrix(curve.family(), curve.degree(), curve.h(), a, b)?;
    let dim = curve.dim();
    let controls: Vec<Point> = e
        .iter()
        .map(|row| {
            (0..dim)
                .map(|c| {
                    row.iter()
                        .zip(curve.controls())
                        .map(|(w, p)| w * p[c])
                        .sum()
                })
                .collect()
        })
        .collect();
    HGammaCurve::new(curve.family().clone(), curve.h(), a, b, controls)
}
