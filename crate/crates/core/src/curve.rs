//! h–γ Bézier curves: evaluation tableaus for any insertion order, subdivision,
//! recursive midpoint subdivision and interpolating constructors.

use serde::{Deserialize, Serialize};

use crate::blossom::BlossomArg;
use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::independence::{guard_fails, guard_violations, validate_curve_params, GuardViolation};
use crate::tol::{max_abs_diff, norm2};

/// A point in the curve's value space (any dimension `m ≥ 1`).
pub type Point = Vec<f64>;

/// Argument insertion order for the evaluation tableau. Step `k` (0-based)
/// inserts `Γ(x − σ[k]·h)`; `σ` is a permutation of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sigma(Vec<usize>);

impl Sigma {
    pub fn identity(n: usize) -> Self {
        Sigma((0..n).collect())
    }

    /// `σ(i) = n + 1 − i` in 1-based terms.
    pub fn reverse(n: usize) -> Self {
        Sigma((0..n).rev().collect())
    }

    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter(format!(
                    "{perm:?} is not a permutation of 0..{}",
                    perm.len()
                )));
            }
        }
        Ok(Sigma(perm))
    }

    /// All `n!` permutations (lexicographic).
    pub fn all(n: usize) -> Vec<Sigma> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Sigma(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    fn args(&self, x: f64, h: f64) -> Vec<BlossomArg> {
        self.0
            .iter()
            .map(|&s| BlossomArg::on_curve(x - s as f64 * h))
            .collect()
    }
}

/// Interpolation weights of a tableau run: `P_i^{k+1} = l·P_i^k + r·P_{i+1}^k`
/// with `l = d(u, b−ih)/d(a−(i+k)h, b−ih)` and `r = d(a−(i+k)h, u)/d(…)`.
pub(crate) struct Frame<'a> {
    pub family: &'a FamilySpec,
    pub h: f64,
    pub a: f64,
    pub b: f64,
}

impl Frame<'_> {
    pub(crate) fn step(&self, n: usize, k: usize, arg: &BlossomArg) -> Result<Vec<(f64, f64)>> {
        (0..n - k)
            .map(|i| {
                let lo = self.a - (i + k) as f64 * self.h;
                let hi = self.b - i as f64 * self.h;
                if let Some(value) = guard_fails(self.family, lo, hi) {
                    return Err(Error::degenerate(
                        format!("tableau denominator d({lo}, {hi}) vanishes"),
                        vec![GuardViolation::Guard {
                            i,
                            j: i + k,
                            a: lo,
                            b: hi,
                            value,
                        }],
                    ));
                }
                let den = self.family.d(lo, hi);
                let (l, r) = match *arg {
                    BlossomArg::OnCurve { t } => (self.family.d(t, hi), self.family.d(lo, t)),
                    BlossomArg::Raw { u, v } => (
                        self.family.d_pair((u, v), hi),
                        -self.family.d_pair((u, v), lo),
                    ),
                };
                Ok((l / den, r / den))
            })
            .collect()
    }

    pub(crate) fn weights(&self, n: usize, args: &[BlossomArg]) -> Result<Vec<Vec<(f64, f64)>>> {
        args.iter()
            .enumerate()
            .map(|(k, arg)| self.step(n, k, arg))
            .collect()
    }
}

/// The triangular array `P_i^k` of one evaluation run.
#[derive(Debug, Clone, PartialEq)]
pub struct Tableau {
    pub sigma: Sigma,
    pub x: f64,
    /// `levels[k][i] = P_i^k`; level 0 holds the control points.
    pub levels: Vec<Vec<Point>>,
}

impl Tableau {
    pub fn apex(&self) -> &Point {
        &self.levels[self.levels.len() - 1][0]
    }
}

/// An h–γ Bézier curve `G(x) = Σ Pₖ Bₖⁿ(x, [a, b]; γ, h)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveSpec", into = "CurveSpec")]
pub struct HGammaCurve {
    family: FamilySpec,
    h: f64,
    a: f64,
    b: f64,
    controls: Vec<Point>,
}

/// Wire form `{"family":…, "n":3, "h":0.1, "interval":[0,1], "controls":[[x,y],…]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub family: FamilySpec,
    pub n: usize,
    pub h: f64,
    pub interval: [f64; 2],
    pub controls: Vec<Vec<f64>>,
}

impl TryFrom<CurveSpec> for HGammaCurve {
    type Error = Error;

    fn try_from(spec: CurveSpec) -> Result<Self> {
        if spec.controls.len() != spec.n + 1 {
            return Err(Error::DimensionMismatch {
                expected: spec.n + 1,
                found: spec.controls.len(),
            });
        }
        HGammaCurve::new(
            spec.family,
            spec.h,
            spec.interval[0],
            spec.interval[1],
            spec.controls,
        )
    }
}

impl From<HGammaCurve> for CurveSpec {
    fn from(c: HGammaCurve) -> Self {
        CurveSpec {
            n: c.degree(),
            family: c.family,
            h: c.h,
            interval: [c.a, c.b],
            controls: c.controls,
        }
    }
}

fn check_points(points: &[Point]) -> Result<usize> {
    let m = points.first().map(Vec::len).unwrap_or(0);
    if m == 0 {
        return Err(Error::InvalidParameter(
            "control points must be nonempty vectors".into(),
        ));
    }
    for p in points {
        if p.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: p.len(),
            });
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "control point coordinates must be finite".into(),
            ));
        }
    }
    Ok(m)
}

/// Turns a violation list into the matching error.
pub(crate) fn violations_error(what: &str, guards: Vec<GuardViolation>) -> Error {
    let dependent = guards.iter().any(|g| {
        matches!(
            g,
            GuardViolation::QBinomial { .. }
                | GuardViolation::Determinant { .. }
                | GuardViolation::Borderline { .. }
        )
    });
    let detail = format!(
        "{what}: {}",
        guards
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ")
    );
    if dependent {
        Error::DependentBasis { detail, guards }
    } else {
        Error::degenerate(detail, guards)
    }
}

impl HGammaCurve {
    /// Builds a curve of degree `controls.len() − 1` over `[a, b]`, rejecting
    /// configurations that fail [`validate_curve_params`].
    pub fn new(family: FamilySpec, h: f64, a: f64, b: f64, controls: Vec<Point>) -> Result<Self> {
        if controls.len() < 2 {
            return Err(Error::InvalidParameter(
                "a curve needs at least two control points (degree >= 1)".into(),
            ));
        }
        check_points(&controls)?;
        let n = controls.len() - 1;
        let violations = validate_curve_params(&family, n, h, a, b);
        if !violations.is_empty() {
            return Err(violations_error(
                &format!("curve on [{a}, {b}] with n = {n}, h = {h}"),
                violations,
            ));
        }
        Ok(HGammaCurve {
            family,
            h,
            a,
            b,
            controls,
        })
    }

    /// Same family, degree and step as `self` (so the basis is already known
    /// to be independent); only the interval guards are checked.
    fn sibling(&self, a: f64, b: f64, controls: Vec<Point>) -> Result<Self> {
        let n = self.degree();
        let mut violations = Vec::new();
        if a == b {
            violations.push(GuardViolation::Interval { a, b });
        }
        violations.extend(guard_violations(&self.family, n, self.h, a, b));
        if !violations.is_empty() {
            return Err(violations_error(
                &format!("sub-interval [{a}, {b}]"),
                violations,
            ));
        }
        Ok(HGammaCurve {
            family: self.family.clone(),
            h: self.h,
            a,
            b,
            controls,
        })
    }

    /// Zero-length placeholder at `t`, returned by a split at an endpoint.
    fn stub(&self, t: f64, value: Point) -> Self {
        HGammaCurve {
            family: self.family.clone(),
            h: self.h,
            a: t,
            b: t,
            controls: vec![value; self.degree() + 1],
        }
    }

    pub fn family(&self) -> &FamilySpec {
        &self.family
    }

    pub fn degree(&self) -> usize {
        self.controls.len() - 1
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn controls(&self) -> &[Point] {
        &self.controls
    }

    pub fn dim(&self) -> usize {
        self.controls[0].len()
    }

    /// True for the zero-length stub produced by splitting at an endpoint.
    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn spec(&self) -> CurveSpec {
        self.clone().into()
    }

    pub(crate) fn frame(&self) -> Frame<'_> {
        Frame {
            family: &self.family,
            h: self.h,
            a: self.a,
            b: self.b,
        }
    }

    /// Runs the tableau with the control points at level 0 and `args`
    /// inserted in order; returns every level.
    pub(crate) fn run_tableau(&self, args: &[BlossomArg]) -> Result<Vec<Vec<Point>>> {
        let n = self.degree();
        let frame = self.frame();
        let mut levels = Vec::with_capacity(args.len() + 1);
        levels.push(self.controls.clone());
        for (k, arg) in args.iter().enumerate() {
            let w = frame.step(n, k, arg)?;
            let prev: &Vec<Point> = &levels[k];
            let next = w
                .iter()
                .enumerate()
                .map(|(i, &(l, r))| lerp(&prev[i], &prev[i + 1], l, r))
                .collect();
            levels.push(next);
        }
        Ok(levels)
    }

    /// `G(x)` through the tableau with the natural insertion order.
    pub fn eval(&self, x: f64) -> Result<Point> {
        self.eval_sigma(x, &Sigma::identity(self.degree()))
    }

    /// `G(x)` through the tableau with insertion order `sigma`.
    pub fn eval_sigma(&self, x: f64, sigma: &Sigma) -> Result<Point> {
        let n = self.degree();
        if sigma.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: sigma.len(),
            });
        }
        let frame = self.frame();
        let mut cur = self.controls.clone();
        for (k, arg) in sigma.args(x, self.h).iter().enumerate() {
            let w = frame.step(n, k, arg)?;
            for (i, (l, r)) in w.into_iter().enumerate() {
                let (head, tail) = cur.split_at_mut(i + 1);
                for (p, q) in head[i].iter_mut().zip(&tail[0]) {
                    *p = l * *p + r * q;
                }
            }
            cur.pop();
        }
        Ok(cur.pop().expect("apex"))
    }

    pub fn tableau(&self, x: f64, sigma: &Sigma) -> Result<Tableau> {
        if sigma.len() != self.degree() {
            return Err(Error::ArityMismatch {
                expected: self.degree(),
                found: sigma.len(),
            });
        }
        Ok(Tableau {
            sigma: sigma.clone(),
            x,
            levels: self.run_tableau(&sigma.args(x, self.h))?,
        })
    }

    /// Evaluates at `samples` equally spaced parameters across `[a, b]`.
    pub fn sample(&self, samples: usize) -> Result<(Vec<f64>, Vec<Point>)> {
        let xs = linspace(self.a, self.b, samples);
        let pts = xs.iter().map(|&x| self.eval(x)).collect::<Result<_>>()?;
        Ok((xs, pts))
    }

    /// Splits at `t`: the left curve lives on `[a, t]`, the right on `[t, b]`.
    /// Left controls come from the natural-order tableau (`L_k = P_0^k(t)`),
    /// right controls from the reversed one (`R_k = P_k^{n−k}(t)`). Splitting at
    /// an endpoint returns the parent and a zero-length stub.
    pub fn subdivide(&self, t: f64) -> Result<Subdivision> {
        if !t.is_finite() {
            return Err(Error::InvalidParameter(format!("split point must be finite, got {t}")));
        }
        let n = self.degree();
        if t == self.a {
            return Ok(Subdivision {
                left: self.stub(t, self.controls[0].clone()),
                right: self.clone(),
            });
        }
        if t == self.b {
            return Ok(Subdivision {
                left: self.clone(),
                right: self.stub(t, self.controls[n].clone()),
            });
        }
        let fwd = self.tableau(t, &Sigma::identity(n))?;
        let left: Vec<Point> = (0..=n).map(|k| fwd.levels[k][0].clone()).collect();
        let rev = self.tableau(t, &Sigma::reverse(n))?;
        let right: Vec<Point> = (0..=n).map(|k| rev.levels[n - k][k].clone()).collect();
        Ok(Subdivision {
            left: self.sibling(self.a, t, left)?,
            right: self.sibling(t, self.b, right)?,
        })
    }

    /// `2^depth` segments over the dyadic subintervals of `[a, b]`.
    pub fn midpoint_subdivision(&self, depth: u32) -> Result<SegmentTree> {
        if depth > 20 {
            return Err(Error::InvalidParameter(format!(
                "midpoint subdivision depth must be <= 20, got {depth}"
            )));
        }
        let mut segments = vec![self.clone()];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(segments.len() * 2);
            for seg in &segments {
                let mid = 0.5 * (seg.a + seg.b);
                let split = seg.subdivide(mid).map_err(|e| match e {
                    Error::DegenerateConfiguration { detail, guards } => Error::DegenerateConfiguration {
                        detail: format!("splitting [{}, {}] at {mid}: {detail}", seg.a, seg.b),
                        guards,
                    },
                    other => other,
                })?;
                if split.left.is_degenerate() || split.right.is_degenerate() {
                    return Err(Error::degenerate(
                        format!("dyadic interval [{}, {}] has zero length", seg.a, seg.b),
                        vec![GuardViolation::Interval { a: seg.a, b: seg.b }],
                    ));
                }
                next.push(split.left);
                next.push(split.right);
            }
            segments = next;
        }
        Ok(SegmentTree { depth, segments })
    }

    /// Largest distance between the curve and the control polygons after
    /// `depth` midpoint subdivisions, using 64 samples per segment.
    pub fn polygon_deviation(&self, depth: u32) -> Result<f64> {
        self.midpoint_subdivision(depth)?.deviation_from(self, 64)
    }

    /// Finite-difference estimate of `M̃ = max|G′| + n·M`, the constant in the
    /// uniform bound `|G − L| ≤ (b − a) M̃ / 2^m` for the control polygons after
    /// `m` midpoint subdivisions. `M` bounds the blossom with one argument
    /// replaced by `Γ′`; it is maximized over a `grid`-point lattice.
    pub fn convergence_constant(&self, grid: usize) -> Result<f64> {
        let (a, b) = (self.a, self.b);
        let n = self.degree();
        let h = self.h;
        let span = (b - a).abs();
        let step = 1e-5 * span.max(1e-3);

        let xs = linspace(a, b, (8 * grid).max(64));
        let mut max_deriv: f64 = 0.0;
        for &x in &xs {
            let p = self.eval(x + step)?;
            let q = self.eval(x - step)?;
            let d: Vec<f64> = p.iter().zip(&q).map(|(p, q)| (p - q) / (2.0 * step)).collect();
            max_deriv = max_deriv.max(norm2(&d));
        }

        let gamma_prime = |z: f64| {
            let (p1, p2) = self.family.eval(z + step);
            let (q1, q2) = self.family.eval(z - step);
            BlossomArg::raw((p1 - q1) / (2.0 * step), (p2 - q2) / (2.0 * step))
        };
        let lattice = linspace(a, b, grid.max(2));
        let mut m: f64 = 0.0;
        for k in 0..n {
            for &y in &lattice {
                for &x in &lattice {
                    for &z in &lattice {
                        let mut args: Vec<BlossomArg> = ((k + 1)..n)
                            .map(|j| BlossomArg::on_curve(y - j as f64 * h))
                            .collect();
                        args.extend((0..k).map(|j| BlossomArg::on_curve(x - j as f64 * h)));
                        args.push(gamma_prime(z - k as f64 * h));
                        let levels = self.run_tableau(&args)?;
                        m = m.max(norm2(&levels[n][0]));
                    }
                }
            }
        }
        Ok(max_deriv + n as f64 * m)
    }
}

fn lerp(p: &[f64], q: &[f64], l: f64, r: f64) -> Point {
    p.iter().zip(q).map(|(x, y)| l * x + r * y).collect()
}

pub(crate) fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..count)
            .map(|i| {
                if i + 1 == count {
                    b
                } else {
                    a + (b - a) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

/// Result of [`HGammaCurve::subdivide`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subdivision {
    pub left: HGammaCurve,
    pub right: HGammaCurve,
}

/// Output of recursive midpoint subdivision: segments over
/// `[tᵢ, tᵢ₊₁]`, `tᵢ = a + i(b − a)/2^depth`, in order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentTree {
    pub depth: u32,
    pub segments: Vec<HGammaCurve>,
}

impl SegmentTree {
    /// Largest gap between the last control point of a segment and the first
    /// of the next.
    pub fn max_endpoint_gap(&self) -> f64 {
        self.segments
            .windows(2)
            .map(|w| max_abs_diff(&w[0].controls[w[0].degree()], &w[1].controls[0]))
            .fold(0.0, f64::max)
    }

    /// All control polygons joined into one vertex list (shared endpoints
    /// appear once).
    pub fn polygon(&self) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for (s, seg) in self.segments.iter().enumerate() {
            let skip = usize::from(s > 0);
            out.extend(seg.controls.iter().skip(skip).cloned());
        }
        out
    }

    /// Max distance between `curve` and the polygons, sampling each segment at
    /// `samples + 1` parameters. Within a segment the polygon is parameterized
    /// uniformly per leg: leg `i` covers the `i`-th of `n` equal parameter slices.
    pub fn deviation_from(&self, curve: &HGammaCurve, samples: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for seg in &self.segments {
            let n = seg.degree();
            for s in 0..=samples {
                let tau = s as f64 / samples as f64;
                let x = seg.a + tau * (seg.b - seg.a);
                let scaled = tau * n as f64;
                let leg = (scaled.floor() as usize).min(n - 1);
                let local = scaled - leg as f64;
                let lp = lerp(&seg.controls[leg], &seg.controls[leg + 1], 1.0 - local, local);
                let g = curve.eval(x)?;
                let diff: Vec<f64> = g.iter().zip(&lp).map(|(g, l)| g - l).collect();
                worst = worst.max(norm2(&diff));
            }
        }
        Ok(worst)
    }
}

/// The curve on `[a, a − nh]` whose control points are interpolated at
/// `a − kh`, `k = 0..n`.
pub fn make_interpolating_curve(
    family: FamilySpec,
    h: f64,
    a: f64,
    points: Vec<Point>,
) -> Result<HGammaCurve> {
    if h == 0.0 || !h.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "interpolation needs a finite nonzero step, got h = {h}"
        )));
    }
    let n = points.len().saturating_sub(1);
    let b = a - n as f64 * h;
    let curve = HGammaCurve::new(family, h, a, b, points)?;
    for (k, p) in curve.controls.iter().enumerate() {
        let g = curve.eval(a - k as f64 * h)?;
        let scale = 1.0 + p.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let err = max_abs_diff(&g, p);
        if err > 1e-8 * scale {
            return Err(Error::degenerate(
                format!("interpolation check failed at node {k}: error {err:e}"),
                Vec::new(),
            ));
        }
    }
    Ok(curve)
}
