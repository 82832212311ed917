//! Seeded property suites behind `curvectl verify`.

use std::f64::consts::PI;
use std::fmt::{self, Write};

use clap::ValueEnum;
use num_complex::Complex64;
use hgamma::{
    blossom_diagonal_check, blossom_from_controls, dependence_angle_gap, independence_check,
    marsden_residual, q_binomial, unity_controls, BernsteinBasis, BlossomArg, Error, FamilyKind, FamilySpec,
    HGammaCurve, Result, Sigma, Verdict, DEPENDENCE_RTOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 42;

/// Half-width, in units of `ωh`, of the band around each dependent step in
/// which the q-binomial and determinant verdicts may disagree.
pub const BORDERLINE_BAND: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Marsden,
    Unity,
    Shift,
    Permutation,
    BlossomAxioms,
    IndependenceGrid,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Marsden,
        Suite::Unity,
        Suite::Shift,
        Suite::Permutation,
        Suite::BlossomAxioms,
        Suite::IndependenceGrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Marsden => "marsden",
            Suite::Unity => "unity",
            Suite::Shift => "shift",
            Suite::Permutation => "permutation",
            Suite::BlossomAxioms => "blossom-axioms",
            Suite::IndependenceGrid => "independence-grid",
        }
    }

    fn threshold(self, family: &FamilySpec) -> f64 {
        match self {
            Suite::Unity if family.kind() == FamilyKind::Polynomial => 1e-12,
            Suite::Marsden | Suite::Unity | Suite::Shift => 1e-9,
            Suite::Permutation | Suite::BlossomAxioms => 1e-10,
            Suite::IndependenceGrid => 1e-6,
        }
    }

    fn degrees(self, family: &FamilySpec) -> Vec<usize> {
        match self {
            Suite::Unity if family.kind() != FamilyKind::Polynomial => vec![2, 4, 6],
            Suite::Permutation | Suite::BlossomAxioms => (1..=4).collect(),
            _ => (1..=5).collect(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One representative of every family kind, both weighted variants included.
pub fn default_families() -> Vec<FamilySpec> {
    vec![
        FamilySpec::polynomial(),
        FamilySpec::trig(),
        FamilySpec::hyperbolic(),
        FamilySpec::trig_discrete(0.5).expect("valid d"),
        FamilySpec::hyperbolic_discrete(-0.3).expect("valid d"),
        FamilySpec::exp_weighted(FamilySpec::trig(), None).expect("valid inner"),
        FamilySpec::exp_weighted(FamilySpec::hyperbolic(), Some(0.4)).expect("valid inner"),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub family: FamilySpec,
    pub n: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub status: Status,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub max_residual: f64,
    pub pass: bool,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (seed {})", self.suite, self.seed);
        for c in &self.cases {
            let _ = writeln!(
                out,
                "  {:<44} n={}  max {:.1e} <= {:e}  {}",
                c.family.to_string(),
                c.n,
                c.max_residual,
                c.threshold,
                c.status
            );
            for note in &c.notes {
                let _ = writeln!(out, "      {note}");
            }
        }
        let _ = writeln!(
            out,
            "{}: max residual {:.1e}: {}",
            self.suite,
            self.max_residual,
            if self.pass { "PASS" } else { "FAIL" }
        );
        out
    }
}

#[derive(Debug, Clone, Default)]
pub struct SuiteOptions {
    pub seed: u64,
    pub family: Option<FamilySpec>,
    pub n: Option<usize>,
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    if let Some(n) = opts.n {
        let max = match suite {
            Suite::Permutation | Suite::BlossomAxioms => 6,
            _ => 12,
        };
        if n == 0 || n > max {
            return Err(Error::InvalidParameter(format!(
                "suite {suite} supports 1 <= n <= {max}, got {n}"
            )));
        }
    }
    let families = match &opts.family {
        Some(f) => vec![f.clone()],
        None => default_families(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cases = Vec::new();
    for fam in &families {
        let degrees = opts.n.map(|n| vec![n]).unwrap_or_else(|| suite.degrees(fam));
        let threshold = suite.threshold(fam);
        for n in degrees {
            let outcome = match suite {
                Suite::Marsden => marsden(&mut rng, fam, n).map(|r| (r, Vec::new())),
                Suite::Unity => unity(&mut rng, fam, n).map(|r| (r, Vec::new())),
                Suite::Shift => shift(&mut rng, fam, n).map(|r| (r, Vec::new())),
                Suite::Permutation => permutation(&mut rng, fam, n).map(|r| (r, Vec::new())),
                Suite::BlossomAxioms => blossom_axioms(&mut rng, fam, n).map(|r| (r, Vec::new())),
                Suite::IndependenceGrid => Ok(independence_grid(fam, n)),
            };
            let case = match outcome {
                Ok((r, notes)) => CaseResult {
                    family: fam.clone(),
                    n,
                    max_residual: r,
                    threshold,
                    status: if r <= threshold { Status::Pass } else { Status::Fail },
                    notes,
                },
                Err(e @ (Error::UnsupportedFamily(_) | Error::UnityUndefined { .. })) => CaseResult {
                    family: fam.clone(),
                    n,
                    max_residual: 0.0,
                    threshold,
                    status: Status::Skip,
                    notes: vec![e.to_string()],
                },
                Err(e) => CaseResult {
                    family: fam.clone(),
                    n,
                    max_residual: f64::INFINITY,
                    threshold,
                    status: Status::Fail,
                    notes: vec![e.to_string()],
                },
            };
            cases.push(case);
        }
    }
    let max_residual = cases.iter().map(|c| c.max_residual).fold(0.0, f64::max);
    Ok(SuiteReport {
        suite,
        seed: opts.seed,
        max_residual,
        pass: cases.iter().all(|c| c.status != Status::Fail),
        cases,
    })
}

/// Random `(h, a, b)` accepted by the validator, with `b − a` in `[0.4, 1.4)`.
fn random_frame(rng: &mut impl Rng, family: &FamilySpec, n: usize) -> Result<(f64, f64, f64)> {
    let mut last = None;
    for _ in 0..1000 {
        let h = rng.random_range(-0.3..0.3);
        let a = rng.random_range(-1.0..0.5);
        let b = a + rng.random_range(0.4..1.4);
        match BernsteinBasis::new(family.clone(), n, h, a, b) {
            Ok(_) => return Ok((h, a, b)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn random_basis(rng: &mut impl Rng, family: &FamilySpec, n: usize) -> Result<BernsteinBasis> {
    let (h, a, b) = random_frame(rng, family, n)?;
    BernsteinBasis::new(family.clone(), n, h, a, b)
}

fn random_curve(rng: &mut impl Rng, family: &FamilySpec, n: usize) -> Result<HGammaCurve> {
    let (h, a, b) = random_frame(rng, family, n)?;
    let controls = (0..=n)
        .map(|_| vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)])
        .collect();
    HGammaCurve::new(family.clone(), h, a, b, controls)
}

fn sup(p: &[f64]) -> f64 {
    p.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn gap(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn marsden(rng: &mut impl Rng, family: &FamilySpec, n: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let basis = random_basis(rng, family, n)?;
        let (a, b) = basis.interval();
        for _ in 0..20 {
            let t = rng.random_range(a..b);
            let x = rng.random_range(-2.0..2.0);
            worst = worst.max(marsden_residual(&basis, x, t)?);
        }
    }
    Ok(worst)
}

fn unity(rng: &mut impl Rng, family: &FamilySpec, n: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let basis = random_basis(rng, family, n)?;
        let (a, b) = basis.interval();
        let weights = unity_controls(family, n, basis.h(), a, b)?;
        for i in 0..100 {
            let x = a + (b - a) * i as f64 / 99.0;
            let s: f64 = basis.eval_all(x)?.iter().zip(&weights).map(|(v, w)| v * w).sum();
            worst = worst.max((s - 1.0).abs());
        }
    }
    Ok(worst)
}

fn shift(rng: &mut impl Rng, family: &FamilySpec, n: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let basis = random_basis(rng, family, n)?;
        let (a, b) = basis.interval();
        let delta = rng.random_range(-2.0..2.0);
        let moved = BernsteinBasis::new(family.clone(), n, basis.h(), a + delta, b + delta)?;
        for _ in 0..20 {
            let x = rng.random_range(a..b);
            let p = basis.eval_all(x)?;
            let q = moved.eval_all(x + delta)?;
            worst = worst.max(gap(&p, &q) / (1.0 + sup(&p)));
        }
    }
    Ok(worst)
}

fn permutation(rng: &mut impl Rng, family: &FamilySpec, n: usize) -> Result<f64> {
    let orders = Sigma::all(n);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let curve = random_curve(rng, family, n)?;
        let (a, b) = curve.interval();
        for _ in 0..10 {
            let x = rng.random_range(a..b);
            let base = curve.eval(x)?;
            for sigma in &orders {
                let p = curve.eval_sigma(x, sigma)?;
                worst = worst.max(gap(&p, &base) / (1.0 + sup(&base)));
            }
        }
    }
    Ok(worst)
}

fn raw_arg(rng: &mut impl Rng) -> BlossomArg {
    BlossomArg::raw(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn blossom_axioms(rng: &mut impl Rng, family: &FamilySpec, n: usize) -> Result<f64> {
    let orders = Sigma::all(n);
    let mut worst: f64 = 0.0;
    for _ in 0..25 {
        let curve = random_curve(rng, family, n)?;
        let args: Vec<BlossomArg> = (0..n).map(|_| raw_arg(rng)).collect();
        let base = blossom_from_controls(&curve, &args)?;
        for sigma in &orders {
            let permuted: Vec<BlossomArg> = sigma.as_slice().iter().map(|&i| args[i]).collect();
            let v = blossom_from_controls(&curve, &permuted)?;
            worst = worst.max(gap(&v, &base) / (1.0 + sup(&base)));
        }

        let slot = rng.random_range(0..n);
        let (alpha, beta) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let (w1, w2) = (raw_arg(rng), raw_arg(rng));
        let ((u1, v1), (u2, v2)) = (w1.resolve(family), w2.resolve(family));
        let mut mixed = args.clone();
        mixed[slot] = BlossomArg::raw(alpha * u1 + beta * u2, alpha * v1 + beta * v2);
        let mut first = args.clone();
        first[slot] = w1;
        let mut second = args.clone();
        second[slot] = w2;
        let lhs = blossom_from_controls(&curve, &mixed)?;
        let g1 = blossom_from_controls(&curve, &first)?;
        let g2 = blossom_from_controls(&curve, &second)?;
        let rhs: Vec<f64> = g1.iter().zip(&g2).map(|(p, q)| alpha * p + beta * q).collect();
        worst = worst.max(gap(&lhs, &rhs) / (1.0 + sup(&g1).max(sup(&g2))));

        let (a, b) = curve.interval();
        let t = rng.random_range(a..b);
        let g = curve.eval(t)?;
        worst = worst.max(blossom_diagonal_check(&curve, t)? / (1.0 + sup(&g)));
    }
    Ok(worst)
}

/// Steps swept by the independence grid.
pub const GRID_SPAN: f64 = PI;
pub const GRID_POINTS: usize = 801;

fn min_relative(family: &FamilySpec, n: usize, h: f64) -> f64 {
    independence_check(family, n, h)
        .map(|r| r.qbinomial_relative.iter().copied().fold(f64::INFINITY, f64::min))
        .unwrap_or(f64::INFINITY)
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - r * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + r * (hi - lo);
            fd = f(d);
        }
        if hi - lo <= 1e-14 * (1.0 + lo.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Steps in `[−GRID_SPAN, GRID_SPAN]` where some `[n k]_q` has a root.
/// Candidates are the angles `ωh = πp/m`, `m ≤ n`; each is kept when a
/// Gaussian binomial at `q = e^{2πip/m}` vanishes.
fn expected_dependent_steps(family: &FamilySpec, n: usize) -> Vec<f64> {
    let rotation = family.inner().unwrap_or(family);
    if !matches!(rotation.kind(), FamilyKind::Trig | FamilyKind::TrigDiscrete) {
        return Vec::new();
    }
    let omega = rotation.omega();
    let mut out: Vec<f64> = Vec::new();
    for m in 2..=n as i64 {
        let top = (GRID_SPAN * omega.abs() * m as f64 / PI).floor() as i64;
        for p in -top..=top {
            let q = Complex64::from_polar(1.0, 2.0 * PI * p as f64 / m as f64);
            if !(1..n).any(|k| q_binomial(n, k, q).norm() < 1e-9) {
                continue;
            }
            let h = PI * p as f64 / (m as f64 * omega);
            if h.abs() < GRID_SPAN && !out.iter().any(|o| (o - h).abs() < 1e-9) {
                out.push(h);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Sweeps `h` over a grid, refines every local minimum of the smallest
/// relative q-binomial, and checks that the dependent steps found are the
/// analytic ones and that verdicts only disagree close to them.
fn independence_grid(family: &FamilySpec, n: usize) -> (f64, Vec<String>) {
    let hs: Vec<f64> = (0..GRID_POINTS)
        .map(|i| -GRID_SPAN + 2.0 * GRID_SPAN * i as f64 / (GRID_POINTS - 1) as f64)
        .collect();
    let fs: Vec<f64> = hs.iter().map(|&h| min_relative(family, n, h)).collect();
    let mut notes = Vec::new();
    let mut worst: f64 = 0.0;

    let mut found: Vec<f64> = Vec::new();
    for i in 1..hs.len() - 1 {
        if !(fs[i] <= fs[i - 1] && fs[i] <= fs[i + 1] && fs[i] < 0.5) {
            continue;
        }
        let h = golden_min(|h| min_relative(family, n, h), hs[i - 1], hs[i + 1]);
        if min_relative(family, n, h) > DEPENDENCE_RTOL || found.iter().any(|q| (q - h).abs() < 1e-6) {
            continue;
        }
        found.push(h);
        let verdict = independence_check(family, n, h).map(|r| r.verdict);
        match dependence_angle_gap(family, n, h) {
            Some(g) => {
                worst = worst.max(g);
                notes.push(format!("dependent at h = {h:.9} (angle gap {g:.1e})"));
            }
            None => {
                worst = f64::INFINITY;
                notes.push(format!("unexpected dependence at h = {h:.9}"));
            }
        }
        if verdict != Ok(Verdict::Dependent) {
            worst = f64::INFINITY;
            notes.push(format!("verdict at h = {h:.9} is {verdict:?}"));
        }
    }

    let expected = expected_dependent_steps(family, n);
    let missed: Vec<f64> = expected
        .iter()
        .copied()
        .filter(|e| !found.iter().any(|h| (h - e).abs() < 1e-6))
        .collect();
    if !missed.is_empty() {
        worst = f64::INFINITY;
        notes.push(format!("missed {} analytic dependent steps, first at h = {:.9}", missed.len(), missed[0]));
    }

    let mut stray = 0;
    for &h in &hs {
        let verdict = match independence_check(family, n, h) {
            Ok(r) => r.verdict,
            Err(_) => continue,
        };
        if verdict == Verdict::Independent {
            continue;
        }
        let near = dependence_angle_gap(family, n, h).is_some_and(|g| g <= BORDERLINE_BAND);
        if !near {
            stray += 1;
        }
    }
    if stray > 0 {
        worst = f64::INFINITY;
        notes.push(format!("{stray} grid steps are not independent away from every dependent step"));
    }
    (worst, notes)
}
