#![allow(dead_code)]

//! Strict mirrors of the JSON outputs. Deserializing into them rejects
//! missing fields, unknown fields and wrong types; `check` adds the length
//! and value constraints serde cannot express.

pub mod golden;

use serde::Deserialize;
use serde_json::Value;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Deserialize)]
pub struct Guard {
    pub kind: String,
    #[serde(flatten)]
    pub rest: serde_json::Map<String, Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateOut {
    pub n: usize,
    pub h: f64,
    pub verdict: String,
    pub eigenvalues: [Complex; 2],
    pub diagonalizable: bool,
    pub q: Option<Complex>,
    pub qbinomials: Vec<Complex>,
    pub qbinomial_relative: Vec<f64>,
    pub q_verdict: String,
    pub det: f64,
    pub det_scale: f64,
    pub det_verdict: String,
    pub valid: bool,
    pub guards: Vec<Guard>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyOut {
    pub kind: String,
    pub d: Option<f64>,
    pub inner: Option<Box<FamilyOut>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveOut {
    pub family: FamilyOut,
    pub n: usize,
    pub h: f64,
    pub interval: [f64; 2],
    pub controls: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisOut {
    pub x: Vec<f64>,
    #[serde(rename = "B")]
    pub basis: Vec<Vec<f64>>,
    pub unity_weights: Option<Vec<f64>>,
    pub unity: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalOut {
    pub x: f64,
    pub point: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleOut {
    pub x: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubdivideOut {
    pub t: f64,
    pub left: CurveOut,
    pub right: CurveOut,
    pub degenerate: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MidpointOut {
    pub depth: u32,
    pub segments: Vec<CurveOut>,
    pub polygon: Vec<Vec<f64>>,
    pub polygon_deviation: f64,
    pub max_endpoint_gap: f64,
    pub continuous: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlossomOut {
    pub value: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorOut {
    pub error: String,
    pub detail: String,
    pub guards: Vec<Guard>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseOut {
    pub family: FamilyOut,
    pub n: usize,
    pub max_residual: Option<f64>,
    pub threshold: f64,
    pub status: String,
    pub notes: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteOut {
    pub suite: String,
    pub seed: u64,
    pub max_residual: Option<f64>,
    pub pass: bool,
    pub cases: Vec<CaseOut>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyInfoOut {
    pub kind: String,
    pub discrete: bool,
    pub requires_d: Option<bool>,
    pub wraps_inner: bool,
    pub example: FamilyOut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    Validate,
    Basis,
    Curve,
    Eval,
    Sample,
    Subdivide,
    Midpoint,
    Blossom,
    Error,
    Verify,
    Families,
}

const VERDICTS: [&str; 3] = ["independent", "dependent", "borderline"];
const KINDS: [&str; 6] = [
    "polynomial",
    "trig",
    "hyperbolic",
    "trig_discrete",
    "hyperbolic_discrete",
    "exp_weighted",
];
const GUARDS: [&str; 7] = [
    "guard",
    "q_binomial",
    "determinant",
    "borderline",
    "singular_translation",
    "interval",
    "parameter",
];

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> T {
    serde_json::from_str(text).unwrap_or_else(|e| panic!("schema violation: {e}\n{text}"))
}

fn check_family(f: &FamilyOut) {
    assert!(KINDS.contains(&f.kind.as_str()), "kind {}", f.kind);
    if let Some(i) = &f.inner {
        check_family(i);
    }
}

fn check_curve(c: &CurveOut) {
    check_family(&c.family);
    assert_eq!(c.controls.len(), c.n + 1);
    let dim = c.controls[0].len();
    assert!(dim > 0 && c.controls.iter().all(|p| p.len() == dim));
}

fn check_guards(g: &[Guard]) {
    for guard in g {
        assert!(GUARDS.contains(&guard.kind.as_str()), "guard kind {}", guard.kind);
    }
}

/// Panics unless `text` matches the schema.
pub fn check(schema: Schema, text: &str) {
    match schema {
        Schema::Validate => {
            let v: ValidateOut = parse(text);
            for s in [&v.verdict, &v.q_verdict, &v.det_verdict] {
                assert!(VERDICTS.contains(&s.as_str()));
            }
            let expected = if v.q.is_some() { v.n.saturating_sub(1) } else { 0 };
            assert_eq!(v.qbinomials.len(), expected);
            assert_eq!(v.q.is_some(), v.diagonalizable);
            assert_eq!(v.qbinomial_relative.len(), v.qbinomials.len());
            assert_eq!(v.valid, v.guards.is_empty());
            check_guards(&v.guards);
        }
        Schema::Basis => {
            let b: BasisOut = parse(text);
            assert!(b.basis.iter().all(|col| col.len() == b.x.len()));
            assert_eq!(b.unity_weights.is_some(), b.unity.is_some());
            if let (Some(w), Some(u)) = (&b.unity_weights, &b.unity) {
                assert_eq!(w.len(), b.basis.len());
                assert_eq!(u.len(), b.x.len());
            }
        }
        Schema::Curve => check_curve(&parse(text)),
        Schema::Eval => {
            let e: EvalOut = parse(text);
            assert!(!e.point.is_empty());
        }
        Schema::Sample => {
            let s: SampleOut = parse(text);
            assert_eq!(s.x.len(), s.points.len());
        }
        Schema::Subdivide => {
            let s: SubdivideOut = parse(text);
            check_curve(&s.left);
            check_curve(&s.right);
            assert!(matches!(s.degenerate.as_deref(), None | Some("left") | Some("right")));
        }
        Schema::Midpoint => {
            let m: MidpointOut = parse(text);
            assert_eq!(m.segments.len(), 1 << m.depth);
            m.segments.iter().for_each(check_curve);
            let n = m.segments[0].n;
            assert_eq!(m.polygon.len(), m.segments.len() * n + 1);
        }
        Schema::Blossom => {
            let b: BlossomOut = parse(text);
            assert!(!b.value.is_empty());
        }
        Schema::Error => {
            let e: ErrorOut = parse(text);
            assert!(!e.error.is_empty() && !e.detail.is_empty());
            check_guards(&e.guards);
        }
        Schema::Verify => {
            let suites: Vec<SuiteOut> = parse(text);
            for s in &suites {
                for c in &s.cases {
                    check_family(&c.family);
                    assert!(["pass", "fail", "skip"].contains(&c.status.as_str()));
                }
                assert_eq!(s.pass, s.cases.iter().all(|c| c.status != "fail"));
            }
        }
        Schema::Families => {
            let f: Vec<FamilyInfoOut> = parse(text);
            let mut kinds: Vec<&str> = f.iter().map(|i| i.kind.as_str()).collect();
            kinds.sort_unstable();
            let mut want = KINDS.to_vec();
            want.sort_unstable();
            assert_eq!(kinds, want);
            f.iter().for_each(|i| check_family(&i.example));
        }
    }
}
