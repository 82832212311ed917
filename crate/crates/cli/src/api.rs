//! Request and response bodies shared by the command line and the service.

use hgamma::{
    blossom_from_controls, degree_elevate, independence_check, independence_violations,
    make_interpolating_curve, unity_controls, validate_curve_params, BernsteinBasis, BlossomArg,
    CurveSpec, Error, FamilyKind, FamilySpec, GuardViolation, HGammaCurve, IndependenceReport,
    Point, Result, Sigma, Tolerance,
};
use serde::{Deserialize, Serialize};

pub const DEFAULT_BASIS_SAMPLES: usize = 101;
pub const DEFAULT_CURVE_SAMPLES: usize = 256;

/// `{"error": code, "detail": message, "guards": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub detail: String,
    pub guards: Vec<GuardViolation>,
}

impl From<&Error> for ErrorBody {
    fn from(e: &Error) -> Self {
        ErrorBody {
            error: e.code().to_string(),
            detail: e.to_string(),
            guards: e.guards().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyInfo {
    pub kind: FamilyKind,
    pub discrete: bool,
    /// Whether `d` is required (`true`), optional (`null`) or rejected (`false`).
    pub requires_d: Option<bool>,
    pub wraps_inner: bool,
    pub example: FamilySpec,
}

pub fn families() -> Vec<FamilyInfo> {
    FamilyKind::ALL
        .into_iter()
        .map(|kind| {
            let example = match kind {
                FamilyKind::Polynomial => FamilySpec::polynomial(),
                FamilyKind::Trig => FamilySpec::trig(),
                FamilyKind::Hyperbolic => FamilySpec::hyperbolic(),
                FamilyKind::TrigDiscrete => FamilySpec::trig_discrete(0.5).expect("valid d"),
                FamilyKind::HyperbolicDiscrete => {
                    FamilySpec::hyperbolic_discrete(0.5).expect("valid d")
                }
                FamilyKind::ExpWeighted => {
                    FamilySpec::exp_weighted(FamilySpec::trig(), None).expect("valid inner")
                }
            };
            FamilyInfo {
                kind,
                discrete: kind.is_discrete(),
                requires_d: match kind {
                    FamilyKind::TrigDiscrete | FamilyKind::HyperbolicDiscrete => Some(true),
                    FamilyKind::ExpWeighted => None,
                    _ => Some(false),
                },
                wraps_inner: kind == FamilyKind::ExpWeighted,
                example,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateRequest {
    pub family: FamilySpec,
    pub n: usize,
    pub h: f64,
    #[serde(default)]
    pub interval: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateResponse {
    #[serde(flatten)]
    pub report: IndependenceReport,
    pub valid: bool,
    pub guards: Vec<GuardViolation>,
}

/// Independence report plus every violated guard. With an interval, the
/// tableau guards on `[a, b]` are checked as well.
pub fn validate(req: &ValidateRequest) -> Result<ValidateResponse> {
    let report = independence_check(&req.family, req.n, req.h)?;
    let guards = match req.interval {
        Some([a, b]) => validate_curve_params(&req.family, req.n, req.h, a, b),
        None => independence_violations(&req.family, req.n, req.h),
    };
    Ok(ValidateResponse {
        valid: guards.is_empty(),
        report,
        guards,
    })
}

fn default_basis_samples() -> usize {
    DEFAULT_BASIS_SAMPLES
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisRequest {
    pub family: FamilySpec,
    pub n: usize,
    pub h: f64,
    pub interval: [f64; 2],
    #[serde(default = "default_basis_samples")]
    pub samples: usize,
    #[serde(default)]
    pub unity: bool,
}

/// `B[k][i]` is `B_k(x[i])`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisResponse {
    pub x: Vec<f64>,
    #[serde(rename = "B")]
    pub basis: Vec<Vec<f64>>,
    /// Coefficients `b_k` with `Σ b_k B_k ≡ 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unity_weights: Option<Vec<f64>>,
    /// `Σ b_k B_k(x[i])`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unity: Option<Vec<f64>>,
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    Ok(())
}

pub fn basis_sample(req: &BasisRequest) -> Result<BasisResponse> {
    check_samples(req.samples)?;
    let [a, b] = req.interval;
    let basis = BernsteinBasis::new(req.family.clone(), req.n, req.h, a, b)?;
    let (x, rows) = basis.sample(req.samples)?;
    let columns = (0..=req.n)
        .map(|k| rows.iter().map(|r| r[k]).collect())
        .collect();
    let (unity_weights, unity) = if req.unity {
        let w = unity_controls(&req.family, req.n, req.h, a, b)?;
        let sums = rows
            .iter()
            .map(|r| r.iter().zip(&w).map(|(v, c)| v * c).sum())
            .collect();
        (Some(w), Some(sums))
    } else {
        (None, None)
    };
    Ok(BasisResponse {
        x,
        basis: columns,
        unity_weights,
        unity,
    })
}

pub fn curve_from(spec: CurveSpec) -> Result<HGammaCurve> {
    HGammaCurve::try_from(spec)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalRequest {
    pub curve: CurveSpec,
    pub x: f64,
    /// Insertion order as a permutation of `1..=n`; natural order if absent.
    #[serde(default)]
    pub sigma: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalResponse {
    pub x: f64,
    pub point: Point,
}

pub fn eval(req: &EvalRequest) -> Result<EvalResponse> {
    let curve = curve_from(req.curve.clone())?;
    let point = match &req.sigma {
        None => curve.eval(req.x)?,
        Some(perm) => {
            let zero_based = perm
                .iter()
                .map(|&i| {
                    i.checked_sub(1).ok_or_else(|| {
                        Error::InvalidParameter("sigma entries are 1-based".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let sigma = Sigma::new(zero_based)?;
            if sigma.len() != curve.degree() {
                return Err(Error::DimensionMismatch {
                    expected: curve.degree(),
                    found: sigma.len(),
                });
            }
            curve.eval_sigma(req.x, &sigma)?
        }
    };
    Ok(EvalResponse { x: req.x, point })
}

fn default_curve_samples() -> usize {
    DEFAULT_CURVE_SAMPLES
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRequest {
    pub curve: CurveSpec,
    #[serde(default = "default_curve_samples")]
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleResponse {
    pub x: Vec<f64>,
    pub points: Vec<Point>,
}

pub fn sample(curve: &HGammaCurve, samples: usize) -> Result<SampleResponse> {
    check_samples(samples)?;
    let (x, points) = curve.sample(samples)?;
    Ok(SampleResponse { x, points })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubdivideRequest {
    pub curve: CurveSpec,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubdivideResponse {
    pub t: f64,
    pub left: HGammaCurve,
    pub right: HGammaCurve,
    /// The zero-length half produced by a split at an endpoint. It is not a
    /// valid curve and is rejected if sent back.
    pub degenerate: Option<Side>,
}

pub fn subdivide(curve: &HGammaCurve, t: f64) -> Result<SubdivideResponse> {
    let split = curve.subdivide(t)?;
    let degenerate = if split.left.is_degenerate() {
        Some(Side::Left)
    } else if split.right.is_degenerate() {
        Some(Side::Right)
    } else {
        None
    };
    Ok(SubdivideResponse {
        t,
        left: split.left,
        right: split.right,
        degenerate,
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MidpointRequest {
    pub curve: CurveSpec,
    pub depth: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct MidpointResponse {
    pub depth: u32,
    pub segments: Vec<HGammaCurve>,
    /// Joined control polygons, shared endpoints listed once.
    pub polygon: Vec<Point>,
    /// Max distance between the curve and the joined polygons.
    pub polygon_deviation: f64,
    pub max_endpoint_gap: f64,
    /// Adjacent segments share endpoints within the active tolerance.
    pub continuous: bool,
}

pub fn midpoint(curve: &HGammaCurve, depth: u32, tol: &Tolerance) -> Result<MidpointResponse> {
    let tree = curve.midpoint_subdivision(depth)?;
    let polygon_deviation = tree.deviation_from(curve, 64)?;
    let max_endpoint_gap = tree.max_endpoint_gap();
    let continuous = tree.segments.windows(2).all(|w| {
        tol.close_points(&w[0].controls()[w[0].degree()], &w[1].controls()[0])
    });
    Ok(MidpointResponse {
        depth,
        polygon: tree.polygon(),
        segments: tree.segments,
        polygon_deviation,
        max_endpoint_gap,
        continuous,
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElevateRequest {
    pub curve: CurveSpec,
}

pub fn elevate(curve: &HGammaCurve) -> Result<HGammaCurve> {
    degree_elevate(curve)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpolateRequest {
    pub family: FamilySpec,
    pub h: f64,
    pub a: f64,
    pub points: Vec<Point>,
}

/// Curve on `[a, a − nh]` passing through `points[k]` at `a − kh`.
pub fn interpolate(req: &InterpolateRequest) -> Result<HGammaCurve> {
    make_interpolating_curve(req.family.clone(), req.h, req.a, req.points.clone())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlossomRequest {
    pub curve: CurveSpec,
    /// `{"t": …}` for `Γ(t)` or `{"u": …, "v": …}` for a raw pair.
    pub args: Vec<BlossomArg>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlossomResponse {
    pub value: Point,
}

pub fn blossom(req: &BlossomRequest) -> Result<BlossomResponse> {
    let curve = curve_from(req.curve.clone())?;
    Ok(BlossomResponse {
        value: blossom_from_controls(&curve, &req.args)?,
    })
}
