//! Subcommand bodies. Each returns the rendered output and an exit code;
//! errors are classified by [`exit_code`].

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use hgamma::{CurveSpec, Error, FamilyKind, HGammaCurve, Point, Tolerance};
use serde::Serialize;

use crate::api::{self, BasisRequest, InterpolateRequest, ValidateRequest};
use crate::args::{
    BasisArgs, Command, CurveArgs, Format, ReportFormat, ValidateArgs, VerifyArgs,
};
use crate::suites::{run_suite, Suite, SuiteOptions};
use crate::svg::{Chart, Series, Style};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MATH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Rendered result of a subcommand.
#[derive(Debug, Clone)]
pub struct Output {
    pub body: String,
    pub code: u8,
    pub path: Option<PathBuf>,
}

impl Output {
    fn ok(body: String, path: Option<PathBuf>) -> Self {
        Output {
            body,
            code: EXIT_OK,
            path,
        }
    }
}

/// 2 for malformed input or misuse, 1 for configurations the mathematics
/// rejects (dependent basis, failed guard, unsupported operation).
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::InvalidParameter(_)
            | Error::ArityMismatch { .. }
            | Error::DimensionMismatch { .. }
            | Error::OddArity(_),
        ) => EXIT_USAGE,
        Some(_) => EXIT_MATH,
        None => EXIT_USAGE,
    }
}

/// The `{"error", "detail", "guards"}` body for any error.
pub fn error_body(err: &anyhow::Error) -> api::ErrorBody {
    match err.downcast_ref::<Error>() {
        Some(e) => api::ErrorBody::from(e),
        None => api::ErrorBody {
            error: "Usage".into(),
            detail: format!("{err:#}"),
            guards: Vec::new(),
        },
    }
}

/// Runs every subcommand except `serve`.
pub fn execute(cmd: &Command, tol: Tolerance, stdin: &mut dyn Read) -> Result<Output> {
    match cmd {
        Command::Validate(a) => validate(a),
        Command::Basis(a) => basis(a),
        Command::Curve(a) => curve(a, tol, stdin),
        Command::Verify(a) => verify(a),
        Command::Serve(_) => anyhow::bail!("serve is not a one-shot command"),
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn validate(args: &ValidateArgs) -> Result<Output> {
    let req = ValidateRequest {
        family: args.family.spec_or(FamilyKind::Polynomial)?,
        n: args.n,
        h: args.h,
        interval: args.a.zip(args.b).map(|(a, b)| [a, b]),
    };
    let resp = api::validate(&req)?;
    Ok(Output {
        body: json(&resp)?,
        code: if resp.valid { EXIT_OK } else { EXIT_MATH },
        path: None,
    })
}

fn csv_text(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)?)
}

fn num(v: f64) -> String {
    v.to_string()
}

fn basis(args: &BasisArgs) -> Result<Output> {
    let family = args.family.spec_or(FamilyKind::Polynomial)?;
    let req = BasisRequest {
        family: family.clone(),
        n: args.n,
        h: args.h,
        interval: [args.a, args.b],
        samples: args.samples,
        unity: args.unity,
    };
    let resp = api::basis_sample(&req)?;
    let body = match args.format {
        Format::Json => json(&resp)?,
        Format::Csv => {
            let mut header = vec!["x".to_string()];
            header.extend((0..=args.n).map(|k| format!("B{k}")));
            if resp.unity.is_some() {
                header.push("unity".into());
            }
            let rows = resp.x.iter().enumerate().map(|(i, &x)| {
                let mut r = vec![num(x)];
                r.extend(resp.basis.iter().map(|col| num(col[i])));
                if let Some(u) = &resp.unity {
                    r.push(num(u[i]));
                }
                r
            });
            csv_text(&header, rows)?
        }
        Format::Svg => {
            let mut series: Vec<Series> = resp
                .basis
                .iter()
                .enumerate()
                .map(|(k, col)| {
                    Series::new(
                        format!("B{k}"),
                        resp.x.iter().copied().zip(col.iter().copied()).collect(),
                        Style::Line,
                    )
                })
                .collect();
            if let Some(u) = &resp.unity {
                series.push(Series::new(
                    "unity sum",
                    resp.x.iter().copied().zip(u.iter().copied()).collect(),
                    Style::Line,
                ));
            }
            Chart {
                title: format!("{family} basis, n = {}, h = {}", args.n, args.h),
                x_label: "x".into(),
                y_label: "B_k(x)".into(),
                series,
            }
            .render()
        }
    };
    Ok(Output::ok(body, args.output.clone()))
}

fn read_input(path: &Path, stdin: &mut dyn Read) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        stdin.read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

/// Planar coordinates for plotting: the first two coordinates, or
/// `(x, value)` for scalar curves.
fn planar(x: f64, p: &[f64]) -> (f64, f64) {
    match p {
        [v] => (x, *v),
        [u, v, ..] => (*u, *v),
        [] => (x, 0.0),
    }
}

fn curve_series(curve: &HGammaCurve, label: &str) -> Result<Series> {
    let (xs, pts) = curve.sample(api::DEFAULT_CURVE_SAMPLES)?;
    Ok(Series::new(
        label,
        xs.iter().zip(&pts).map(|(&x, p)| planar(x, p)).collect(),
        Style::Line,
    ))
}

fn polygon_series(curve: &HGammaCurve, label: &str) -> Series {
    let (a, b) = curve.interval();
    let n = curve.degree() as f64;
    Series::new(
        label,
        curve
            .controls()
            .iter()
            .enumerate()
            .map(|(k, p)| planar(a + (b - a) * k as f64 / n, p))
            .collect(),
        Style::Polygon,
    )
}

fn control_rows(label: Option<&str>, controls: &[Point]) -> Vec<Vec<String>> {
    controls
        .iter()
        .enumerate()
        .map(|(k, p)| {
            label
                .map(str::to_string)
                .into_iter()
                .chain(std::iter::once(k.to_string()))
                .chain(p.iter().map(|v| num(*v)))
                .collect()
        })
        .collect()
}

fn coord_header(first: &[&str], dim: usize) -> Vec<String> {
    first
        .iter()
        .map(|s| s.to_string())
        .chain((0..dim).map(|i| format!("p{i}")))
        .collect()
}

fn curve(args: &CurveArgs, tol: Tolerance, stdin: &mut dyn Read) -> Result<Output> {
    let text = read_input(&args.input, stdin)?;
    let spec: CurveSpec = serde_json::from_str(&text)
        .with_context(|| format!("parsing curve JSON from {}", args.input.display()))?;
    let out = args.output.clone();

    if args.interpolate {
        let req = InterpolateRequest {
            family: spec.family,
            h: spec.h,
            a: spec.interval[0],
            points: spec.controls,
        };
        let c = api::interpolate(&req)?;
        let body = match args.format {
            Format::Json => json(&c)?,
            Format::Csv => csv_text(&coord_header(&["k"], c.dim()), control_rows(None, c.controls()))?,
            Format::Svg => {
                let nodes = c
                    .controls()
                    .iter()
                    .enumerate()
                    .map(|(k, p)| planar(req.a - k as f64 * req.h, p))
                    .collect();
                Chart {
                    title: format!("interpolating {} curve", c.family()),
                    x_label: "x".into(),
                    y_label: "y".into(),
                    series: vec![
                        curve_series(&c, "curve")?,
                        Series::new("data points", nodes, Style::Markers),
                    ],
                }
                .render()
            }
        };
        return Ok(Output::ok(body, out));
    }

    let c = api::curve_from(spec)?;
    let dim = c.dim();
    let chart = |title: String, series: Vec<Series>| Chart {
        title,
        x_label: if dim == 1 { "x".into() } else { "p0".into() },
        y_label: if dim == 1 { "G(x)".into() } else { "p1".into() },
        series,
    };

    let body = if let Some(x) = args.eval {
        let point = c.eval(x)?;
        match args.format {
            Format::Json => json(&api::EvalResponse { x, point })?,
            Format::Csv => {
                let mut row = vec![num(x)];
                row.extend(point.iter().map(|v| num(*v)));
                csv_text(&coord_header(&["x"], dim), [row])?
            }
            Format::Svg => chart(
                format!("G({x})"),
                vec![
                    curve_series(&c, "curve")?,
                    polygon_series(&c, "control polygon"),
                    Series::new(format!("G({x})"), vec![planar(x, &point)], Style::Markers),
                ],
            )
            .render(),
        }
    } else if let Some(s) = args.sample {
        let resp = api::sample(&c, s)?;
        match args.format {
            Format::Json => json(&resp)?,
            Format::Csv => {
                let rows = resp.x.iter().zip(&resp.points).map(|(x, p)| {
                    std::iter::once(num(*x)).chain(p.iter().map(|v| num(*v))).collect()
                });
                csv_text(&coord_header(&["x"], dim), rows)?
            }
            Format::Svg => chart(
                format!("{} curve, n = {}", c.family(), c.degree()),
                vec![curve_series(&c, "curve")?, polygon_series(&c, "control polygon")],
            )
            .render(),
        }
    } else if let Some(t) = args.subdivide {
        let resp = api::subdivide(&c, t)?;
        match args.format {
            Format::Json => json(&resp)?,
            Format::Csv => {
                let mut rows = control_rows(Some("left"), resp.left.controls());
                rows.extend(control_rows(Some("right"), resp.right.controls()));
                csv_text(&coord_header(&["part", "k"], dim), rows)?
            }
            Format::Svg => {
                let mut series = vec![curve_series(&c, "curve")?, polygon_series(&c, "control polygon")];
                for (half, label, side) in [
                    (&resp.left, "left polygon", api::Side::Left),
                    (&resp.right, "right polygon", api::Side::Right),
                ] {
                    if resp.degenerate != Some(side) {
                        series.push(polygon_series(half, label));
                    }
                }
                chart(format!("split at t = {t}"), series).render()
            }
        }
    } else if let Some(depth) = args.midpoint {
        let resp = api::midpoint(&c, depth, &tol)?;
        match args.format {
            Format::Json => json(&resp)?,
            Format::Csv => {
                let rows = resp
                    .segments
                    .iter()
                    .enumerate()
                    .flat_map(|(i, s)| control_rows(Some(&i.to_string()), s.controls()));
                csv_text(&coord_header(&["segment", "k"], dim), rows)?
            }
            Format::Svg => {
                let (a, b) = c.interval();
                let m = resp.polygon.len() - 1;
                let joined = resp
                    .polygon
                    .iter()
                    .enumerate()
                    .map(|(k, p)| planar(a + (b - a) * k as f64 / m as f64, p))
                    .collect();
                chart(
                    format!("midpoint subdivision, depth {depth}"),
                    vec![
                        curve_series(&c, "curve")?,
                        polygon_series(&c, "control polygon"),
                        Series::new(format!("depth {depth} polygons"), joined, Style::Polygon),
                    ],
                )
                .render()
            }
        }
    } else if args.elevate {
        let up = api::elevate(&c)?;
        match args.format {
            Format::Json => json(&up)?,
            Format::Csv => csv_text(&coord_header(&["k"], dim), control_rows(None, up.controls()))?,
            Format::Svg => chart(
                format!("degree {} to {}", c.degree(), up.degree()),
                vec![
                    curve_series(&c, "curve")?,
                    polygon_series(&c, "original polygon"),
                    polygon_series(&up, "elevated polygon"),
                ],
            )
            .render(),
        }
    } else {
        anyhow::bail!("no curve operation selected");
    };
    Ok(Output::ok(body, out))
}

fn verify(args: &VerifyArgs) -> Result<Output> {
    let opts = SuiteOptions {
        seed: args.seed,
        family: args.family.spec()?,
        n: args.n,
    };
    let suites: Vec<Suite> = match args.suite {
        Some(s) => vec![s],
        None => Suite::ALL.to_vec(),
    };
    let reports = suites
        .into_iter()
        .map(|s| run_suite(s, &opts))
        .collect::<hgamma::Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let body = match args.format {
        ReportFormat::Json => json(&reports)?,
        ReportFormat::Text => {
            let mut s: String = reports.iter().map(|r| r.render_text()).collect();
            s.push_str(if pass { "all suites passed\n" } else { "some suites FAILED\n" });
            s
        }
    };
    Ok(Output {
        body,
        code: if pass { EXIT_OK } else { EXIT_MATH },
        path: None,
    })
}
