//! Stateless JSON service over the same operations as the command line.

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use hgamma::Tolerance;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::api::{self, ErrorBody};

/// Either a 400 for bodies that do not parse into the request type, or a
/// 422 for requests the library rejects.
pub enum ApiError {
    Malformed(String),
    Rejected(hgamma::Error),
}

impl From<hgamma::Error> for ApiError {
    fn from(e: hgamma::Error) -> Self {
        ApiError::Rejected(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::Malformed(detail) => (
                StatusCode::BAD_REQUEST,
                ErrorBody {
                    error: "MalformedRequest".into(),
                    detail,
                    guards: Vec::new(),
                },
            ),
            ApiError::Rejected(e) => (StatusCode::UNPROCESSABLE_ENTITY, ErrorBody::from(&e)),
        };
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn parse<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::Malformed(e.to_string()))
}

fn handler<Req, Resp>(
    f: fn(Req, &Tolerance) -> hgamma::Result<Resp>,
) -> impl Fn(State<Tolerance>, Bytes) -> std::future::Ready<ApiResult<Resp>> + Clone + Send + Sync + 'static
where
    Req: DeserializeOwned + 'static,
    Resp: Serialize + Send + 'static,
{
    move |State(tol): State<Tolerance>, body: Bytes| {
        std::future::ready(
            parse::<Req>(&body).and_then(|req| f(req, &tol).map(Json).map_err(ApiError::from)),
        )
    }
}

fn validate(req: api::ValidateRequest, _: &Tolerance) -> hgamma::Result<api::ValidateResponse> {
    api::validate(&req)
}

fn basis_sample(req: api::BasisRequest, _: &Tolerance) -> hgamma::Result<api::BasisResponse> {
    api::basis_sample(&req)
}

fn curve_eval(req: api::EvalRequest, _: &Tolerance) -> hgamma::Result<api::EvalResponse> {
    api::eval(&req)
}

fn curve_sample(req: api::SampleRequest, _: &Tolerance) -> hgamma::Result<api::SampleResponse> {
    api::sample(&api::curve_from(req.curve)?, req.samples)
}

fn curve_subdivide(
    req: api::SubdivideRequest,
    _: &Tolerance,
) -> hgamma::Result<api::SubdivideResponse> {
    api::subdivide(&api::curve_from(req.curve)?, req.t)
}

fn curve_midpoint(
    req: api::MidpointRequest,
    tol: &Tolerance,
) -> hgamma::Result<api::MidpointResponse> {
    api::midpoint(&api::curve_from(req.curve)?, req.depth, tol)
}

fn curve_elevate(req: api::ElevateRequest, _: &Tolerance) -> hgamma::Result<hgamma::HGammaCurve> {
    api::elevate(&api::curve_from(req.curve)?)
}

fn curve_interpolate(
    req: api::InterpolateRequest,
    _: &Tolerance,
) -> hgamma::Result<hgamma::HGammaCurve> {
    api::interpolate(&req)
}

fn blossom_eval(req: api::BlossomRequest, _: &Tolerance) -> hgamma::Result<api::BlossomResponse> {
    api::blossom(&req)
}

async fn families() -> Json<Vec<api::FamilyInfo>> {
    Json(api::families())
}

pub fn router(tol: Tolerance) -> Router {
    Router::new()
        .route("/families", get(families))
        .route("/validate", post(handler(validate)))
        .route("/basis/sample", post(handler(basis_sample)))
        .route("/curve/eval", post(handler(curve_eval)))
        .route("/curve/sample", post(handler(curve_sample)))
        .route("/curve/subdivide", post(handler(curve_subdivide)))
        .route("/curve/midpoint", post(handler(curve_midpoint)))
        .route("/curve/elevate", post(handler(curve_elevate)))
        .route("/curve/interpolate", post(handler(curve_interpolate)))
        .route("/blossom/eval", post(handler(blossom_eval)))
        .with_state(tol)
}

pub async fn serve(host: &str, port: u16, tol: Tolerance) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    axum::serve(listener, router(tol)).await
}
