mod common;

use std::f64::consts::FRAC_PI_2;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use common::{check, Schema};
use curvectl::service::router;
use hgamma::{FamilySpec, HGammaCurve, Tolerance};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(method: &str, path: &str, body: Option<String>) -> (StatusCode, String) {
    let req = Request::builder()
        .method(method)
        .uri(path)
        .header("content-type", "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let resp = router(Tolerance::default()).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn post(path: &str, body: Value) -> (StatusCode, Value, String) {
    let (status, text) = call("POST", path, Some(body.to_string())).await;
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{path}: {e}: {text}"));
    (status, v, text)
}

fn cubic() -> Value {
    json!({
        "family": {"kind": "trig"},
        "n": 3,
        "h": 0.1,
        "interval": [0.0, 1.2],
        "controls": [[0.0, 0.0], [1.0, 2.0], [2.0, -1.0], [3.0, 1.0]]
    })
}

#[tokio::test]
async fn families_lists_every_kind() {
    let (status, text) = call("GET", "/families", None).await;
    assert_eq!(status, StatusCode::OK);
    check(Schema::Families, &text);
}

#[tokio::test]
async fn validate_quarter_turn_is_dependent() {
    let (status, v, text) = post("/validate", json!({"family": {"kind": "trig"}, "n": 2, "h": FRAC_PI_2})).await;
    assert_eq!(status, StatusCode::OK);
    check(Schema::Validate, &text);
    assert_eq!(v["verdict"], "dependent");
    assert_eq!(v["valid"], false);

    let (_, v, _) = post("/validate", json!({"family": {"kind": "trig"}, "n": 2, "h": 0.5, "interval": [0.0, 1.0]})).await;
    assert_eq!(v["verdict"], "independent");
    assert_eq!(v["valid"], true);
}

#[tokio::test]
async fn eval_at_start_returns_first_control() {
    let (status, v, text) = post("/curve/eval", json!({"curve": cubic(), "x": 0.0})).await;
    assert_eq!(status, StatusCode::OK);
    check(Schema::Eval, &text);
    assert_eq!(v["point"], json!([0.0, 0.0]));

    let (_, v, _) = post("/curve/eval", json!({"curve": cubic(), "x": 1.2})).await;
    let p: Vec<f64> = serde_json::from_value(v["point"].clone()).unwrap();
    assert!((p[0] - 3.0).abs() <= 1e-11 && (p[1] - 1.0).abs() <= 1e-11);
}

#[tokio::test]
async fn eval_with_insertion_order_matches_natural_order() {
    let (_, natural, _) = post("/curve/eval", json!({"curve": cubic(), "x": 0.37})).await;
    let (status, permuted, _) = post("/curve/eval", json!({"curve": cubic(), "x": 0.37, "sigma": [3, 1, 2]})).await;
    assert_eq!(status, StatusCode::OK);
    let a: Vec<f64> = serde_json::from_value(natural["point"].clone()).unwrap();
    let b: Vec<f64> = serde_json::from_value(permuted["point"].clone()).unwrap();
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-12));

    let (status, v, _) = post("/curve/eval", json!({"curve": cubic(), "x": 0.37, "sigma": [1, 1, 2]})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"], "InvalidParameter");
}

#[tokio::test]
async fn sample_subdivide_elevate_interpolate() {
    let (status, v, text) = post("/curve/sample", json!({"curve": cubic(), "samples": 9})).await;
    assert_eq!(status, StatusCode::OK);
    check(Schema::Sample, &text);
    assert_eq!(v["x"].as_array().unwrap().len(), 9);

    let (_, v, _) = post("/curve/sample", json!({"curve": cubic()})).await;
    assert_eq!(v["x"].as_array().unwrap().len(), 256);

    let (status, v, text) = post("/curve/subdivide", json!({"curve": cubic(), "t": 0.5})).await;
    assert_eq!(status, StatusCode::OK);
    check(Schema::Subdivide, &text);
    assert_eq!(v["left"]["interval"], json!([0.0, 0.5]));
    assert_eq!(v["right"]["interval"], json!([0.5, 1.2]));
    assert_eq!(v["degenerate"], Value::Null);

    let poly = json!({
        "family": {"kind": "polynomial"}, "n": 2, "h": 0.25, "interval": [-1.0, 1.0],
        "controls": [[0.0], [1.0], [0.5]]
    });
    let (status, v, text) = post("/curve/elevate", json!({"curve": poly})).await;
    assert_eq!(status, StatusCode::OK);
    check(Schema::Curve, &text);
    assert_eq!(v["n"], 3);

    let (status, v, text) = post(
        "/curve/interpolate",
        json!({"family": {"kind": "trig"}, "h": -0.25, "a": 0.0, "points": [[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]]}),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    check(Schema::Curve, &text);
    assert_eq!(v["interval"], json!([0.0, 0.5]));
    let curve: HGammaCurve = serde_json::from_value(v).unwrap();
    for (k, want) in [[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]].iter().enumerate() {
        let p = curve.eval(0.25 * k as f64).unwrap();
        assert!((p[0] - want[0]).abs() <= 1e-10 && (p[1] - want[1]).abs() <= 1e-10, "node {k}");
    }
}

#[tokio::test]
async fn midpoint_depth_three_has_eight_segments() {
    let (status, v, text) = post("/curve/midpoint", json!({"curve": cubic(), "depth": 3})).await;
    assert_eq!(status, StatusCode::OK);
    check(Schema::Midpoint, &text);
    assert_eq!(v["segments"].as_array().unwrap().len(), 8);
    assert_eq!(v["continuous"], true);
    assert!(v["polygon_deviation"].as_f64().unwrap() > 0.0);
}

#[tokio::test]
async fn blossom_on_diagonal_is_curve_value() {
    let args = json!([{"t": 0.4}, {"t": 0.3}, {"t": 0.2}]);
    let (status, v, text) = post("/blossom/eval", json!({"curve": cubic(), "args": args})).await;
    assert_eq!(status, StatusCode::OK);
    check(Schema::Blossom, &text);
    let (_, p, _) = post("/curve/eval", json!({"curve": cubic(), "x": 0.4})).await;
    let g: Vec<f64> = serde_json::from_value(v["value"].clone()).unwrap();
    let e: Vec<f64> = serde_json::from_value(p["point"].clone()).unwrap();
    assert!(g.iter().zip(&e).all(|(x, y)| (x - y).abs() <= 1e-10));

    let raw = json!([{"u": 0.5, "v": -0.2}, {"t": 0.3}, {"u": 1.0, "v": 0.0}]);
    let (status, _, _) = post("/blossom/eval", json!({"curve": cubic(), "args": raw})).await;
    assert_eq!(status, StatusCode::OK);

    let (status, v, text) = post("/blossom/eval", json!({"curve": cubic(), "args": [{"t": 0.4}]})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    check(Schema::Error, &text);
    assert_eq!(v["error"], "ArityMismatch");
}

#[tokio::test]
async fn basis_sample_endpoint() {
    let (status, v, text) = post(
        "/basis/sample",
        json!({"family": {"kind": "polynomial"}, "n": 2, "h": 0.0, "interval": [0.0, 1.0], "samples": 3}),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    check(Schema::Basis, &text);
    assert_eq!(v["B"], json!([[1.0, 0.25, 0.0], [0.0, 0.5, 0.0], [0.0, 0.25, 1.0]]));

    let (_, v, _) = post(
        "/basis/sample",
        json!({"family": {"kind": "hyperbolic"}, "n": 4, "h": 0.1, "interval": [0.0, 1.0], "samples": 11, "unity": true}),
    )
    .await;
    for u in v["unity"].as_array().unwrap() {
        assert!((u.as_f64().unwrap() - 1.0).abs() <= 1e-9);
    }
}

#[tokio::test]
async fn library_rejections_are_422_with_guards() {
    let mut dependent = cubic();
    dependent["n"] = json!(2);
    dependent["h"] = json!(FRAC_PI_2);
    dependent["controls"] = json!([[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]]);
    let (status, v, text) = post("/curve/eval", json!({"curve": dependent, "x": 0.5})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    check(Schema::Error, &text);
    assert_eq!(v["error"], "DependentBasis");
    assert!(!v["guards"].as_array().unwrap().is_empty());

    let (status, v, _) = post("/curve/elevate", json!({"curve": cubic()})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"], "UnsupportedElevation");
    assert_eq!(v["guards"], json!([]));

    let (status, v, _) = post("/curve/midpoint", json!({"curve": cubic(), "depth": 25})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"], "InvalidParameter");
}

#[tokio::test]
async fn endpoint_split_stub_is_flagged_and_rejected_when_sent_back() {
    let (status, v, _) = post("/curve/subdivide", json!({"curve": cubic(), "t": 1.2})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["degenerate"], "right");
    assert_eq!(v["left"], cubic());
    let (status, v, _) = post("/curve/eval", json!({"curve": v["right"], "x": 1.2})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["guards"][0]["kind"], "interval");
}

#[tokio::test]
async fn malformed_bodies_are_400() {
    for (path, body) in [
        ("/validate", "{not json"),
        ("/validate", r#"{"family": {"kind": "trig"}, "n": 2}"#),
        ("/validate", r#"{"family": {"kind": "trig"}, "n": 2, "h": 0.1, "extra": 1}"#),
        ("/curve/eval", r#"{"curve": 3, "x": 0}"#),
        ("/basis/sample", r#"{"family": {"kind": "spline"}, "n": 2, "h": 0, "interval": [0, 1]}"#),
        ("/blossom/eval", ""),
    ] {
        let (status, text) = call("POST", path, Some(body.into())).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{path} {body}");
        check(Schema::Error, &text);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["error"], "MalformedRequest");
    }
}

#[tokio::test]
async fn identical_requests_get_identical_responses() {
    let requests = [
        ("/validate", json!({"family": {"kind": "trig_discrete", "d": 0.5}, "n": 4, "h": 0.3})),
        ("/curve/midpoint", json!({"curve": cubic(), "depth": 2})),
        ("/curve/subdivide", json!({"curve": cubic(), "t": 0.3})),
        ("/curve/eval", json!({"curve": cubic(), "x": 0.9})),
    ];
    let mut first = Vec::new();
    for (path, body) in &requests {
        first.push(call("POST", path, Some(body.to_string())).await);
    }
    // replay in reverse order, then concurrently
    for (i, (path, body)) in requests.iter().enumerate().rev() {
        assert_eq!(call("POST", path, Some(body.to_string())).await, first[i], "{path}");
    }
    let concurrent = futures_join(&requests).await;
    assert_eq!(concurrent, first);
}

async fn futures_join(requests: &[(&str, Value)]) -> Vec<(StatusCode, String)> {
    let handles: Vec<_> = requests
        .iter()
        .map(|(path, body)| {
            let (path, body) = (path.to_string(), body.to_string());
            tokio::spawn(async move { call("POST", &path, Some(body)).await })
        })
        .collect();
    let mut out = Vec::new();
    for h in handles {
        out.push(h.await.unwrap());
    }
    out
}

#[tokio::test]
async fn served_curves_parse_into_library_types() {
    let (_, v, _) = post("/curve/subdivide", json!({"curve": cubic(), "t": 0.6})).await;
    let left: HGammaCurve = serde_json::from_value(v["left"].clone()).unwrap();
    assert_eq!(left.family(), &FamilySpec::trig());
    assert_eq!(left.interval(), (0.0, 0.6));
}
