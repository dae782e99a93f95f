use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use dimerbfz::quiver::Quiver;
use dimerbfz_cli::input::{CellSpec, Loaded};
use dimerbfz_cli::serve::{router, AppState};
use dimerbfz_cli::session::{Origin, Session};

fn doubled_triangle() -> Router {
    let q: Quiver = serde_json::from_value(json!({
        "vertices": [{"id": 1}, {"id": 2}, {"id": 3}],
        "arrows": [
            {"id": 0, "src": 1, "tgt": 2},
            {"id": 1, "src": 2, "tgt": 3},
            {"id": 2, "src": 3, "tgt": 1},
            {"id": 3, "src": 3, "tgt": 1}
        ]
    }))
    .unwrap();
    router(AppState::new(Session::new(Loaded { quiver: q, cell: None, spec: None })))
}

fn example() -> Router {
    let spec: CellSpec = serde_json::from_value(json!({
        "cartan": "A3", "u": "3 2 1 2 3", "v": "", "interleave": "00000", "frozen_arrows": "boundary"
    }))
    .unwrap();
    router(AppState::new(Session::from_origin(Origin::Cell(spec)).unwrap()))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<&str>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header("content-type", "application/json");
    }
    let req = req.body(body.map(|b| Body::from(b.to_string())).unwrap_or_else(Body::empty)).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    (status, v)
}

#[tokio::test]
async fn mutate_doubled_triangle() {
    let app = doubled_triangle();
    let (s, initial) = call(&app, "GET", "/quiver", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(initial["history"], json!([]));

    let (s, m) = call(&app, "POST", "/mutate", Some(r#"{"vertex": 2}"#)).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(m["variable"], json!("x'_2"));
    assert_eq!(m["value"], json!("(x_1+x_3)/x_2"));
    assert_eq!(m["history"], json!([2]));
    let pairs: Vec<(i64, i64)> = m["quiver"]["arrows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| (a["src"].as_i64().unwrap(), a["tgt"].as_i64().unwrap()))
        .collect();
    assert_eq!(pairs, [(2, 1), (3, 1), (3, 2)]);

    let (_, now) = call(&app, "GET", "/quiver", None).await;
    assert_eq!(now["history"], json!([2]));

    let (_, twice) = call(&app, "POST", "/mutate", Some(r#"{"vertex": 2}"#)).await;
    assert_eq!(twice["history"], json!([2, 2]));
    assert_eq!(twice["quiver"], initial["quiver"]);
    assert_eq!(twice["variables"], initial["variables"]);
}

#[tokio::test]
async fn bad_requests() {
    let app = example();
    let (s, e) = call(&app, "POST", "/mutate", Some(r#"{"vertex": 3}"#)).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert!(e["error"].is_string());
    let (s, _) = call(&app, "POST", "/mutate", Some(r#"{"vertex": 42}"#)).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    for body in [r#"{"vertex": "two"}"#, "{", r#"{"v": 1}"#] {
        let (s, e) = call(&app, "POST", "/mutate", Some(body)).await;
        assert_eq!(s, StatusCode::BAD_REQUEST, "{body}");
        assert!(e["error"].is_string());
    }
    let (_, q) = call(&app, "GET", "/quiver", None).await;
    assert_eq!(q["history"], json!([]));
}

#[tokio::test]
async fn faces_match_verify() {
    let app = example();
    let (s, faces) = call(&app, "GET", "/faces", None).await;
    assert_eq!(s, StatusCode::OK);
    let spec: CellSpec = serde_json::from_value(json!({
        "cartan": "A3", "u": "3 2 1 2 3", "v": "", "interleave": "00000", "frozen_arrows": "boundary"
    }))
    .unwrap();
    let cell = spec.build().unwrap();
    let expected: Vec<_> = cell.faces().unwrap().iter().map(|f| f.to_json()).collect();
    assert_eq!(faces, serde_json::to_value(expected).unwrap());

    let (s, layout) = call(&app, "GET", "/layout", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(layout["branches"], json!([[1, 2, 3]]));

    // Faces describe the initial quiver and survive mutation.
    call(&app, "POST", "/mutate", Some(r#"{"vertex": -1}"#)).await;
    let (_, after) = call(&app, "GET", "/faces", None).await;
    assert_eq!(after, faces);
}

#[tokio::test]
async fn certificate_and_reset() {
    let app = example();
    let (s, c) = call(&app, "GET", "/certificate", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(c["rigid"], json!(true));
    assert!(!c["certificates"].as_array().unwrap().is_empty());

    let (_, before) = call(&app, "GET", "/quiver", None).await;
    call(&app, "POST", "/mutate", Some(r#"{"vertex": 2}"#)).await;
    call(&app, "POST", "/mutate", Some(r#"{"vertex": -2}"#)).await;
    let (s, r) = call(&app, "POST", "/reset", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(r, before);
}

#[tokio::test]
async fn bare_quiver_has_no_layout() {
    let app = doubled_triangle();
    for uri in ["/layout", "/faces", "/certificate"] {
        let (s, e) = call(&app, "GET", uri, None).await;
        assert_eq!(s, StatusCode::NOT_FOUND, "{uri}");
        assert!(e["error"].is_string());
    }
}

#[tokio::test]
async fn concurrent_mutations_all_apply() {
    let app = example();
    let tasks: Vec<_> = (0..8)
        .map(|_| {
            let app = app.clone();
            tokio::spawn(async move { call(&app, "POST", "/mutate", Some(r#"{"vertex": -2}"#)).await })
        })
        .collect();
    for t in tasks {
        assert_eq!(t.await.unwrap().0, StatusCode::OK);
    }
    let (_, q) = call(&app, "GET", "/quiver", None).await;
    assert_eq!(q["history"], json!(vec![-2; 8]));
    let (_, fresh) = call(&example(), "GET", "/quiver", None).await;
    assert_eq!(q["variables"], fresh["variables"]);
}
