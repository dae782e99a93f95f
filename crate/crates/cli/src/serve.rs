//! HTTP endpoints over a single mutable session.
//!
//! Mutations hold the session lock for their whole duration, so they apply in
//! arrival order. Reads clone the current snapshot and release the lock at once.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::Mutex;

use dimerbfz::potential::{superpotential, RigidityOptions};
use dimerbfz::quiver::{SeedJson, VertexId};
use dimerbfz::Error;

use crate::session::{primed, Session};
use crate::RigidityOutput;

#[derive(Clone)]
pub struct AppState {
    session: Arc<Mutex<Arc<Session>>>,
}

impl AppState {
    pub fn new(session: Session) -> Self {
        AppState {
            session: Arc::new(Mutex::new(Arc::new(session))),
        }
    }

    pub async fn snapshot(&self) -> Arc<Session> {
        self.session.lock().await.clone()
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/quiver", get(quiver))
        .route("/layout", get(layout))
        .route("/faces", get(faces))
        .route("/certificate", get(certificate))
        .route("/mutate", post(mutate))
        .route("/reset", post(reset))
        .with_state(state)
}

fn error(status: StatusCode, msg: impl Into<String>) -> Response {
    (status, Json(json!({ "error": msg.into() }))).into_response()
}

#[derive(Serialize)]
struct SeedView {
    #[serde(flatten)]
    seed: SeedJson,
    history: Vec<VertexId>,
}

fn seed_view(s: &Session) -> SeedView {
    SeedView {
        seed: s.seed().to_json(),
        history: s.history().to_vec(),
    }
}

async fn quiver(State(st): State<AppState>) -> Json<SeedView> {
    let s = st.snapshot().await;
    Json(seed_view(&s))
}

const NO_LAYOUT: &str = "this session was started from a bare quiver and has no cylinder layout";

async fn layout(State(st): State<AppState>) -> Response {
    match st.snapshot().await.cell() {
        Some(c) => Json(c.layout.to_json()).into_response(),
        None => error(StatusCode::NOT_FOUND, NO_LAYOUT),
    }
}

async fn faces(State(st): State<AppState>) -> Response {
    let s = st.snapshot().await;
    let Some(c) = s.cell() else {
        return error(StatusCode::NOT_FOUND, NO_LAYOUT);
    };
    match c.faces() {
        Ok(f) => Json(f.iter().map(|f| f.to_json()).collect::<Vec<_>>()).into_response(),
        Err(e) => error(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
    }
}

/// Certificates for the session's initial quiver and its superpotential.
async fn certificate(State(st): State<AppState>) -> Response {
    let s = st.snapshot().await;
    if s.cell().is_none() {
        return error(StatusCode::NOT_FOUND, NO_LAYOUT);
    }
    let work = tokio::task::spawn_blocking(move || {
        let c = s.cell().unwrap();
        let faces = c.faces()?;
        let q = c.bfz.quiver();
        let pot = superpotential(q, &faces)?;
        dimerbfz::potential::rigidity_check(q, Some(&c.layout), &faces, &pot, &RigidityOptions::default())
    });
    match work.await {
        Ok(Ok(r)) => Json(RigidityOutput::from(r)).into_response(),
        Ok(Err(e)) => error(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

#[derive(Deserialize)]
struct MutateBody {
    vertex: VertexId,
}

#[derive(Serialize)]
struct MutateView {
    vertex: VertexId,
    variable: String,
    value: String,
    #[serde(flatten)]
    seed: SeedView,
}

async fn mutate(State(st): State<AppState>, body: Result<Json<MutateBody>, JsonRejection>) -> Response {
    let k = match body {
        Ok(Json(b)) => b.vertex,
        Err(e) => return error(StatusCode::BAD_REQUEST, format!("expected {{\"vertex\": <id>}}: {}", e.body_text())),
    };
    let mut guard = st.session.lock().await;
    let next = match guard.mutate(k) {
        Ok(n) => n,
        Err(e @ Error::FrozenVertex(_)) => return error(StatusCode::CONFLICT, e.to_string()),
        Err(e @ Error::MissingVertex(_)) => return error(StatusCode::NOT_FOUND, e.to_string()),
        Err(e) => return error(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
    };
    let value = next.seed().render(next.seed().variable(k).unwrap());
    log::info!("mutated at {k}: {} = {value}", primed(k));
    let view = MutateView {
        vertex: k,
        variable: primed(k),
        value,
        seed: seed_view(&next),
    };
    *guard = Arc::new(next);
    Json(view).into_response()
}

async fn reset(State(st): State<AppState>) -> Json<Value> {
    let mut guard = st.session.lock().await;
    *guard = Arc::new(guard.reset());
    Json(serde_json::to_value(seed_view(&guard)).unwrap())
}
