//! Single-session HTTP service. Every request locks the session, so
//! mutations are applied one at a time in arrival order.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, MutexGuard};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use configforge_core::{
    generate_config_h, generate_config_mk, node_id, to_dot, Engine, OptionId, Session,
    SessionError,
};
use serde::{Deserialize, Serialize};

use crate::config_file::write_config;
use crate::graph::Graph;

/// `GET /api/graph` body: the graph plus session flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphPayload {
    #[serde(flatten)]
    pub graph: Graph,
    pub conflict: bool,
    pub complete: bool,
    pub engine: String,
    pub verdict: String,
}

impl GraphPayload {
    pub fn of(session: &Session) -> Self {
        GraphPayload {
            graph: Graph::new(session.model(), session.statuses()),
            conflict: session.conflict(),
            complete: session.is_complete(),
            engine: session.engine().as_str().to_string(),
            verdict: session.last_result().verdict.as_str().to_string(),
        }
    }
}

/// Error body: `{"error": kind, "message": text, "free": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    #[serde(skip)]
    status: u16,
    pub error: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub free: Vec<String>,
}

impl ApiError {
    fn new(status: StatusCode, error: &str, message: impl Into<String>) -> Self {
        ApiError {
            status: status.as_u16(),
            error: error.to_string(),
            message: message.into(),
            free: Vec::new(),
        }
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        match e {
            SessionError::UnknownOption(name) => ApiError::new(
                StatusCode::NOT_FOUND,
                "unknown_option",
                format!("unknown option `{}`", name),
            ),
            SessionError::IncompleteConfiguration { free } => ApiError {
                free,
                ..ApiError::new(
                    StatusCode::CONFLICT,
                    "incomplete_configuration",
                    "some options are neither enforced nor implied",
                )
            },
            SessionError::ConflictingConfiguration => ApiError::new(
                StatusCode::CONFLICT,
                "conflicting_configuration",
                "the enforced options contradict the model",
            ),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

#[derive(Clone)]
pub struct AppState {
    session: Arc<Mutex<Session>>,
}

impl AppState {
    pub fn new(session: Session) -> Self {
        AppState {
            session: Arc::new(Mutex::new(session)),
        }
    }

    fn lock(&self) -> MutexGuard<'_, Session> {
        // keep serving after a handler panic; the session is still usable
        self.session.lock().unwrap_or_else(|e| e.into_inner())
    }
}

const INDEX: &str = "<!doctype html>
<html><head><meta charset=\"utf-8\"><title>configforge</title></head>
<body>
<h1>configforge</h1>
<p>No UI bundle is being served (start with <code>--ui-dir</code>). API:</p>
<ul>
<li><a href=\"/api/graph\">GET /api/graph</a></li>
<li>POST /api/click/{id}, POST /api/reset, POST /api/engine, POST /api/save</li>
<li><a href=\"/api/config.h\">GET /api/config.h</a>, <a href=\"/api/config.mk\">GET /api/config.mk</a></li>
<li><a href=\"/api/graph.dot\">GET /api/graph.dot</a></li>
</ul>
</body></html>
";

pub fn router(state: AppState, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/graph", get(graph))
        .route("/api/graph.dot", get(graph_dot))
        .route("/api/click/{id}", post(click))
        .route("/api/reset", post(reset))
        .route("/api/engine", post(engine))
        .route("/api/save", post(save))
        .route("/api/config.h", get(config_h))
        .route("/api/config.mk", get(config_mk))
        .with_state(state);
    match ui_dir {
        Some(dir) => api.fallback_service(tower_http::services::ServeDir::new(dir)),
        None => api.route("/", get(|| async { Html(INDEX) })),
    }
}

pub async fn serve(session: Session, addr: SocketAddr, ui_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::new(session), ui_dir)).await
}

fn text(body: String) -> Response {
    ([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], body).into_response()
}

/// Accepts an option name, or its sanitized DOT id (`foo_q` for `foo?`).
fn resolve(session: &Session, id: &str) -> Result<OptionId, ApiError> {
    let model = session.model();
    model
        .lookup(id)
        .or_else(|| model.options().find(|o| node_id(model.name(*o)) == id))
        .ok_or_else(|| SessionError::UnknownOption(id.to_string()).into())
}

async fn graph(State(state): State<AppState>) -> Json<GraphPayload> {
    Json(GraphPayload::of(&state.lock()))
}

async fn graph_dot(State(state): State<AppState>) -> Response {
    let s = state.lock();
    ([(header::CONTENT_TYPE, "text/vnd.graphviz")], to_dot(s.model(), s.statuses())).into_response()
}

async fn click(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<GraphPayload>, ApiError> {
    let mut s = state.lock();
    let option = resolve(&s, &id)?;
    s.click(option)?;
    Ok(Json(GraphPayload::of(&s)))
}

async fn reset(State(state): State<AppState>) -> Json<GraphPayload> {
    let mut s = state.lock();
    s.reset();
    Json(GraphPayload::of(&s))
}

#[derive(Deserialize)]
struct EngineRequest {
    engine: String,
}

async fn engine(State(state): State<AppState>, body: Bytes) -> Result<Json<GraphPayload>, ApiError> {
    let bad = |m: String| ApiError::new(StatusCode::BAD_REQUEST, "bad_request", m);
    let req: EngineRequest = serde_json::from_slice(&body).map_err(|e| bad(e.to_string()))?;
    let engine: Engine = req.engine.parse().map_err(|e: configforge_core::inference::UnknownEngine| bad(e.to_string()))?;
    let mut s = state.lock();
    s.set_engine(engine);
    Ok(Json(GraphPayload::of(&s)))
}

async fn save(State(state): State<AppState>) -> Result<Response, ApiError> {
    let s = state.lock();
    let v = s.save()?;
    Ok(text(write_config(s.model(), &v)))
}

async fn config_h(State(state): State<AppState>) -> Result<Response, ApiError> {
    let s = state.lock();
    let v = s.save()?;
    let out = generate_config_h(s.model(), &v)
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "generate", e.to_string()))?;
    Ok(text(out))
}

async fn config_mk(State(state): State<AppState>) -> Result<Response, ApiError> {
    let s = state.lock();
    let v = s.save()?;
    let out = generate_config_mk(s.model(), &v)
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "generate", e.to_string()))?;
    Ok(text(out))
}
