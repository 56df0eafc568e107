//! HTTP game service: one rectangle dropping board per session.
//!
//! Routes:
//! - `POST /game {width}` creates a session and returns `{id}`
//! - `GET /game/{id}` returns `{skyline, score, move_log}`
//! - `POST /game/{id}/query {w, h}` returns the greedy suggestion `{x, landing, max}`
//! - `POST /game/{id}/drop {w, h, x}` drops a piece and returns `{landing, max}`
//!
//! Errors come back as `{error, message}` with a 404 or 400 status.

mod error;
mod store;

use std::net::SocketAddr;
use std::time::{Duration, Instant};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

pub use error::{ErrorBody, ServiceError};
pub use store::{DropResult, GameSession, GameState, Move, SessionStore, DEFAULT_IDLE_TIMEOUT};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CreateRequest {
    pub width: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CreateResponse {
    pub id: String,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QueryRequest {
    pub w: i64,
    pub h: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryResponse {
    pub x: i64,
    pub landing: i64,
    pub max: i64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DropRequest {
    pub w: i64,
    pub h: i64,
    pub x: i64,
}

type Body<T> = Result<Json<T>, JsonRejection>;

fn body<T>(b: Body<T>) -> Result<T, ServiceError> {
    b.map(|Json(v)| v)
        .map_err(|e| ServiceError::BadRequest(e.body_text()))
}

async fn create_game(
    State(store): State<SessionStore>,
    req: Body<CreateRequest>,
) -> Result<(StatusCode, Json<CreateResponse>), ServiceError> {
    let req = body(req)?;
    let id = store.create_game(req.width)?;
    Ok((StatusCode::CREATED, Json(CreateResponse { id: id.to_string() })))
}

async fn get_state(
    State(store): State<SessionStore>,
    Path(id): Path<String>,
) -> Result<Json<GameState>, ServiceError> {
    store.get_state(&id).map(Json)
}

async fn post_query(
    State(store): State<SessionStore>,
    Path(id): Path<String>,
    req: Body<QueryRequest>,
) -> Result<Json<QueryResponse>, ServiceError> {
    let req = body(req)?;
    let mv = store.post_query(&id, req.w, req.h)?;
    Ok(Json(QueryResponse {
        x: mv.x,
        landing: mv.landing,
        max: mv.resulting_max,
    }))
}

async fn post_drop(
    State(store): State<SessionStore>,
    Path(id): Path<String>,
    req: Body<DropRequest>,
) -> Result<Json<DropResult>, ServiceError> {
    let req = body(req)?;
    store.post_drop(&id, req.w, req.h, req.x).map(Json)
}

pub fn router(store: SessionStore) -> Router {
    Router::new()
        .route("/game", post(create_game))
        .route("/game/{id}", get(get_state))
        .route("/game/{id}/query", post(post_query))
        .route("/game/{id}/drop", post(post_drop))
        .with_state(store)
}

/// Evict idle sessions once a minute, or more often for short timeouts.
pub fn spawn_eviction(store: SessionStore) -> tokio::task::JoinHandle<()> {
    let period = (store.idle_timeout() / 2).clamp(Duration::from_millis(10), Duration::from_secs(60));
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(period);
        loop {
            tick.tick().await;
            store.evict_idle(Instant::now());
        }
    })
}

/// Serve on `addr` until the process stops.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let store = SessionStore::default();
    spawn_eviction(store.clone());
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(store)).await
}
