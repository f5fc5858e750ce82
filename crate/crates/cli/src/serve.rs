//! `mml serve-world`: the fixture endpoints the JavaScript runtime fetches.
//!
//! `GET /world/values?country=C&indicator=I` answers with the series as
//! `[[year, value], ...]`, or 404 when the pair is missing.
//! `GET /world/countries` and `GET /world/indicators` list the entities.

use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::routing::get;
use axum::{Json, Router};
use mml_core::world::Entity;
use mml_core::WorldSnapshot;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
pub struct ValuesQuery {
    pub country: String,
    pub indicator: String,
}

pub fn router(world: Arc<WorldSnapshot>) -> Router {
    Router::new()
        .route("/world/values", get(values))
        .route("/world/countries", get(countries))
        .route("/world/indicators", get(indicators))
        .with_state(world)
}

async fn values(
    State(w): State<Arc<WorldSnapshot>>,
    Query(q): Query<ValuesQuery>,
) -> Result<Json<Vec<(i64, f64)>>, StatusCode> {
    let found = w.lookup(&q.country, &q.indicator).cloned();
    tracing::info!(country = %q.country, indicator = %q.indicator, found = found.is_some(), "values");
    found.map(Json).ok_or(StatusCode::NOT_FOUND)
}

async fn countries(State(w): State<Arc<WorldSnapshot>>) -> Json<Vec<Entity>> {
    Json(w.countries().to_vec())
}

async fn indicators(State(w): State<Arc<WorldSnapshot>>) -> Json<Vec<Entity>> {
    Json(w.indicators().to_vec())
}

/// Blocks serving `world` on `host:port`.
pub fn serve(world: Arc<WorldSnapshot>, host: &str, port: u16) -> anyhow::Result<()> {
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port)).await?;
        tracing::info!("serving world on http://{}", listener.local_addr()?);
        axum::serve(listener, router(world)).await?;
        Ok(())
    })
}
