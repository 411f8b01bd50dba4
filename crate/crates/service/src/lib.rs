//! HTTP API over the dataset registry and the renderer.
//!
//! Every handler reads the data root afresh, so files dropped into it show
//! up on the next request and no state is kept between calls.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, CorsLayer};

use micromap_core::ingest::{AtlasSummary, DataRoot, DatasetSummary, IngestError};
use micromap_core::model::{PlotSpec, ValidationReport};
use micromap_core::render::{render_validated, RenderedFigure};

pub const SVG_TYPE: &str = "image/svg+xml";
pub const REPORT_PATH: &str = "/api/render/report";

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub root: PathBuf,
    /// Origins allowed to call the API from a browser. Empty disables CORS.
    pub cors_origins: Vec<String>,
}

/// Body of both render endpoints. `atlas` falls back to the atlas named by
/// the dataset manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderRequest {
    pub dataset: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atlas: Option<String>,
    pub spec: PlotSpec,
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: String,
}

#[derive(Debug)]
pub enum ApiError {
    BadRequest(String),
    NotFound(String),
    Invalid(ValidationReport),
    Internal(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, message) = match self {
            ApiError::Invalid(report) => {
                return (StatusCode::UNPROCESSABLE_ENTITY, Json(report)).into_response()
            }
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, m),
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, m),
            ApiError::Internal(m) => (StatusCode::INTERNAL_SERVER_ERROR, m),
        };
        (status, Json(ErrorBody { error: message })).into_response()
    }
}

impl From<IngestError> for ApiError {
    fn from(e: IngestError) -> ApiError {
        if e.is_not_found() {
            ApiError::NotFound(e.to_string())
        } else {
            ApiError::Internal(e.to_string())
        }
    }
}

/// Resolves the request against the data root and renders it. This is the
/// same path the CLI takes.
pub fn render_request(root: &DataRoot, req: &RenderRequest) -> Result<RenderedFigure, ApiError> {
    let (manifest, table) = root.dataset(&req.dataset)?;
    let atlas_id = req.atlas.as_deref().unwrap_or(&manifest.atlas);
    let atlas = root.atlas(atlas_id)?;
    render_validated(&req.spec, &table, &atlas).map_err(ApiError::Invalid)
}

pub fn parse_request(body: &[u8]) -> Result<RenderRequest, ApiError> {
    serde_json::from_slice(body)
        .map_err(|e| ApiError::BadRequest(format!("malformed request: {e}")))
}

type AppState = Arc<DataRoot>;

pub fn router(config: &ServiceConfig) -> Router {
    let state: AppState = Arc::new(DataRoot::new(&config.root));
    let app = Router::new()
        .route("/api/datasets", get(datasets))
        .route("/api/atlases", get(atlases))
        .route("/api/render", post(render_svg))
        .route(REPORT_PATH, post(render_report))
        .with_state(state);
    match cors_layer(&config.cors_origins) {
        Some(layer) => app.layer(layer),
        None => app,
    }
}

fn cors_layer(origins: &[String]) -> Option<CorsLayer> {
    if origins.is_empty() {
        return None;
    }
    let allow = if origins.iter().any(|o| o == "*") {
        AllowOrigin::any()
    } else {
        let values: Vec<HeaderValue> = origins.iter().filter_map(|o| o.parse().ok()).collect();
        AllowOrigin::list(values)
    };
    Some(
        CorsLayer::new()
            .allow_origin(allow)
            .allow_methods([Method::GET, Method::POST])
            .allow_headers([header::CONTENT_TYPE])
            .expose_headers([header::LINK]),
    )
}

async fn datasets(State(root): State<AppState>) -> Json<Vec<DatasetSummary>> {
    let list = tokio::task::spawn_blocking(move || root.dataset_summaries())
        .await
        .unwrap_or_default();
    Json(list)
}

async fn atlases(State(root): State<AppState>) -> Json<Vec<AtlasSummary>> {
    let list = tokio::task::spawn_blocking(move || root.atlases())
        .await
        .unwrap_or_default();
    Json(list)
}

async fn rendered(root: AppState, body: Bytes) -> Result<RenderedFigure, ApiError> {
    let req = parse_request(&body)?;
    tokio::task::spawn_blocking(move || render_request(&root, &req))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
}

async fn render_svg(State(root): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let fig = rendered(root, body).await?;
    let link = format!("<{REPORT_PATH}>; rel=\"describedby\"; type=\"application/json\"");
    Ok((
        [
            (header::CONTENT_TYPE, SVG_TYPE.to_string()),
            (header::LINK, link),
        ],
        fig.svg,
    )
        .into_response())
}

async fn render_report(State(root): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let fig = rendered(root, body).await?;
    Ok((
        [(header::CONTENT_TYPE, "application/json")],
        fig.report.to_json(),
    )
        .into_response())
}

pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(&config)).await
}
