//! HTTP reward service.
//!
//! `POST /v1/reward` scores a batch of `(prediction, reference)` pairs,
//! `POST /v1/score` computes corpus metrics over a batch and
//! `GET /v1/health` reports the version and a hash of the startup config.
//! Reward computation is pure, so handlers share the config read-only.

use std::collections::{BTreeMap, BTreeSet};
use std::future::Future;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use geoformal::corpus::{domains, score_records};
use geoformal::metrics::Aggregation;
use geoformal::reward::total_reward;
use geoformal::{Category, CorpusRecord, CorpusReport, RewardConfig, RewardConfigOverride, RewardError};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use tokio::net::TcpListener;

pub const SERVICE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One pair to score. Same fields as a corpus record.
pub type RewardItem = CorpusRecord;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RewardRequest {
    pub items: Vec<RewardItem>,
    #[serde(default)]
    pub config_override: Option<RewardConfigOverride>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreRequest {
    pub items: Vec<RewardItem>,
    #[serde(default)]
    pub config_override: Option<RewardConfigOverride>,
    #[serde(default)]
    pub aggregation: Aggregation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardResult {
    pub id: String,
    pub total: f64,
    pub r_fmt: f64,
    pub r_geo: f64,
    pub per_category_precision: BTreeMap<Category, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardResponse {
    pub items: Vec<RewardResult>,
    pub config_echo: RewardConfig,
    pub service_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemError {
    pub index: usize,
    pub id: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub detail: String,
    pub item_errors: Vec<ItemError>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn bad_request(detail: impl Into<String>, item_errors: Vec<ItemError>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            body: ErrorBody {
                error: "invalid_request".into(),
                detail: detail.into(),
                item_errors,
            },
        }
    }

    fn invalid_reference(item_errors: Vec<ItemError>) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            body: ErrorBody {
                error: "invalid_reference".into(),
                detail: format!("{} item(s) have references that fail parsing or consistency", item_errors.len()),
                item_errors,
            },
        }
    }

    fn internal(detail: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: ErrorBody {
                error: "internal".into(),
                detail: detail.into(),
                item_errors: Vec::new(),
            },
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

struct AppState {
    config: RewardConfig,
    config_hash: String,
}

/// SHA-256 of the config's JSON serialization, hex encoded.
pub fn config_hash(config: &RewardConfig) -> String {
    let bytes = serde_json::to_vec(config).expect("config serializes");
    hex::encode(Sha256::digest(&bytes))
}

pub fn router(config: RewardConfig) -> Router {
    let state = Arc::new(AppState {
        config_hash: config_hash(&config),
        config,
    });
    Router::new()
        .route("/v1/health", get(health))
        .route("/v1/reward", post(reward))
        .route("/v1/score", post(score))
        .with_state(state)
}

/// Serve until `shutdown` resolves; in-flight requests are finished.
pub async fn serve_with_shutdown(
    listener: TcpListener,
    config: RewardConfig,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(config)).with_graceful_shutdown(shutdown).await
}

/// Bind and serve until Ctrl-C or SIGTERM.
pub async fn serve(bind: SocketAddr, config: RewardConfig) -> std::io::Result<()> {
    config
        .validate()
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e.to_string()))?;
    let listener = TcpListener::bind(bind).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    serve_with_shutdown(listener, config, termination()).await
}

async fn termination() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = term => {},
    }
}

async fn health(State(state): State<Arc<AppState>>) -> Json<Value> {
    Json(json!({
        "status": "ok",
        "version": SERVICE_VERSION,
        "config_hash": state.config_hash,
    }))
}

/// Decode `items` one by one so every bad item is reported, then the rest
/// of the body.
fn decode<T: for<'de> Deserialize<'de>>(body: &[u8]) -> Result<T, ApiError> {
    let value: Value =
        serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("body is not JSON: {e}"), Vec::new()))?;
    let Some(items) = value.get("items").and_then(Value::as_array) else {
        return Err(ApiError::bad_request("`items` must be an array", Vec::new()));
    };
    if items.is_empty() {
        return Err(ApiError::bad_request("`items` is empty", Vec::new()));
    }
    let mut errors = Vec::new();
    let mut seen = BTreeSet::new();
    for (index, item) in items.iter().enumerate() {
        let id = item.get("id").and_then(Value::as_str).map(str::to_string);
        match serde_json::from_value::<RewardItem>(item.clone()) {
            Ok(record) => {
                if !seen.insert(record.id.clone()) {
                    errors.push(ItemError {
                        index,
                        id,
                        message: format!("duplicate id `{}`", record.id),
                    });
                }
            }
            Err(e) => errors.push(ItemError {
                index,
                id,
                message: e.to_string(),
            }),
        }
    }
    if !errors.is_empty() {
        return Err(ApiError::bad_request("one or more items are malformed", errors));
    }
    serde_json::from_value(value).map_err(|e| ApiError::bad_request(e.to_string(), Vec::new()))
}

fn effective_config(base: &RewardConfig, patch: Option<&RewardConfigOverride>) -> Result<RewardConfig, ApiError> {
    let cfg = patch.map_or_else(|| base.clone(), |o| o.apply(base));
    cfg.validate()
        .map_err(|e| ApiError::bad_request(format!("invalid config_override: {e}"), Vec::new()))?;
    Ok(cfg)
}

/// Rewards for every item, in request order.
pub fn reward_batch(items: &[RewardItem], config: &RewardConfig) -> Result<Vec<RewardResult>, ApiError> {
    let mut results = Vec::with_capacity(items.len());
    let mut bad_refs = Vec::new();
    for (index, item) in items.iter().enumerate() {
        match total_reward(&item.prediction, &item.reference, item.domain, config) {
            Ok(b) => results.push(RewardResult {
                id: item.id.clone(),
                total: b.total,
                r_fmt: b.r_fmt,
                r_geo: b.r_geo,
                per_category_precision: b.per_category_precision,
            }),
            Err(RewardError::BadReference(problems)) => bad_refs.push(ItemError {
                index,
                id: Some(item.id.clone()),
                message: problems.join("; "),
            }),
            Err(RewardError::Config(e)) => {
                return Err(ApiError::bad_request(
                    format!("invalid config for item `{}`: {e}", item.id),
                    Vec::new(),
                ))
            }
            Err(e) => return Err(ApiError::internal(e.to_string())),
        }
    }
    if bad_refs.is_empty() {
        Ok(results)
    } else {
        Err(ApiError::invalid_reference(bad_refs))
    }
}

async fn reward(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Json<RewardResponse>, ApiError> {
    let request: RewardRequest = decode(&body)?;
    let config = effective_config(&state.config, request.config_override.as_ref())?;
    let echo = config.clone();
    let items = tokio::task::spawn_blocking(move || reward_batch(&request.items, &config))
        .await
        .map_err(|e| ApiError::internal(e.to_string()))??;
    Ok(Json(RewardResponse {
        items,
        config_echo: echo,
        service_version: SERVICE_VERSION.to_string(),
    }))
}

/// Per-domain reports keyed by domain name.
pub fn score_batch(items: &[RewardItem], config: &RewardConfig, aggregation: Aggregation) -> Result<Value, ApiError> {
    let mut reports = serde_json::Map::new();
    let mut present = domains(items);
    present.sort_by_key(|d| d.to_string());
    for domain in present {
        let subset: Vec<RewardItem> = items.iter().filter(|r| r.domain == domain).cloned().collect();
        let report: CorpusReport =
            score_records(&subset, domain, aggregation, config.mode).map_err(|e| ApiError::internal(e.to_string()))?;
        reports.insert(domain.to_string(), report.to_json());
    }
    Ok(json!({ "reports": reports, "service_version": SERVICE_VERSION }))
}

async fn score(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Json<Value>, ApiError> {
    let request: ScoreRequest = decode(&body)?;
    let config = effective_config(&state.config, request.config_override.as_ref())?;
    let aggregation = request.aggregation;
    let value = tokio::task::spawn_blocking(move || score_batch(&request.items, &config, aggregation))
        .await
        .map_err(|e| ApiError::internal(e.to_string()))??;
    Ok(Json(value))
}
