//! HTTP routes. Bodies are JSON; errors are `{error, message, detail}`.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::Utc;
use nadea_core::engine::{ProofState, RuleError, RuleRequest};
use nadea_core::export::{
    parse_proof, serialize_partial, serialize_proof, to_isar_closed, to_isar_open, IsarError, ProofTextError,
};
use nadea_core::kernel::{check, Rule};
use nadea_core::semantics::{search_countermodel, NoCountermodel, SearchConfig};
use nadea_core::syntax::{parse_formula, parse_term, ParseError};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::Config;
use crate::store::{Event, Session, SessionRef, Store};
use crate::wire::{wire_state, WireState};

pub const PROOF_MEDIA_TYPE: &str = "text/x-nadea-proof";
pub const THEORY_MEDIA_TYPE: &str = "text/x-isabelle-theory";

/// Largest universe the countermodel endpoint will search.
const MAX_COUNTERMODEL_SIZE: usize = 6;

pub struct AppState {
    pub store: Store,
    pub config: Config,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
    detail: Value,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, code, message: message.into(), detail: Value::Null }
    }

    fn detail(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }

    fn not_found(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "unknown_session", format!("no session {id}"))
    }

    fn parse(field: &str, text: &str, e: ParseError) -> Self {
        let (line, column) = e.line_col(text);
        ApiError::new(StatusCode::BAD_REQUEST, "parse_error", format!("{field}: {}", e.kind))
            .detail(json!({ "field": field, "position": e.position, "line": line, "column": column }))
    }

    fn internal(e: impl std::fmt::Display) -> Self {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": self.code, "message": self.message, "detail": self.detail });
        (self.status, Json(body)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", e.body_text())
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/session", post(create))
        .route("/api/session/import", post(import))
        .route("/api/session/{id}", get(show))
        .route("/api/session/{id}/apply", post(apply))
        .route("/api/session/{id}/undo", post(undo))
        .route("/api/session/{id}/feasibility", get(feasibility))
        .route("/api/session/{id}/export/proof", get(export_proof))
        .route("/api/session/{id}/export/isar", get(export_isar))
        .route("/api/session/{id}/export/scratch", get(export_scratch))
        .route("/api/countermodel", post(countermodel))
        .with_state(state)
}

fn session(app: &AppState, id: &str) -> ApiResult<SessionRef> {
    app.store.get(id).ok_or_else(|| ApiError::not_found(id))
}

fn busy() -> ApiError {
    ApiError::new(StatusCode::CONFLICT, "conflict", "another edit to this session is in progress")
}

fn view(s: &Session) -> WireState {
    wire_state(&s.state, s.feasibility.as_ref())
}

#[derive(Serialize)]
struct Created {
    id: String,
    state: WireState,
}

#[derive(Deserialize)]
struct CreateBody {
    goal: String,
}

async fn create(
    State(app): State<Arc<AppState>>,
    body: Result<Json<CreateBody>, JsonRejection>,
) -> ApiResult<Json<Created>> {
    let Json(body) = body?;
    let goal = parse_formula(&body.goal).map_err(|e| ApiError::parse("goal", &body.goal, e))?;
    let state = ProofState::new(goal.clone()).map_err(rule_error)?;
    let view = wire_state(&state, None);
    let id = app.store.insert(state, Event::Create { goal, at: Utc::now() }).map_err(ApiError::internal)?;
    Ok(Json(Created { id, state: view }))
}

async fn show(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<WireState>> {
    let s = session(&app, &id)?;
    let s = s.lock().await;
    Ok(Json(view(&s)))
}

#[derive(Deserialize)]
struct ApplyBody {
    line: usize,
    rule: String,
    #[serde(default)]
    witness: Option<String>,
    #[serde(default)]
    formula: Option<String>,
    /// The `version` the client last saw; a mismatch is a conflict.
    #[serde(default)]
    version: Option<usize>,
}

fn rule_error(e: RuleError) -> ApiError {
    let status = match e {
        RuleError::NodeClosed(_) => StatusCode::CONFLICT,
        _ => StatusCode::BAD_REQUEST,
    };
    ApiError::new(status, e.code(), e.to_string())
}

async fn apply(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<ApplyBody>, JsonRejection>,
) -> ApiResult<Json<WireState>> {
    let Json(body) = body?;
    let rule: Rule = body.rule.parse().map_err(|e: nadea_core::kernel::UnknownRule| {
        ApiError::new(StatusCode::BAD_REQUEST, "unknown_rule", e.to_string())
    })?;
    let witness = match &body.witness {
        Some(text) if !text.trim().is_empty() => {
            Some(parse_term(text).map_err(|e| ApiError::parse("witness", text, e))?)
        }
        _ => None,
    };
    let formula = match &body.formula {
        Some(text) if !text.trim().is_empty() => {
            Some(parse_formula(text).map_err(|e| ApiError::parse("formula", text, e))?)
        }
        _ => None,
    };
    let s = session(&app, &id)?;
    let mut s = s.try_lock().map_err(|_| busy())?;
    if let Some(v) = body.version {
        if v != s.state.history_len() {
            return Err(ApiError::new(StatusCode::CONFLICT, "stale_version", "the session changed since this version")
                .detail(json!({ "expected": s.state.history_len(), "got": v })));
        }
    }
    let node = s.state.node_at_line(body.line).ok_or_else(|| {
        ApiError::new(StatusCode::BAD_REQUEST, "unknown_line", format!("there is no line {}", body.line))
    })?;
    if !s.state.nodes()[node].is_open() {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            "node_closed",
            format!("line {} is already closed", body.line),
        ));
    }
    let request = RuleRequest { node, rule, witness, formula };
    s.state.apply_rule(&request).map_err(rule_error)?;
    if let Err(e) = s.record(&Event::Apply { request, at: Utc::now() }) {
        s.state.undo().expect("just applied");
        return Err(ApiError::internal(e));
    }
    Ok(Json(view(&s)))
}

async fn undo(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<WireState>> {
    let s = session(&app, &id)?;
    let mut s = s.try_lock().map_err(|_| busy())?;
    let before = s.state.clone();
    s.state.undo().map_err(rule_error)?;
    if let Err(e) = s.record(&Event::Undo { at: Utc::now() }) {
        s.state = before;
        return Err(ApiError::internal(e));
    }
    Ok(Json(view(&s)))
}

/// Verdicts for the open goals, keyed by line number.
async fn feasibility(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = session(&app, &id)?;
    let snapshot = {
        let guard = s.lock().await;
        if let Some(cached) = &guard.feasibility {
            return Ok(Json(by_line(&guard.state, cached)));
        }
        guard.state.clone()
    };
    let budget = app.config.prover;
    let (snapshot, verdicts) = tokio::task::spawn_blocking(move || {
        let verdicts = snapshot.assess(&budget);
        (snapshot, verdicts)
    })
    .await
    .map_err(ApiError::internal)?;
    let body = by_line(&snapshot, &verdicts);
    let mut guard = s.lock().await;
    if guard.state == snapshot {
        guard.feasibility = Some(verdicts);
    }
    Ok(Json(body))
}

fn by_line(state: &ProofState, verdicts: &nadea_core::engine::Verdictmap) -> Value {
    let map: serde_json::Map<String, Value> =
        state.lines().iter().filter_map(|l| verdicts.get(&l.node).map(|v| (l.number.to_string(), json!(v)))).collect();
    Value::Object(map)
}

#[derive(Deserialize)]
struct ExportQuery {
    #[serde(default)]
    partial: bool,
}

fn text(media: &'static str, body: String) -> Response {
    ([(header::CONTENT_TYPE, media)], body).into_response()
}

fn incomplete() -> ApiError {
    ApiError::new(StatusCode::CONFLICT, "incomplete", "the proof has open goals")
}

async fn export_proof(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<ExportQuery>,
) -> ApiResult<Response> {
    let s = session(&app, &id)?;
    let s = s.lock().await;
    if s.state.is_complete() {
        let d = s.state.extract().map_err(rule_error)?;
        Ok(text(PROOF_MEDIA_TYPE, serialize_proof(&d)))
    } else if q.partial {
        Ok(text(PROOF_MEDIA_TYPE, serialize_partial(&s.state)))
    } else {
        Err(incomplete().detail(json!({ "hint": "add ?partial=true for a file with open goals marked" })))
    }
}

fn isar_error(e: IsarError) -> ApiError {
    match e {
        IsarError::NoPrefix => ApiError::new(StatusCode::CONFLICT, "no_prefix", e.to_string()),
        IsarError::Unchecked(_) => ApiError::new(StatusCode::CONFLICT, "unchecked", e.to_string()),
    }
}

async fn export_isar(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Response> {
    let s = session(&app, &id)?;
    let d = s.lock().await.state.extract().map_err(|_| incomplete())?;
    Ok(text(THEORY_MEDIA_TYPE, to_isar_closed(&d).map_err(isar_error)?))
}

async fn export_scratch(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Response> {
    let s = session(&app, &id)?;
    let d = s.lock().await.state.extract().map_err(|_| incomplete())?;
    Ok(text(THEORY_MEDIA_TYPE, to_isar_open(&d).map_err(isar_error)?))
}

#[derive(Deserialize)]
struct ImportBody {
    proof: String,
}

async fn import(
    State(app): State<Arc<AppState>>,
    body: Result<Json<ImportBody>, JsonRejection>,
) -> ApiResult<Json<Created>> {
    let Json(body) = body?;
    let d = parse_proof(&body.proof).map_err(|e| {
        let detail = match &e {
            ProofTextError::Format { line, column, .. } => json!({ "line": line, "column": column }),
            ProofTextError::Invariant { line, .. } => json!({ "line": line }),
        };
        ApiError::new(StatusCode::BAD_REQUEST, "proof_format", e.to_string()).detail(detail)
    })?;
    let report = check(&d);
    if !report.ok {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, "rejected", report.to_string()).detail(json!(report)));
    }
    let state = ProofState::replay(&d).map_err(rule_error)?;
    let view = wire_state(&state, None);
    let id = app.store.insert(state, Event::Import { proof: d, at: Utc::now() }).map_err(ApiError::internal)?;
    Ok(Json(Created { id, state: view }))
}

#[derive(Deserialize)]
struct CountermodelBody {
    formula: String,
    #[serde(default)]
    max_size: Option<usize>,
}

async fn countermodel(
    State(app): State<Arc<AppState>>,
    body: Result<Json<CountermodelBody>, JsonRejection>,
) -> ApiResult<Json<Value>> {
    let Json(body) = body?;
    let f = parse_formula(&body.formula).map_err(|e| ApiError::parse("formula", &body.formula, e))?;
    let max_size = body.max_size.unwrap_or(app.config.countermodel.max_size);
    if max_size == 0 || max_size > MAX_COUNTERMODEL_SIZE {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "bad_request",
            format!("max_size must be between 1 and {MAX_COUNTERMODEL_SIZE}"),
        ));
    }
    let config = SearchConfig { max_size, ..app.config.countermodel };
    let result =
        tokio::task::spawn_blocking(move || search_countermodel(&f, &config)).await.map_err(ApiError::internal)?;
    Ok(Json(match result {
        Ok(cm) => json!(cm),
        Err(NoCountermodel::NotFound) => json!({ "found": false, "reason": "not_found" }),
        Err(NoCountermodel::BudgetExhausted) => json!({ "found": false, "reason": "budget_exhausted" }),
    }))
}
