//! HTTP+JSON interface over a [`Store`].

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use cswud_core::conllu::{advisories, children_map, count_hard};
use cswud_core::evaluation::EquivalenceGroups;
use cswud_core::switchpoint::{analysis_subset, distributions, EmojiRanges, SwitchMode};

use crate::store::{Field, Outcome, Reference, Status, Store, StoreError};

pub const ANNOTATOR_HEADER: &str = "x-annotator-id";

pub struct AppState {
    pub store: Store,
    pub groups: EquivalenceGroups,
}

#[derive(Debug)]
pub struct ApiError(StatusCode, Value);

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        ApiError(
            StatusCode::BAD_REQUEST,
            json!({"error": "bad_request", "message": message.into()}),
        )
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        let message = e.to_string();
        match e {
            StoreError::NotFound(_) => {
                ApiError(StatusCode::NOT_FOUND, json!({"error": "not_found", "message": message}))
            }
            StoreError::Conflict { current, .. } => ApiError(
                StatusCode::CONFLICT,
                json!({"error": "conflict", "message": message, "current": current}),
            ),
            StoreError::Invalid(_) => ApiError(
                StatusCode::UNPROCESSABLE_ENTITY,
                json!({"error": "invalid", "message": message}),
            ),
            StoreError::Blocked { violations, .. } => ApiError(
                StatusCode::CONFLICT,
                json!({"error": "blocked", "message": message, "violations": violations}),
            ),
            StoreError::Incomplete { missing } => ApiError(
                StatusCode::UNPROCESSABLE_ENTITY,
                json!({"error": "incomplete", "message": message, "missing": missing}),
            ),
            StoreError::Io { .. } | StoreError::Corrupt { .. } => {
                log::error!("{message}");
                ApiError(
                    StatusCode::INTERNAL_SERVER_ERROR,
                    json!({"error": "storage", "message": message}),
                )
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

fn annotator(headers: &HeaderMap) -> Result<String, ApiError> {
    headers
        .get(ANNOTATOR_HEADER)
        .and_then(|v| v.to_str().ok())
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(str::to_string)
        .ok_or_else(|| ApiError::bad_request(format!("missing {ANNOTATOR_HEADER} header")))
}

fn to_value<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("response serializes")
}

fn outcome_json(o: Outcome) -> Value {
    match o {
        Outcome::Updated {
            sentence,
            violations,
            state,
        } => json!({
            "sentence": sentence,
            "violations": violations,
            "hard_violations": count_hard(&violations),
            "status": state.status,
            "reviewed_by": state.reviewed_by,
        }),
        Outcome::Imported { corpus_id, sentences } => json!({"corpus_id": corpus_id, "sentences": sentences}),
    }
}

/// Runs a store mutation off the async executor.
async fn mutate<F>(state: &Arc<AppState>, f: F) -> ApiResult
where
    F: FnOnce(&Store) -> Result<Outcome, StoreError> + Send + 'static,
{
    let state = Arc::clone(state);
    let outcome = tokio::task::spawn_blocking(move || f(&state.store))
        .await
        .map_err(|e| {
            ApiError(
                StatusCode::INTERNAL_SERVER_ERROR,
                json!({"error": "internal", "message": e.to_string()}),
            )
        })??;
    Ok(Json(outcome_json(outcome)))
}

async fn list_corpora(State(st): State<Arc<AppState>>) -> ApiResult {
    let snap = st.store.snapshot();
    let corpora: Vec<Value> = snap
        .corpora
        .values()
        .map(|c| {
            let mut by_status: BTreeMap<String, usize> = BTreeMap::new();
            for id in &c.sent_ids {
                let key = to_value(snap.sentences[id].status);
                *by_status
                    .entry(key.as_str().unwrap_or_default().to_string())
                    .or_default() += 1;
            }
            json!({"id": c.id, "sentences": c.sent_ids.len(), "has_gold": c.has_gold, "status": by_status})
        })
        .collect();
    Ok(Json(Value::Array(corpora)))
}

#[derive(Deserialize)]
struct StatusQuery {
    status: Option<String>,
}

async fn corpus_sentences(
    State(st): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<StatusQuery>,
) -> ApiResult {
    let status = match q.status.as_deref() {
        None | Some("") => None,
        Some(raw) => Some(Status::parse(raw).ok_or_else(|| ApiError::bad_request(format!("unknown status {raw:?}")))?),
    };
    let snap = st.store.snapshot();
    let rows: Vec<Value> = snap
        .corpus_sentences(&id, status)?
        .into_iter()
        .map(|r| {
            let violations = r.violations();
            json!({
                "sent_id": r.current.sent_id,
                "text": r.current.text(),
                "status": r.status,
                "hard_violations": count_hard(&violations),
                "violations": violations.len(),
            })
        })
        .collect();
    Ok(Json(Value::Array(rows)))
}

async fn sentence(State(st): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult {
    let snap = st.store.snapshot();
    let r = snap.sentence(&id)?;
    let violations = r.violations();
    let (children, children_error) = match children_map(&r.current) {
        Ok(m) => (to_value(m), Value::Null),
        Err(e) => (Value::Null, Value::String(e.to_string())),
    };
    Ok(Json(json!({
        "corpus_id": r.corpus_id,
        "sentence": r.current,
        "status": r.status,
        "reviewed_by": r.reviewed_by,
        "violations": violations,
        "hard_violations": count_hard(&violations),
        "advisories": advisories(&r.current),
        "history": r.history,
        "children_map": children,
        "children_error": children_error,
        "gold": r.gold,
    })))
}

#[derive(Deserialize)]
struct CorrectionBody {
    #[serde(default)]
    token_id: u32,
    field: Field,
    old_value: String,
    new_value: String,
}

async fn post_correction(
    State(st): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    headers: HeaderMap,
    Json(body): Json<CorrectionBody>,
) -> ApiResult {
    let who = annotator(&headers)?;
    mutate(&st, move |store| {
        store.correct(&id, body.token_id, body.field, &body.old_value, &body.new_value, &who)
    })
    .await
}

async fn post_accept(State(st): State<Arc<AppState>>, UrlPath(id): UrlPath<String>, headers: HeaderMap) -> ApiResult {
    let who = annotator(&headers)?;
    mutate(&st, move |store| store.accept(&id, &who)).await
}

#[derive(Deserialize)]
struct AgreementQuery {
    a: String,
    b: String,
    field: String,
    /// Comma-separated sentence ids; all touched sentences when absent.
    sent_ids: Option<String>,
}

async fn agreement(State(st): State<Arc<AppState>>, Query(q): Query<AgreementQuery>) -> ApiResult {
    let field = Field::parse(&q.field).ok_or_else(|| ApiError::bad_request(format!("unknown field {:?}", q.field)))?;
    let ids: Option<Vec<String>> = q
        .sent_ids
        .as_deref()
        .filter(|s| !s.is_empty())
        .map(|s| s.split(',').map(|x| x.trim().to_string()).collect());
    let snap = st.store.snapshot();
    Ok(Json(to_value(snap.agreement(&q.a, &q.b, field, ids.as_deref())?)))
}

#[derive(Deserialize)]
struct ReportQuery {
    reference: Option<String>,
}

async fn report(
    State(st): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<ReportQuery>,
) -> ApiResult {
    let raw = q.reference.as_deref().unwrap_or("GOLD");
    let reference = Reference::parse(raw).ok_or_else(|| ApiError::bad_request(format!("unknown reference {raw:?}")))?;
    let snap = st.store.snapshot();
    Ok(Json(to_value(snap.report(&id, reference, &st.groups)?)))
}

#[derive(Deserialize)]
struct SwitchQuery {
    mode: Option<String>,
}

async fn switchpoints(
    State(st): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<SwitchQuery>,
) -> ApiResult {
    let mode = match q.mode.as_deref() {
        None | Some("hold") => SwitchMode::HoldContent,
        Some("strict") => SwitchMode::StrictPrevious,
        Some(other) => return Err(ApiError::bad_request(format!("unknown mode {other:?}"))),
    };
    let snap = st.store.snapshot();
    let corpus = analysis_subset(&snap.current_corpus(&id)?);
    let rows: Vec<Value> = distributions(&corpus, mode, &EmojiRanges::default())
        .into_iter()
        .map(|((field, direction, subset), d)| {
            json!({
                "field": field,
                "direction": direction,
                "subset": subset,
                "total": d.total(),
                "counts": d.counts,
                "proportions": d.proportions,
            })
        })
        .collect();
    Ok(Json(
        json!({"corpus_id": id, "sentences": corpus.len(), "distributions": rows}),
    ))
}

pub fn router(state: Arc<AppState>, ui_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/corpora", get(list_corpora))
        .route("/corpora/{id}/sentences", get(corpus_sentences))
        .route("/sentences/{id}", get(sentence))
        .route("/sentences/{id}/corrections", post(post_correction))
        .route("/sentences/{id}/accept", post(post_accept))
        .route("/agreement", get(agreement))
        .route("/reports/{corpus_id}", get(report))
        .route("/switchpoints/{corpus_id}", get(switchpoints))
        .with_state(state);
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}
