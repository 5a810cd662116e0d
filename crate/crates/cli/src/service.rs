//! HTTP service for the review interface.
//!
//! Passages are loaded once and never change. Each passage keeps its current
//! sidecar behind a lock that readers only hold long enough to clone an
//! `Arc`; writers queue on a separate per-passage mutex while they check the
//! version tag and persist the new sidecar.

use std::collections::{BTreeMap, BTreeSet};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};
use ucca_refine::corpus::{
    read_refinement_or_empty, write_refinement, write_refinement_file, CorpusError, CorpusHandle,
    ParseMode,
};
use ucca_refine::graph::ImplicitUnit;
use ucca_refine::heuristics::Engine;
use ucca_refine::refinement::{assign_category_with_note, validate_refinement, RefinementError};
use ucca_refine::stats::{passage_stats, Corpus};
use ucca_refine::{
    implicit_units, validate_graph, Edge, ImplicitCategory, Node, Passage, RefinementDocument,
    ReviewStatus, Token,
};

use crate::report::{json, StatsOutput};

struct Entry {
    passage: Arc<Passage>,
    sidecar: RwLock<Arc<RefinementDocument>>,
    writer: Mutex<()>,
}

/// Loaded corpus with its live refinement overlay.
pub struct Session {
    refinements: PathBuf,
    engine: Engine,
    strict: bool,
    entries: BTreeMap<String, Entry>,
    order: Vec<String>,
    dirty: Mutex<BTreeSet<String>>,
}

#[derive(Debug, thiserror::Error)]
pub enum WriteError {
    #[error("unknown passage '{0}'")]
    UnknownPassage(String),
    #[error(transparent)]
    Refinement(#[from] RefinementError),
    #[error("node '{0}' has no refinement entry")]
    NoEntry(String),
    #[error("version conflict: expected {expected}, current {current}")]
    Conflict { expected: u64, current: u64 },
    #[error(transparent)]
    Io(#[from] CorpusError),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AssignRequest {
    pub category: ImplicitCategory,
    pub status: ReviewStatus,
    #[serde(default)]
    pub note: Option<String>,
    #[serde(default)]
    pub expected_version: Option<u64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct DismissQuery {
    pub expected_version: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassageSummary {
    pub id: String,
    pub sentences: usize,
    pub implicit_total: usize,
    pub implicit_valid: usize,
    pub version: u64,
}

/// A passage graph as served to the interface.
#[derive(Clone, Debug, Serialize)]
pub struct PassageView<'a> {
    pub id: &'a str,
    pub root: &'a str,
    pub tokens: &'a [Token],
    pub nodes: &'a [Node],
    pub edges: &'a [Edge],
    pub implicit: Vec<ImplicitUnit>,
    pub version: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progress {
    pub passages: usize,
    /// Valid implicit Participants across the corpus.
    pub implicit_valid: usize,
    pub unreviewed: usize,
    pub suggested: usize,
    pub confirmed: usize,
    /// Valid implicit Participants without any sidecar entry.
    pub missing: usize,
    /// Passages written during this session.
    pub dirty: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Categories {
    pub categories: Vec<&'static str>,
    pub statuses: Vec<&'static str>,
}

impl Session {
    /// Loads every passage under `corpus` and its sidecar from
    /// `refinements`. Fails if any passage or sidecar is invalid.
    pub fn open(
        corpus: &Path,
        refinements: &Path,
        engine: Engine,
        mode: ParseMode,
        strict: bool,
    ) -> anyhow::Result<Self> {
        let handle = CorpusHandle::open(corpus, mode)?;
        let passages = handle.load_all()?;
        let mut docs = Vec::with_capacity(passages.len());
        for p in &passages {
            docs.push(read_refinement_or_empty(refinements, p.id())?);
        }
        Self::from_parts(passages, docs, refinements, engine, strict)
    }

    pub fn from_parts(
        passages: Vec<Passage>,
        docs: Vec<RefinementDocument>,
        refinements: &Path,
        engine: Engine,
        strict: bool,
    ) -> anyhow::Result<Self> {
        let mut docs: BTreeMap<String, RefinementDocument> = docs
            .into_iter()
            .map(|d| (d.passage_id.clone(), d))
            .collect();
        let mut problems = Vec::new();
        let mut entries = BTreeMap::new();
        let mut order = Vec::new();
        for p in passages {
            let doc = docs
                .remove(p.id())
                .unwrap_or_else(|| RefinementDocument::new(p.id()));
            let report = validate_graph(&p);
            let sidecar = validate_refinement(&p, &doc, false);
            for v in report.violations.iter().chain(&sidecar.violations) {
                problems.push(format!("{}: {v}", p.id()));
            }
            order.push(p.id().to_string());
            entries.insert(
                p.id().to_string(),
                Entry {
                    passage: Arc::new(p),
                    sidecar: RwLock::new(Arc::new(doc)),
                    writer: Mutex::new(()),
                },
            );
        }
        if !problems.is_empty() {
            bail!("corpus does not validate:\n{}", problems.join("\n"));
        }
        Ok(Session {
            refinements: refinements.to_path_buf(),
            engine,
            strict,
            entries,
            order,
            dirty: Mutex::new(BTreeSet::new()),
        })
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(String::as_str)
    }

    pub fn passage(&self, id: &str) -> Option<Arc<Passage>> {
        self.entries.get(id).map(|e| e.passage.clone())
    }

    pub fn refinement(&self, id: &str) -> Option<Arc<RefinementDocument>> {
        self.entries.get(id).map(|e| e.sidecar.read().clone())
    }

    pub fn summaries(&self) -> Vec<PassageSummary> {
        self.ids()
            .map(|id| {
                let e = &self.entries[id];
                let s = passage_stats(&e.passage);
                PassageSummary {
                    id: id.to_string(),
                    sentences: s.n_sentences,
                    implicit_total: s.n_implicit_total,
                    implicit_valid: s.n_implicit_valid,
                    version: e.sidecar.read().version,
                }
            })
            .collect()
    }

    /// Same bytes as the batch `suggest --out` file for the passage.
    pub fn suggestions_json(&self, id: &str) -> Option<String> {
        let p = self.passage(id)?;
        let doc = self.engine.suggest(&p).expect("session passages are valid");
        Some(doc.to_json())
    }

    /// Current state as a batch corpus.
    pub fn corpus(&self) -> Corpus {
        let passages = self
            .ids()
            .map(|id| (*self.entries[id].passage).clone())
            .collect();
        let docs = self
            .ids()
            .map(|id| (*self.entries[id].sidecar.read().clone()).clone());
        Corpus::new(passages).with_refinements(docs)
    }

    /// Same JSON as `stats --refinements <dir> --format json`.
    pub fn stats_json(&self) -> Result<String, ucca_refine::stats::StatsError> {
        Ok(StatsOutput::build(&self.corpus(), true, self.strict, false)?.to_json())
    }

    pub fn progress(&self) -> Progress {
        let mut out = Progress {
            passages: self.order.len(),
            dirty: self.dirty.lock().iter().cloned().collect(),
            ..Progress::default()
        };
        for id in self.ids() {
            let e = &self.entries[id];
            let doc = e.sidecar.read().clone();
            for u in implicit_units(&e.passage).into_iter().filter(|u| u.valid) {
                out.implicit_valid += 1;
                match doc.entry(&u.node).map(|x| x.status) {
                    None => out.missing += 1,
                    Some(ReviewStatus::Unreviewed) => out.unreviewed += 1,
                    Some(ReviewStatus::Suggested) => out.suggested += 1,
                    Some(ReviewStatus::Confirmed) => out.confirmed += 1,
                }
            }
        }
        out
    }

    fn update(
        &self,
        id: &str,
        expected: Option<u64>,
        change: impl FnOnce(&Passage, &RefinementDocument) -> Result<RefinementDocument, WriteError>,
    ) -> Result<Arc<RefinementDocument>, WriteError> {
        let e = self
            .entries
            .get(id)
            .ok_or_else(|| WriteError::UnknownPassage(id.to_string()))?;
        let _turn = e.writer.lock();
        let current = e.sidecar.read().clone();
        if let Some(expected) = expected.filter(|v| *v != current.version) {
            return Err(WriteError::Conflict {
                expected,
                current: current.version,
            });
        }
        let mut next = change(&e.passage, &current)?;
        if next == *current {
            return Ok(current);
        }
        next.version = current.version + 1;
        write_refinement_file(&self.refinements, &next)?;
        let next = Arc::new(next);
        *e.sidecar.write() = next.clone();
        self.dirty.lock().insert(id.to_string());
        Ok(next)
    }

    /// Sets the category of one implicit node and persists the sidecar.
    pub fn assign(
        &self,
        id: &str,
        node: &str,
        req: &AssignRequest,
    ) -> Result<Arc<RefinementDocument>, WriteError> {
        self.update(id, req.expected_version, |p, doc| {
            Ok(assign_category_with_note(
                doc,
                p,
                node,
                req.category,
                req.status,
                req.note.as_deref(),
            )?)
        })
    }

    /// Drops the entry of one implicit node.
    pub fn dismiss(
        &self,
        id: &str,
        node: &str,
        expected: Option<u64>,
    ) -> Result<Arc<RefinementDocument>, WriteError> {
        self.update(id, expected, |_, doc| match doc.entry(node) {
            Some(_) => Ok(doc.without(node)),
            None => Err(WriteError::NoEntry(node.to_string())),
        })
    }
}

type Shared = Arc<Session>;

fn json_body(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error(status: StatusCode, message: impl ToString) -> Response {
    json_body(
        status,
        json(&serde_json::json!({ "error": message.to_string() })),
    )
}

fn not_found(id: &str) -> Response {
    error(StatusCode::NOT_FOUND, format!("unknown passage '{id}'"))
}

impl IntoResponse for WriteError {
    fn into_response(self) -> Response {
        match &self {
            WriteError::Conflict { current, .. } => json_body(
                StatusCode::CONFLICT,
                json(&serde_json::json!({ "error": self.to_string(), "current_version": current })),
            ),
            WriteError::UnknownPassage(_)
            | WriteError::NoEntry(_)
            | WriteError::Refinement(RefinementError::UnknownNode(_)) => {
                error(StatusCode::NOT_FOUND, self)
            }
            WriteError::Refinement(_) => error(StatusCode::UNPROCESSABLE_ENTITY, self),
            WriteError::Io(_) => error(StatusCode::INTERNAL_SERVER_ERROR, self),
        }
    }
}

fn sidecar_response(doc: &RefinementDocument) -> Response {
    json_body(
        StatusCode::OK,
        String::from_utf8(write_refinement(doc)).expect("sidecar is UTF-8"),
    )
}

async fn list(State(s): State<Shared>) -> Response {
    json_body(StatusCode::OK, json(&s.summaries()))
}

async fn passage(State(s): State<Shared>, UrlPath(id): UrlPath<String>) -> Response {
    let Some(p) = s.passage(&id) else {
        return not_found(&id);
    };
    let version = s.refinement(&id).map_or(0, |d| d.version);
    let view = PassageView {
        id: p.id(),
        root: p.root(),
        tokens: p.tokens(),
        nodes: p.nodes(),
        edges: p.edges(),
        implicit: implicit_units(&p),
        version,
    };
    json_body(StatusCode::OK, json(&view))
}

async fn refinement(State(s): State<Shared>, UrlPath(id): UrlPath<String>) -> Response {
    match s.refinement(&id) {
        Some(doc) => sidecar_response(&doc),
        None => not_found(&id),
    }
}

async fn suggestions(State(s): State<Shared>, UrlPath(id): UrlPath<String>) -> Response {
    match s.suggestions_json(&id) {
        Some(body) => json_body(StatusCode::OK, body),
        None => not_found(&id),
    }
}

async fn assign(
    State(s): State<Shared>,
    UrlPath((id, node)): UrlPath<(String, String)>,
    Json(req): Json<AssignRequest>,
) -> Response {
    let result = tokio::task::spawn_blocking(move || s.assign(&id, &node, &req)).await;
    match result.expect("write task panicked") {
        Ok(doc) => sidecar_response(&doc),
        Err(e) => e.into_response(),
    }
}

async fn dismiss(
    State(s): State<Shared>,
    UrlPath((id, node)): UrlPath<(String, String)>,
    Query(q): Query<DismissQuery>,
) -> Response {
    let result =
        tokio::task::spawn_blocking(move || s.dismiss(&id, &node, q.expected_version)).await;
    match result.expect("write task panicked") {
        Ok(doc) => sidecar_response(&doc),
        Err(e) => e.into_response(),
    }
}

async fn stats(State(s): State<Shared>) -> Response {
    match s.stats_json() {
        Ok(body) => json_body(StatusCode::OK, body),
        Err(e) => error(StatusCode::CONFLICT, e),
    }
}

async fn progress(State(s): State<Shared>) -> Response {
    json_body(StatusCode::OK, json(&s.progress()))
}

async fn categories() -> Response {
    let body = Categories {
        categories: ImplicitCategory::ALL.iter().map(|c| c.name()).collect(),
        statuses: [
            ReviewStatus::Unreviewed,
            ReviewStatus::Suggested,
            ReviewStatus::Confirmed,
        ]
        .iter()
        .map(|s| s.as_str())
        .collect(),
    };
    json_body(StatusCode::OK, json(&body))
}

pub fn router(session: Shared) -> Router {
    Router::new()
        .route("/passages", get(list))
        .route("/passages/{id}", get(passage))
        .route("/passages/{id}/refinement", get(refinement))
        .route("/passages/{id}/suggestions", get(suggestions))
        .route(
            "/passages/{id}/implicit/{node}",
            axum::routing::put(assign).delete(dismiss),
        )
        .route("/stats", get(stats))
        .route("/progress", get(progress))
        .route("/categories", get(categories))
        .with_state(session)
}

pub async fn serve(session: Shared, addr: SocketAddr) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .with_context(|| format!("binding {addr}"))?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(session)).await?;
    Ok(())
}
