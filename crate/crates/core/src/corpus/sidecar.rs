//! Refinement sidecar JSON.
//!
//! ```json
//! {
//!   "passage_id": "p1",
//!   "version": 0,
//!   "entries": [
//!     {
//!       "node_id": "1.2",
//!       "category": "Genre-based",
//!       "status": "confirmed",
//!       "note": ""
//!     }
//!   ]
//! }
//! ```
//!
//! `category` is one of the six category names or `null` (only allowed for
//! `unreviewed` entries). `status` is `unreviewed`, `suggested` or
//! `confirmed`. `version` defaults to 0 and `note` to the empty string.

use std::collections::HashSet;

use serde::Deserialize;

use super::{CorpusError, Position};
use crate::refinement::{ImplicitCategory, RefinementDocument, RefinementEntry, ReviewStatus};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    passage_id: String,
    #[serde(default)]
    version: u64,
    entries: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    node_id: String,
    category: Option<String>,
    status: ReviewStatus,
    #[serde(default)]
    note: String,
}

pub fn parse_refinement(bytes: &[u8]) -> Result<RefinementDocument, CorpusError> {
    let raw: RawDocument = serde_json::from_slice(bytes).map_err(|err| CorpusError::Syntax {
        at: Position {
            line: err.line(),
            column: err.column(),
        },
        message: err.to_string(),
    })?;
    let mut seen = HashSet::new();
    let mut entries = Vec::with_capacity(raw.entries.len());
    for e in raw.entries {
        if !seen.insert(e.node_id.clone()) {
            return Err(CorpusError::DuplicateEntry(e.node_id));
        }
        let category = match e.category {
            Some(name) => Some(
                name.parse::<ImplicitCategory>()
                    .map_err(|_| CorpusError::UnknownCategory(name))?,
            ),
            None if e.status == ReviewStatus::Unreviewed => None,
            None => {
                return Err(CorpusError::MissingCategory {
                    node: e.node_id,
                    status: e.status,
                })
            }
        };
        entries.push(RefinementEntry {
            node_id: e.node_id,
            category,
            status: e.status,
            note: e.note,
        });
    }
    Ok(RefinementDocument {
        passage_id: raw.passage_id,
        version: raw.version,
        entries,
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_refinement(doc: &RefinementDocument) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(doc).expect("refinement documents always serialize");
    out.push(b'\n');
    out
}
