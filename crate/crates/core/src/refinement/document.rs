use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::category::ImplicitCategory;
use crate::graph::{implicit_units, Passage, RuleCode, ValidationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReviewStatus {
    Unreviewed,
    Suggested,
    Confirmed,
}

impl ReviewStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ReviewStatus::Unreviewed => "unreviewed",
            ReviewStatus::Suggested => "suggested",
            ReviewStatus::Confirmed => "confirmed",
        }
    }
}

impl fmt::Display for ReviewStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReviewStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unreviewed" => Ok(ReviewStatus::Unreviewed),
            "suggested" => Ok(ReviewStatus::Suggested),
            "confirmed" => Ok(ReviewStatus::Confirmed),
            other => Err(format!("unknown review status '{other}'")),
        }
    }
}

/// Category assignment for one implicit node.
///
/// Unreviewed entries may leave the category open; suggested and confirmed
/// entries always carry one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementEntry {
    pub node_id: String,
    pub category: Option<ImplicitCategory>,
    pub status: ReviewStatus,
    #[serde(default)]
    pub note: String,
}

/// Refinement sidecar for one passage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementDocument {
    pub passage_id: String,
    /// Optimistic-concurrency tag, bumped on every persisted write.
    #[serde(default)]
    pub version: u64,
    pub entries: Vec<RefinementEntry>,
}

impl RefinementDocument {
    pub fn new(passage_id: impl Into<String>) -> Self {
        RefinementDocument {
            passage_id: passage_id.into(),
            version: 0,
            entries: Vec::new(),
        }
    }

    pub fn entry(&self, node_id: &str) -> Option<&RefinementEntry> {
        self.entries.iter().find(|e| e.node_id == node_id)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Returns a copy without the entry for `node_id`.
    pub fn without(&self, node_id: &str) -> Self {
        let mut doc = self.clone();
        doc.entries.retain(|e| e.node_id != node_id);
        doc
    }

    /// Entries in `self` win over entries in `other` for the same node.
    pub fn merged_over(&self, other: &RefinementDocument) -> Self {
        let mut doc = self.clone();
        for e in &other.entries {
            if doc.entry(&e.node_id).is_none() {
                doc.entries.push(e.clone());
            }
        }
        doc
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RefinementError {
    #[error("refinement targets passage '{doc}', not '{passage}'")]
    PassageMismatch { doc: String, passage: String },
    #[error("unknown node '{0}'")]
    UnknownNode(String),
    #[error("node '{0}' is not Implicit")]
    NotImplicit(String),
}

/// Sets the category of an implicit node, replacing any previous entry.
pub fn assign_category(
    doc: &RefinementDocument,
    passage: &Passage,
    node_id: &str,
    category: ImplicitCategory,
    status: ReviewStatus,
) -> Result<RefinementDocument, RefinementError> {
    assign_category_with_note(doc, passage, node_id, category, status, None)
}

/// Like [`assign_category`], prefixing the stored note with `note`.
///
/// When an entry with a different category or status is replaced, the old
/// values are appended to the note so the provenance of the change survives.
pub fn assign_category_with_note(
    doc: &RefinementDocument,
    passage: &Passage,
    node_id: &str,
    category: ImplicitCategory,
    status: ReviewStatus,
    note: Option<&str>,
) -> Result<RefinementDocument, RefinementError> {
    if doc.passage_id != passage.id() {
        return Err(RefinementError::PassageMismatch {
            doc: doc.passage_id.clone(),
            passage: passage.id().to_string(),
        });
    }
    let node = passage
        .node(node_id)
        .ok_or_else(|| RefinementError::UnknownNode(node_id.to_string()))?;
    if !node.is_implicit() {
        return Err(RefinementError::NotImplicit(node_id.to_string()));
    }

    let mut out = doc.clone();
    let prior = out.entries.iter().position(|e| e.node_id == node_id);
    let mut parts: Vec<String> = Vec::new();
    if let Some(n) = note.filter(|n| !n.is_empty()) {
        parts.push(n.to_string());
    }
    match prior {
        Some(i) => {
            let old = &out.entries[i];
            if old.category == Some(category) && old.status == status && note.is_none() {
                return Ok(out);
            }
            if !old.note.is_empty() {
                parts.push(old.note.clone());
            }
            if old.category != Some(category) || old.status != status {
                let old_cat = old.category.map_or("uncategorized", |c| c.name());
                parts.push(format!("replaced {old_cat} ({})", old.status));
            }
            out.entries[i] = RefinementEntry {
                node_id: node_id.to_string(),
                category: Some(category),
                status,
                note: parts.join("; "),
            };
        }
        None => out.entries.push(RefinementEntry {
            node_id: node_id.to_string(),
            category: Some(category),
            status,
            note: parts.join("; "),
        }),
    }
    Ok(out)
}

/// Checks a sidecar against its passage.
///
/// In strict mode every Participant implicit must carry a category.
/// Categories on non-Participant implicit units are reported as warnings.
pub fn validate_refinement(
    passage: &Passage,
    doc: &RefinementDocument,
    strict: bool,
) -> ValidationReport {
    let mut report = ValidationReport::new(passage.id());
    if doc.passage_id != passage.id() {
        report.error(
            RuleCode::PassageMismatch,
            &doc.passage_id,
            format!("refinement targets '{}'", doc.passage_id),
        );
    }
    let units = implicit_units(passage);
    let mut seen = HashSet::new();
    for e in &doc.entries {
        if !seen.insert(e.node_id.as_str()) {
            report.error(
                RuleCode::DuplicateEntry,
                &e.node_id,
                "node has more than one entry",
            );
        }
        match passage.node(&e.node_id) {
            None => report.error(
                RuleCode::EntryUnknownNode,
                &e.node_id,
                "entry names an unknown node",
            ),
            Some(n) if !n.is_implicit() => report.error(
                RuleCode::EntryNotImplicit,
                &e.node_id,
                "entry is attached to a node that is not Implicit",
            ),
            Some(_) => {
                let unit = units.iter().find(|u| u.node == e.node_id);
                if e.category.is_some() && unit.is_some_and(|u| !u.valid) {
                    report.warn(
                        RuleCode::CategoryOnNonParticipant,
                        &e.node_id,
                        "category assigned to an implicit unit that is not a Participant",
                    );
                }
            }
        }
    }
    if strict {
        for u in units.iter().filter(|u| u.valid) {
            let categorized = doc
                .entries
                .iter()
                .any(|e| e.node_id == u.node && e.category.is_some());
            if !categorized {
                report.error(
                    RuleCode::UncategorizedImplicit,
                    &u.node,
                    "uncategorized valid implicit",
                );
            }
        }
    }
    report.finish()
}
