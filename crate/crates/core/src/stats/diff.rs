use std::collections::BTreeMap;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use super::{stats_of, Corpus, CorpusStats};
use crate::graph::{implicit_units, CategorySet, Passage};
use crate::refinement::{ImplicitCategory, RefinementDocument, ReviewStatus};

/// Signed difference of two [`CorpusStats`] (refined minus original).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsDelta {
    pub n_passages: i64,
    pub n_passages_with_implicit: i64,
    pub n_sentences: i64,
    pub n_sentences_with_implicit: i64,
    pub n_implicit_total: i64,
    pub n_implicit_valid: i64,
    pub n_tokens: i64,
    pub n_nodes: i64,
    pub n_edges: i64,
}

impl StatsDelta {
    pub fn between(original: &CorpusStats, refined: &CorpusStats) -> Self {
        let d = |a: usize, b: usize| b as i64 - a as i64;
        StatsDelta {
            n_passages: d(original.n_passages, refined.n_passages),
            n_passages_with_implicit: d(
                original.n_passages_with_implicit,
                refined.n_passages_with_implicit,
            ),
            n_sentences: d(original.n_sentences, refined.n_sentences),
            n_sentences_with_implicit: d(
                original.n_sentences_with_implicit,
                refined.n_sentences_with_implicit,
            ),
            n_implicit_total: d(original.n_implicit_total, refined.n_implicit_total),
            n_implicit_valid: d(original.n_implicit_valid, refined.n_implicit_valid),
            n_tokens: d(original.n_tokens, refined.n_tokens),
            n_nodes: d(original.n_nodes, refined.n_nodes),
            n_edges: d(original.n_edges, refined.n_edges),
        }
    }
}

impl Add for StatsDelta {
    type Output = StatsDelta;

    fn add(self, o: StatsDelta) -> StatsDelta {
        StatsDelta {
            n_passages: self.n_passages + o.n_passages,
            n_passages_with_implicit: self.n_passages_with_implicit + o.n_passages_with_implicit,
            n_sentences: self.n_sentences + o.n_sentences,
            n_sentences_with_implicit: self.n_sentences_with_implicit + o.n_sentences_with_implicit,
            n_implicit_total: self.n_implicit_total + o.n_implicit_total,
            n_implicit_valid: self.n_implicit_valid + o.n_implicit_valid,
            n_tokens: self.n_tokens + o.n_tokens,
            n_nodes: self.n_nodes + o.n_nodes,
            n_edges: self.n_edges + o.n_edges,
        }
    }
}

/// An implicit node present on both sides whose label or refinement
/// category changed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImplicitChange {
    pub node: String,
    pub edge_before: CategorySet,
    pub edge_after: CategorySet,
    pub category_before: Option<ImplicitCategory>,
    pub category_after: Option<ImplicitCategory>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PassageDiff {
    pub passage_id: String,
    pub added: Vec<String>,
    pub removed: Vec<String>,
    pub changed: Vec<ImplicitChange>,
}

impl PassageDiff {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty() && self.changed.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub original: CorpusStats,
    pub refined: CorpusStats,
    pub delta: StatsDelta,
    /// Only passages with at least one implicit-level change.
    pub passages: Vec<PassageDiff>,
    pub only_original: Vec<String>,
    pub only_refined: Vec<String>,
}

fn confirmed_category(doc: Option<&RefinementDocument>, node: &str) -> Option<ImplicitCategory> {
    doc.and_then(|d| d.entry(node))
        .filter(|e| e.status == ReviewStatus::Confirmed)
        .and_then(|e| e.category)
}

fn diff_passage(
    a: &Passage,
    a_doc: Option<&RefinementDocument>,
    b: &Passage,
    b_doc: Option<&RefinementDocument>,
) -> PassageDiff {
    let before: BTreeMap<String, CategorySet> = implicit_units(a)
        .into_iter()
        .map(|u| (u.node, u.categories))
        .collect();
    let after: BTreeMap<String, CategorySet> = implicit_units(b)
        .into_iter()
        .map(|u| (u.node, u.categories))
        .collect();
    let mut diff = PassageDiff {
        passage_id: a.id().to_string(),
        ..PassageDiff::default()
    };
    for (node, edge_before) in &before {
        match after.get(node) {
            None => diff.removed.push(node.clone()),
            Some(edge_after) => {
                let category_before = confirmed_category(a_doc, node);
                let category_after = confirmed_category(b_doc, node);
                if edge_before != edge_after || category_before != category_after {
                    diff.changed.push(ImplicitChange {
                        node: node.clone(),
                        edge_before: *edge_before,
                        edge_after: *edge_after,
                        category_before,
                        category_after,
                    });
                }
            }
        }
    }
    diff.added = after
        .keys()
        .filter(|n| !before.contains_key(*n))
        .cloned()
        .collect();
    diff
}

/// Compares two versions of a corpus, aligning passages by id.
pub fn diff_corpora(original: &Corpus, refined: &Corpus) -> DiffReport {
    let a_stats = stats_of(&original.passages).stats;
    let b_stats = stats_of(&refined.passages).stats;
    let by_id: BTreeMap<&str, &Passage> = refined.passages.iter().map(|p| (p.id(), p)).collect();
    let mut report = DiffReport {
        original: a_stats,
        refined: b_stats,
        delta: StatsDelta::between(&a_stats, &b_stats),
        ..DiffReport::default()
    };
    for a in &original.passages {
        match by_id.get(a.id()) {
            Some(b) => {
                let d = diff_passage(
                    a,
                    original.refinement(a.id()),
                    b,
                    refined.refinement(b.id()),
                );
                if !d.is_empty() {
                    report.passages.push(d);
                }
            }
            None => report.only_original.push(a.id().to_string()),
        }
    }
    let original_ids: std::collections::BTreeSet<&str> =
        original.passages.iter().map(|p| p.id()).collect();
    report.only_refined = refined
        .passages
        .iter()
        .filter(|p| !original_ids.contains(p.id()))
        .map(|p| p.id().to_string())
        .collect();
    report
}
