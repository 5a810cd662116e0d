//! Passage-to-sentence conversion.
//!
//! Splitting keeps every token and every within-sentence edge. A remote edge
//! whose origin scene and target end up in different sentences cannot
//! survive the cut, so it is replaced by a fresh implicit node under the
//! origin scene carrying the same categories. Such nodes are logged and
//! start out unreviewed, with no category.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{validate_graph, Edge, Node, NodeKind, Passage, Token, ValidationReport};
use crate::refinement::{RefinementDocument, RefinementEntry, ReviewStatus};

/// Separator between a passage id and the sentence number in split ids.
pub const SENTENCE_ID_SEPARATOR: &str = "#s";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("sentence boundaries: {0}")]
    Boundaries(String),
    #[error("passage '{passage}': unit '{unit}' spans a sentence boundary")]
    UnitSpansBoundary { passage: String, unit: String },
    #[error("passage '{}' fails validation", .0.passage_id)]
    InvalidPassage(ValidationReport),
    #[error("cannot merge: {0}")]
    InconsistentIds(String),
    #[error("cannot merge: node id '{0}' occurs in more than one sentence")]
    IdCollision(String),
    #[error("cannot merge an empty list of sentences")]
    EmptyMerge,
}

/// Half-open token ranges, one per sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentenceBoundaries(Vec<(usize, usize)>);

impl SentenceBoundaries {
    /// Checks that the ranges are non-empty, contiguous and cover
    /// `0..n_tokens`.
    pub fn new(ranges: Vec<(usize, usize)>, n_tokens: usize) -> Result<Self, TransformError> {
        let mut expected = 0;
        for &(start, end) in &ranges {
            if start != expected {
                return Err(TransformError::Boundaries(format!(
                    "sentence starts at {start}, expected {expected}"
                )));
            }
            if end <= start {
                return Err(TransformError::Boundaries(format!(
                    "empty sentence at {start}"
                )));
            }
            expected = end;
        }
        if expected != n_tokens {
            return Err(TransformError::Boundaries(format!(
                "sentences cover {expected} of {n_tokens} tokens"
            )));
        }
        Ok(SentenceBoundaries(ranges))
    }

    /// Whole passage as one sentence.
    pub fn single(n_tokens: usize) -> Self {
        SentenceBoundaries(vec![(0, n_tokens)])
    }

    /// Runs of equal `sentence_index` among the tokens.
    pub fn from_tokens(tokens: &[Token]) -> Self {
        let mut ranges: Vec<(usize, usize)> = Vec::new();
        for (i, t) in tokens.iter().enumerate() {
            match ranges.last_mut() {
                Some(last) if tokens[last.0].sentence_index == t.sentence_index => last.1 = i + 1,
                _ => ranges.push((i, i + 1)),
            }
        }
        SentenceBoundaries(ranges)
    }

    /// Sentence start offsets, ascending and beginning at 0.
    pub fn from_starts(starts: &[usize], n_tokens: usize) -> Result<Self, TransformError> {
        let mut ranges = Vec::with_capacity(starts.len());
        for (i, &s) in starts.iter().enumerate() {
            let end = starts.get(i + 1).copied().unwrap_or(n_tokens);
            ranges.push((s, end));
        }
        Self::new(ranges, n_tokens)
    }

    /// Parses an index file with one start offset per line.
    pub fn parse_index(text: &str, n_tokens: usize) -> Result<Self, TransformError> {
        let mut starts = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let n = line.parse().map_err(|_| {
                TransformError::Boundaries(format!("line {}: '{line}' is not an offset", i + 1))
            })?;
            starts.push(n);
        }
        Self::from_starts(&starts, n_tokens)
    }

    pub fn ranges(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn sentence_of_token(&self, token: usize) -> usize {
        self.0.partition_point(|&(_, end)| end <= token)
    }
}

/// One cross-sentence remote edge turned into an implicit node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conversion {
    /// Id of the sentence passage holding the new node.
    pub passage_id: String,
    pub origin_scene: String,
    pub removed_edge: Edge,
    pub implicit_node: String,
    pub status: ReviewStatus,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConversionLog {
    pub entries: Vec<Conversion>,
}

impl ConversionLog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Unreviewed, uncategorized refinement entries for the created nodes,
    /// one document per sentence passage that received any.
    pub fn refinements(&self) -> Vec<RefinementDocument> {
        let mut docs: Vec<RefinementDocument> = Vec::new();
        for c in &self.entries {
            let entry = RefinementEntry {
                node_id: c.implicit_node.clone(),
                category: None,
                status: c.status,
                note: format!("converted from remote {}", c.removed_edge.label()),
            };
            match docs.iter_mut().find(|d| d.passage_id == c.passage_id) {
                Some(d) => d.entries.push(entry),
                None => {
                    let mut d = RefinementDocument::new(c.passage_id.clone());
                    d.entries.push(entry);
                    docs.push(d);
                }
            }
        }
        docs
    }
}

/// Deterministic id for the implicit node replacing `edge` in `passage_id`.
pub fn converted_node_id(passage_id: &str, edge: &Edge) -> String {
    let mut h = Sha256::new();
    h.update(passage_id.as_bytes());
    h.update([0]);
    h.update(edge.parent.as_bytes());
    h.update([0]);
    h.update(edge.label().as_bytes());
    let digest = hex::encode(h.finalize());
    format!("imp-{}", &digest[..12])
}

/// Id of sentence `k` of `passage_id` when a passage has several.
pub fn sentence_id(passage_id: &str, k: usize) -> String {
    format!("{passage_id}{SENTENCE_ID_SEPARATOR}{k}")
}

/// Assigns a sentence number to every node; the root gets `None`.
fn node_sentences(
    p: &Passage,
    b: &SentenceBoundaries,
) -> Result<HashMap<String, usize>, TransformError> {
    let index = p.index();
    let mut out = HashMap::new();
    for n in index.preorder() {
        if n.id == p.root() {
            continue;
        }
        let sentences: HashSet<usize> = index
            .yield_tokens(&n.id)
            .into_iter()
            .map(|t| b.sentence_of_token(t))
            .collect();
        let s = match sentences.len() {
            0 => {
                // Token-less: follow the primary parent, root counts as the
                // first sentence.
                let parent = index.primary_parent_edge(&n.id).map(|e| e.parent.as_str());
                match parent {
                    Some(pid) if pid != p.root() => out.get(pid).copied().unwrap_or(0),
                    _ => 0,
                }
            }
            1 => *sentences.iter().next().unwrap(),
            _ => {
                return Err(TransformError::UnitSpansBoundary {
                    passage: p.id().to_string(),
                    unit: n.id.clone(),
                })
            }
        };
        out.insert(n.id.clone(), s);
    }
    Ok(out)
}

/// Splits a valid passage into one passage per sentence.
///
/// With a single sentence the passage keeps its id; otherwise sentence `k`
/// is named `<id>#s<k>`. Every part keeps the original root id, token texts
/// and sentence indices; token positions restart at 0 in each part.
pub fn split_passage(
    p: &Passage,
    b: &SentenceBoundaries,
) -> Result<(Vec<Passage>, ConversionLog), TransformError> {
    let report = validate_graph(p);
    if !report.ok() {
        return Err(TransformError::InvalidPassage(report));
    }
    SentenceBoundaries::new(b.0.clone(), p.tokens().len())?;
    let sentence = node_sentences(p, b)?;
    let n = b.len().max(1);
    let ids: Vec<String> = if n == 1 {
        vec![p.id().to_string()]
    } else {
        (0..n).map(|k| sentence_id(p.id(), k)).collect()
    };

    let mut nodes: Vec<Vec<Node>> = vec![Vec::new(); n];
    let mut edges: Vec<Vec<Edge>> = vec![Vec::new(); n];
    let mut log = ConversionLog::default();

    for node in p.nodes() {
        if node.id == p.root() {
            continue;
        }
        let k = sentence[&node.id];
        let mut node = node.clone();
        if let NodeKind::Terminal(t) = node.kind {
            node.kind = NodeKind::Terminal(t - b.0[k].0);
        }
        nodes[k].push(node);
    }
    for e in p.edges() {
        let child_s = sentence[&e.child];
        let parent_s = sentence.get(&e.parent).copied().unwrap_or(child_s);
        if e.is_remote() && parent_s != child_s {
            let id = converted_node_id(p.id(), e);
            nodes[parent_s].push(Node::implicit(id.clone()));
            edges[parent_s].push(Edge::primary(e.parent.clone(), id.clone(), e.categories));
            log.entries.push(Conversion {
                passage_id: ids[parent_s].clone(),
                origin_scene: e.parent.clone(),
                removed_edge: e.clone(),
                implicit_node: id,
                status: ReviewStatus::Unreviewed,
            });
        } else {
            edges[parent_s].push(e.clone());
        }
    }

    let root = p
        .node(p.root())
        .cloned()
        .expect("validated passage has its root");
    let mut out = Vec::with_capacity(n);
    for (k, (mut ns, es)) in nodes.into_iter().zip(edges).enumerate() {
        let (start, end) = b.0.get(k).copied().unwrap_or((0, 0));
        let tokens = p.tokens()[start..end]
            .iter()
            .map(|t| Token::new(t.index - start, t.text.clone(), t.sentence_index))
            .collect();
        ns.insert(0, root.clone());
        let part = Passage::new(ids[k].clone(), tokens, ns, es, p.root());
        let report = validate_graph(&part);
        if !report.ok() {
            return Err(TransformError::InvalidPassage(report));
        }
        out.push(part);
    }
    Ok((out, log))
}

/// Splits every passage at its token sentence indices, in parallel.
pub fn split_corpus(
    passages: &[Passage],
) -> Vec<Result<(Vec<Passage>, ConversionLog), TransformError>> {
    passages
        .par_iter()
        .map(|p| split_passage(p, &SentenceBoundaries::from_tokens(p.tokens())))
        .collect()
}

fn base_id(id: &str) -> &str {
    match id.rfind(SENTENCE_ID_SEPARATOR) {
        Some(i)
            if id[i + SENTENCE_ID_SEPARATOR.len()..]
                .parse::<usize>()
                .is_ok() =>
        {
            &id[..i]
        }
        _ => id,
    }
}

/// Concatenates sentence passages back into one passage.
///
/// Converted remotes stay implicit. Parts must share a root id and a base
/// passage id; any other node id may occur in one part only.
pub fn merge_sentences(parts: &[Passage]) -> Result<Passage, TransformError> {
    let first = parts.first().ok_or(TransformError::EmptyMerge)?;
    if parts.len() == 1 {
        return Ok(first.clone());
    }
    let id = base_id(first.id()).to_string();
    let root = first.root().to_string();
    let mut tokens = Vec::new();
    let mut nodes = vec![first.node(&root).cloned().ok_or_else(|| {
        TransformError::InconsistentIds(format!("'{}' lacks its root", first.id()))
    })?];
    let mut edges = Vec::new();
    let mut seen: HashSet<String> = HashSet::from([root.clone()]);
    for part in parts {
        if base_id(part.id()) != id {
            return Err(TransformError::InconsistentIds(format!(
                "'{}' does not belong to passage '{id}'",
                part.id()
            )));
        }
        if part.root() != root {
            return Err(TransformError::InconsistentIds(format!(
                "'{}' has root '{}', expected '{root}'",
                part.id(),
                part.root()
            )));
        }
        let offset = tokens.len();
        tokens.extend(
            part.tokens()
                .iter()
                .map(|t| Token::new(t.index + offset, t.text.clone(), t.sentence_index)),
        );
        for n in part.nodes() {
            if n.id == root {
                continue;
            }
            if !seen.insert(n.id.clone()) {
                return Err(TransformError::IdCollision(n.id.clone()));
            }
            let mut n = n.clone();
            if let NodeKind::Terminal(t) = n.kind {
                n.kind = NodeKind::Terminal(t + offset);
            }
            nodes.push(n);
        }
        edges.extend(part.edges().iter().cloned());
    }
    Ok(Passage::new(id, tokens, nodes, edges, root))
}
