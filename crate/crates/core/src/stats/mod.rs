//! Corpus aggregation: passage and implicit counters, category shares,
//! scheme comparison tables, inter-annotator agreement and corpus diffs.

mod compare;
mod diff;
mod distribution;
mod kappa;
pub mod render;

use std::collections::BTreeMap;
use std::ops::Add;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusError, CorpusHandle};
use crate::graph::{implicit_units, validate_graph, Passage};
use crate::refinement::RefinementDocument;

pub use compare::{compare_distributions, figref_row, ComparisonRow, ComparisonTable, RowDelta};
pub use diff::{diff_corpora, DiffReport, ImplicitChange, PassageDiff, StatsDelta};
pub use distribution::{category_distribution, CategoryShare, Distribution, DistributionReport};
pub use kappa::{cohen_kappa, cohen_kappa_labelings, parse_labeling, KappaResult, Labeling};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("passage '{passage}': valid implicit '{node}' has no confirmed category")]
    UncategorizedImplicit { passage: String, node: String },
    #[error("agreement needs at least one item")]
    EmptyItems,
    #[error("labelings cover different items (only in first: {only_first:?}, only in second: {only_second:?})")]
    ItemMismatch {
        only_first: Vec<String>,
        only_second: Vec<String>,
    },
    #[error("labelings have {0} and {1} items")]
    LengthMismatch(usize, usize),
    #[error("chance agreement is 1, kappa is undefined")]
    DegenerateAgreement,
    #[error("labeling line {line}: {message}")]
    Labeling { line: usize, message: String },
}

/// A set of passages with their refinement sidecars, keyed by passage id.
#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub passages: Vec<Passage>,
    pub refinements: BTreeMap<String, RefinementDocument>,
}

impl Corpus {
    pub fn new(passages: Vec<Passage>) -> Self {
        Corpus {
            passages,
            refinements: BTreeMap::new(),
        }
    }

    pub fn with_refinements(mut self, docs: impl IntoIterator<Item = RefinementDocument>) -> Self {
        for d in docs {
            self.refinements.insert(d.passage_id.clone(), d);
        }
        self
    }

    /// Loads every passage of `handle`; sidecars come from `refinements`
    /// when given.
    pub fn load(handle: &CorpusHandle, refinements: Option<&Path>) -> Result<Self, CorpusError> {
        let passages = handle.load_all()?;
        let refinements = match refinements {
            Some(dir) => handle.load_refinements(dir)?,
            None => BTreeMap::new(),
        };
        Ok(Corpus {
            passages,
            refinements,
        })
    }

    pub fn refinement(&self, passage_id: &str) -> Option<&RefinementDocument> {
        self.refinements.get(passage_id)
    }
}

/// Aggregate counters over a corpus.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub n_passages: usize,
    pub n_passages_with_implicit: usize,
    pub n_sentences: usize,
    pub n_sentences_with_implicit: usize,
    pub n_implicit_total: usize,
    /// Implicit units attached as Participants.
    pub n_implicit_valid: usize,
    pub n_tokens: usize,
    pub n_nodes: usize,
    pub n_edges: usize,
}

impl CorpusStats {
    /// Passages, passages with implicit, sentences, sentences with implicit,
    /// implicit units, valid implicit units.
    pub fn summary_row(&self) -> [usize; 6] {
        [
            self.n_passages,
            self.n_passages_with_implicit,
            self.n_sentences,
            self.n_sentences_with_implicit,
            self.n_implicit_total,
            self.n_implicit_valid,
        ]
    }
}

impl Add for CorpusStats {
    type Output = CorpusStats;

    fn add(self, o: CorpusStats) -> CorpusStats {
        CorpusStats {
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

impl std::iter::Sum for CorpusStats {
    fn sum<I: Iterator<Item = CorpusStats>>(iter: I) -> Self {
        iter.fold(CorpusStats::default(), Add::add)
    }
}

/// Counters for one passage. A sentence counts as having an implicit unit
/// if any implicit node, whatever its role, sits in it.
pub fn passage_stats(p: &Passage) -> CorpusStats {
    let index = p.index();
    let units = implicit_units(p);
    let mut implicit_sentences: Vec<usize> = units
        .iter()
        .filter_map(|u| index.sentence_of(&u.node))
        .collect();
    implicit_sentences.sort_unstable();
    implicit_sentences.dedup();
    CorpusStats {
        n_passages: 1,
        n_passages_with_implicit: usize::from(!units.is_empty()),
        n_sentences: p.sentence_count(),
        n_sentences_with_implicit: implicit_sentences.len(),
        n_implicit_total: units.len(),
        n_implicit_valid: units.iter().filter(|u| u.valid).count(),
        n_tokens: p.tokens().len(),
        n_nodes: p.nodes().len(),
        n_edges: p.edges().len(),
    }
}

/// Counters plus the ids of passages left out because they failed
/// validation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsReport {
    pub stats: CorpusStats,
    pub excluded: Vec<String>,
}

pub fn corpus_stats(corpus: &Corpus) -> StatsReport {
    stats_of(&corpus.passages)
}

pub(crate) fn stats_of(passages: &[Passage]) -> StatsReport {
    let per_passage: Vec<Result<CorpusStats, String>> = passages
        .par_iter()
        .map(|p| {
            if validate_graph(p).ok() {
                Ok(passage_stats(p))
            } else {
                Err(p.id().to_string())
            }
        })
        .collect();
    let mut report = StatsReport::default();
    for item in per_passage {
        match item {
            Ok(s) => report.stats = report.stats + s,
            Err(id) => report.excluded.push(id),
        }
    }
    report
}
