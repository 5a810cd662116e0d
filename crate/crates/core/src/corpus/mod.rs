//! On-disk formats: passage XML, refinement sidecars and corpus directories.

mod handle;
mod sidecar;
mod xml;

use std::fmt;

use thiserror::Error;

use crate::graph::ValidationReport;
use crate::refinement::ReviewStatus;

pub use handle::{
    read_passage, read_refinement_or_empty, refinement_path, write_atomic, write_refinement_file,
    CorpusHandle, FORMAT_VERSION, REFINEMENT_SUFFIX,
};
pub use sidecar::{parse_refinement, write_refinement};
pub use xml::{parse_passage, write_passage, DEFAULT_ROOT_ID};

/// Strict parsing rejects anything outside the documented schema; lenient
/// parsing skips unknown elements and attributes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ParseMode {
    #[default]
    Strict,
    Lenient,
}

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl Position {
    pub fn from_offset(text: &str, offset: usize) -> Position {
        let offset = offset.min(text.len());
        let prefix = &text.as_bytes()[..offset];
        let line = prefix.iter().filter(|&&b| b == b'\n').count() + 1;
        let line_start = prefix
            .iter()
            .rposition(|&b| b == b'\n')
            .map_or(0, |i| i + 1);
        let column = String::from_utf8_lossy(&prefix[line_start..])
            .chars()
            .count()
            + 1;
        Position { line, column }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("syntax error at {at}: {message}")]
    Syntax { at: Position, message: String },
    #[error("schema error at {at}: {message}")]
    Schema { at: Position, message: String },
    #[error("reference error at {at}: undeclared node '{id}'")]
    Reference { at: Position, id: String },
    #[error("duplicate node id '{id}' at {at}")]
    DuplicateNode { at: Position, id: String },
    #[error("unknown implicit category '{0}'")]
    UnknownCategory(String),
    #[error("duplicate refinement entry for node '{0}'")]
    DuplicateEntry(String),
    #[error("entry for node '{node}' has status {status} but no category")]
    MissingCategory { node: String, status: ReviewStatus },
    #[error("refusing to write invalid passage '{}'", .0.passage_id)]
    InvalidPassage(ValidationReport),
    #[error("duplicate passage id '{id}' in {path}")]
    DuplicatePassage { id: String, path: String },
    #[error("unknown passage '{0}'")]
    UnknownPassage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {error}")]
    InFile {
        path: String,
        error: Box<CorpusError>,
    },
}

impl CorpusError {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CorpusError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub(crate) fn in_file(path: &std::path::Path, source: CorpusError) -> Self {
        CorpusError::InFile {
            path: path.display().to_string(),
            error: Box::new(source),
        }
    }
}
